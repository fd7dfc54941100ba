#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "minorient/error.hpp"

namespace minorient {

/// Index of a vertex in a graph. Indices follow the graph's vertex order,
/// which is lexicographic by name.
using Vertex = std::size_t;

using VertexSet = boost::dynamic_bitset<>;

/// Sequence of distinct, consecutively adjacent vertices.
using Path = std::vector<Vertex>;

enum class EdgeType { None, Undirected, Directed, BiDirected };

/// The edge map value E(v, w) for an ordered pair.
///   Line: v - w    Out: v -> w    In: v <- w    Both: v <-> w
enum class Mark : std::uint8_t { None, Line, Out, In, Both };

constexpr Mark reverse(Mark m) noexcept {
    switch (m) {
    case Mark::Out: return Mark::In;
    case Mark::In: return Mark::Out;
    default: return m;
    }
}

/// True if the edge carrying `m` (as seen from v) has an arrowhead at v.
constexpr bool arrowhead_at_source(Mark m) noexcept { return m == Mark::In || m == Mark::Both; }

EdgeType edge_type(Mark m) noexcept;

/// Edge declaration in terms of vertex names. For EdgeType::Directed the
/// edge points from `from` to `to`.
struct EdgeSpec {
    std::string from;
    EdgeType type;
    std::string to;
};

/// An edge with u < v; `mark` is E(u, v).
struct Edge {
    Vertex u;
    Vertex v;
    Mark mark;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable simple mixed graph. At most one edge per unordered pair and no
/// self-loops; the edge map is stored for both orientations so that mark
/// queries are O(1).
class MixedGraph {
public:
    MixedGraph() = default;

    /// Validating constructor. Vertex names must be unique tokens. Vertices
    /// that only appear in edge specs are added unless `strict` is set, in
    /// which case they raise UnknownVertex.
    static MixedGraph build(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& edges,
                            bool strict = false);

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }

    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(Vertex v) const { return names_.at(v); }
    std::optional<Vertex> find(std::string_view name) const;
    /// Throws UnknownVertex.
    Vertex vertex(std::string_view name) const;

    Mark mark(Vertex v, Vertex w) const { return marks_[v * size() + w]; }
    EdgeType type(Vertex v, Vertex w) const { return edge_type(mark(v, w)); }
    bool adjacent(Vertex v, Vertex w) const { return mark(v, w) != Mark::None; }
    bool arrowhead_at(Vertex v, Vertex w) const { return arrowhead_at_source(mark(v, w)); }

    /// Adjacent vertices in increasing order.
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }

    VertexSet no_vertices() const { return VertexSet(size()); }
    VertexSet all_vertices() const { return VertexSet(size()).set(); }
    VertexSet make_set(std::initializer_list<Vertex> vs) const;
    VertexSet make_set(const std::vector<std::string>& names) const;

    /// bd(v)
    VertexSet boundary(Vertex v) const;
    /// Bd(v) = bd(v) ∪ {v}
    VertexSet closed_boundary(Vertex v) const;
    /// Bd(A) = A ∪ every vertex adjacent to some member of A
    VertexSet closed_boundary(const VertexSet& a) const;

    std::vector<Edge> edges() const;
    std::size_t edge_count() const noexcept { return edge_count_; }

    friend bool operator==(const MixedGraph& a, const MixedGraph& b) {
        return a.names_ == b.names_ && a.marks_ == b.marks_;
    }
    friend bool operator<(const MixedGraph& a, const MixedGraph& b) {
        return std::tie(a.names_, a.marks_) < std::tie(b.names_, b.marks_);
    }

private:
    friend class GraphBuilder;

    void index();

    std::vector<std::string> names_;
    std::vector<Mark> marks_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Mutable staging area for deriving new graphs by index. Writes keep the
/// edge map symmetric.
class GraphBuilder {
public:
    explicit GraphBuilder(std::vector<std::string> sorted_unique_names);
    explicit GraphBuilder(const MixedGraph& g);

    std::size_t size() const noexcept { return names_.size(); }

    /// Sets E(v, w) = m and E(w, v) = reverse(m).
    GraphBuilder& set(Vertex v, Vertex w, Mark m);
    Mark mark(Vertex v, Vertex w) const { return marks_[v * size() + w]; }

    MixedGraph build() const;

private:
    std::vector<std::string> names_;
    std::vector<Mark> marks_;
};

/// Convenience for tests and fixtures: "a <-> b", "a -> b", "a <- b", "a -- b".
MixedGraph parse_edges(const std::vector<std::string>& vertices, const std::vector<std::string>& edges);

bool is_valid_token(std::string_view token) noexcept;

std::vector<Vertex> members(const VertexSet& s);

// -- structural queries ------------------------------------------------------

/// an(A): A together with every vertex that has a directed path into A.
VertexSet ancestors(const MixedGraph& g, const VertexSet& a);

MixedGraph skeleton(const MixedGraph& g);
MixedGraph induced_subgraph(const MixedGraph& g, const VertexSet& a);

bool is_bidirected(const MixedGraph& g) noexcept;
bool is_undirected(const MixedGraph& g) noexcept;
bool is_directed(const MixedGraph& g) noexcept;
bool has_bidirected_edge(const MixedGraph& g) noexcept;
bool same_skeleton(const MixedGraph& a, const MixedGraph& b);

bool is_complete(const MixedGraph& g, const VertexSet& a);

struct AncestralViolation {
    enum class Kind {
        DirectedCycle,          // vertices: the cycle v1 -> ... -> vk (-> v1)
        ArrowheadAtUndirected,  // vertices: {v, w, u} with v - w and u -> v or u <-> v
        BiDirectedAncestor,     // vertices: {x, y} with x <-> y, then a directed path x -> ... -> y
    };
    Kind kind;
    std::vector<Vertex> vertices;
};

struct AncestralCheck {
    bool ancestral = true;
    std::optional<AncestralViolation> witness;
    explicit operator bool() const noexcept { return ancestral; }
};

AncestralCheck is_ancestral(const MixedGraph& g);

/// Bd(v) is complete.
bool is_simplicial_vertex(const MixedGraph& g, Vertex v);
/// Bd(v) ⊆ Bd(w) for every w ∈ Bd(v). Agrees with is_simplicial_vertex.
bool is_simplicial_by_containment(const MixedGraph& g, Vertex v);
/// Bd(A) is complete.
bool is_simplicial_set(const MixedGraph& g, const VertexSet& a);

VertexSet simplicial_vertices(const MixedGraph& g);

/// Number of directed edges plus twice the number of bi-directed edges.
std::size_t arrowhead_count(const MixedGraph& g) noexcept;

struct BoundaryContainmentCheck {
    bool holds = true;
    /// First violating edge as (v, w): v - w or v -> w with Bd(v) ⊄ Bd(w).
    std::optional<std::pair<Vertex, Vertex>> witness;
    explicit operator bool() const noexcept { return holds; }
};

BoundaryContainmentCheck has_boundary_containment(const MixedGraph& g);

// -- formatting ----------------------------------------------------------------

/// "{a,b,c}" in vertex order.
std::string format_set(const MixedGraph& g, const VertexSet& s);
/// "a <-> b" etc., with the endpoints in vertex order.
std::string format_edge(const MixedGraph& g, Vertex v, Vertex w);
std::string format_path(const MixedGraph& g, const Path& p);

} // namespace minorient
