#include "minorient/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace minorient {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::SelfEdge: return "SelfEdge";
    case ErrorKind::ConflictingMarks: return "ConflictingMarks";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::InvalidToken: return "InvalidToken";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotAncestral: return "NotAncestral";
    case ErrorKind::NotBiDirected: return "NotBiDirected";
    case ErrorKind::NotAdjacent: return "NotAdjacent";
    case ErrorKind::HasBiDirectedEdge: return "HasBiDirectedEdge";
    case ErrorKind::OrderViolatesBoundaryOrder: return "OrderViolatesBoundaryOrder";
    case ErrorKind::VertexSetMismatch: return "VertexSetMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::NotInModelCone: return "NotInModelCone";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    }
    return "Unknown";
}

ErrorCategory category(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::AsymmetricMatrix:
    case ErrorKind::RaggedRows:
        return ErrorCategory::Parse;
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::MaxIterExceeded:
        return ErrorCategory::Numerical;
    default:
        return ErrorCategory::Precondition;
    }
}

EdgeType edge_type(Mark m) noexcept {
    switch (m) {
    case Mark::None: return EdgeType::None;
    case Mark::Line: return EdgeType::Undirected;
    case Mark::Out:
    case Mark::In: return EdgeType::Directed;
    case Mark::Both: return EdgeType::BiDirected;
    }
    return EdgeType::None;
}

bool is_valid_token(std::string_view token) noexcept {
    if (token.empty()) return false;
    return std::all_of(token.begin(), token.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return u > 0x20 && u < 0x7f && c != '#' && c != ',';
    });
}

std::vector<Vertex> members(const VertexSet& s) {
    std::vector<Vertex> out;
    out.reserve(s.count());
    for (auto i = s.find_first(); i != VertexSet::npos; i = s.find_next(i)) out.push_back(i);
    return out;
}

// -- MixedGraph ----------------------------------------------------------------

MixedGraph MixedGraph::build(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& edges,
                             bool strict) {
    std::set<std::string> declared;
    for (const auto& v : vertices) {
        if (!is_valid_token(v)) throw Error(ErrorKind::InvalidToken, "invalid vertex name '" + v + "'");
        if (!declared.insert(v).second) throw Error(ErrorKind::DuplicateVertex, "vertex '" + v + "' declared twice");
    }
    std::set<std::string> all = declared;
    for (const auto& e : edges) {
        for (const auto* end : {&e.from, &e.to}) {
            if (!is_valid_token(*end)) throw Error(ErrorKind::InvalidToken, "invalid vertex name '" + *end + "'");
            if (!declared.count(*end)) {
                if (strict) throw Error(ErrorKind::UnknownVertex, "edge refers to undeclared vertex '" + *end + "'");
                all.insert(*end);
            }
        }
    }

    GraphBuilder builder(std::vector<std::string>(all.begin(), all.end()));
    std::map<std::string, Vertex> index;
    Vertex next = 0;
    for (const auto& name : all) index.emplace(name, next++);

    for (const auto& e : edges) {
        if (e.from == e.to) throw Error(ErrorKind::SelfEdge, "edge from '" + e.from + "' to itself");
        Mark m = Mark::None;
        switch (e.type) {
        case EdgeType::Undirected: m = Mark::Line; break;
        case EdgeType::Directed: m = Mark::Out; break;
        case EdgeType::BiDirected: m = Mark::Both; break;
        case EdgeType::None:
            throw Error(ErrorKind::InvalidToken, "edge spec between '" + e.from + "' and '" + e.to + "' has no mark");
        }
        const Vertex v = index.at(e.from);
        const Vertex w = index.at(e.to);
        const Mark existing = builder.mark(v, w);
        if (existing != Mark::None && existing != m) {
            throw Error(ErrorKind::ConflictingMarks, "pair {" + e.from + "," + e.to + "} is given two different edges");
        }
        builder.set(v, w, m);
    }
    return builder.build();
}

std::optional<Vertex> MixedGraph::find(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) return std::nullopt;
    return static_cast<Vertex>(it - names_.begin());
}

Vertex MixedGraph::vertex(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw Error(ErrorKind::UnknownVertex, "no vertex named '" + std::string(name) + "'");
}

VertexSet MixedGraph::make_set(std::initializer_list<Vertex> vs) const {
    VertexSet s(size());
    for (Vertex v : vs) {
        if (v >= size()) throw Error(ErrorKind::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
        s.set(v);
    }
    return s;
}

VertexSet MixedGraph::make_set(const std::vector<std::string>& names) const {
    VertexSet s(size());
    for (const auto& n : names) s.set(vertex(n));
    return s;
}

VertexSet MixedGraph::boundary(Vertex v) const {
    if (v >= size()) throw Error(ErrorKind::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
    VertexSet s(size());
    for (Vertex w : adjacency_[v]) s.set(w);
    return s;
}

VertexSet MixedGraph::closed_boundary(Vertex v) const {
    VertexSet s = boundary(v);
    s.set(v);
    return s;
}

VertexSet MixedGraph::closed_boundary(const VertexSet& a) const {
    VertexSet s = a;
    for (auto v = a.find_first(); v != VertexSet::npos; v = a.find_next(v)) {
        for (Vertex w : adjacency_[v]) s.set(w);
    }
    return s;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < size(); ++u) {
        for (Vertex v : adjacency_[u]) {
            if (u < v) out.push_back({u, v, mark(u, v)});
        }
    }
    return out;
}

void MixedGraph::index() {
    const std::size_t n = size();
    adjacency_.assign(n, {});
    edge_count_ = 0;
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex w = 0; w < n; ++w) {
            if (mark(v, w) != Mark::None) {
                adjacency_[v].push_back(w);
                if (v < w) ++edge_count_;
            }
        }
    }
}

// -- GraphBuilder ----------------------------------------------------------------

GraphBuilder::GraphBuilder(std::vector<std::string> sorted_unique_names)
    : names_(std::move(sorted_unique_names)), marks_(names_.size() * names_.size(), Mark::None) {}

GraphBuilder::GraphBuilder(const MixedGraph& g) : names_(g.names_), marks_(g.marks_) {}

GraphBuilder& GraphBuilder::set(Vertex v, Vertex w, Mark m) {
    if (v == w) throw Error(ErrorKind::SelfEdge, "edge from '" + names_.at(v) + "' to itself");
    marks_.at(v * size() + w) = m;
    marks_.at(w * size() + v) = reverse(m);
    return *this;
}

MixedGraph GraphBuilder::build() const {
    MixedGraph g;
    g.names_ = names_;
    g.marks_ = marks_;
    g.index();
    return g;
}

MixedGraph parse_edges(const std::vector<std::string>& vertices, const std::vector<std::string>& edges) {
    std::vector<EdgeSpec> specs;
    for (const auto& text : edges) {
        std::istringstream in(text);
        std::string a, op, b;
        if (!(in >> a >> op >> b)) throw Error(ErrorKind::InvalidToken, "malformed edge '" + text + "'");
        if (op == "<->") specs.push_back({a, EdgeType::BiDirected, b});
        else if (op == "->") specs.push_back({a, EdgeType::Directed, b});
        else if (op == "<-") specs.push_back({b, EdgeType::Directed, a});
        else if (op == "--") specs.push_back({a, EdgeType::Undirected, b});
        else throw Error(ErrorKind::InvalidToken, "unknown edge mark '" + op + "'");
    }
    return MixedGraph::build(vertices, specs);
}

// -- structural queries ----------------------------------------------------------

VertexSet ancestors(const MixedGraph& g, const VertexSet& a) {
    if (a.size() != g.size()) throw Error(ErrorKind::UnknownVertex, "vertex set does not belong to this graph");
    VertexSet seen = a;
    std::vector<Vertex> stack = members(a);
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex u : g.neighbors(v)) {
            if (g.mark(u, v) == Mark::Out && !seen.test(u)) {
                seen.set(u);
                stack.push_back(u);
            }
        }
    }
    return seen;
}

MixedGraph skeleton(const MixedGraph& g) {
    GraphBuilder b(g);
    for (const auto& e : g.edges()) b.set(e.u, e.v, Mark::Line);
    return b.build();
}

MixedGraph induced_subgraph(const MixedGraph& g, const VertexSet& a) {
    if (a.size() != g.size()) throw Error(ErrorKind::UnknownVertex, "vertex set does not belong to this graph");
    const auto keep = members(a);
    std::vector<std::string> names;
    names.reserve(keep.size());
    for (Vertex v : keep) names.push_back(g.name(v));
    GraphBuilder b(std::move(names));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t j = i + 1; j < keep.size(); ++j) {
            const Mark m = g.mark(keep[i], keep[j]);
            if (m != Mark::None) b.set(i, j, m);
        }
    }
    return b.build();
}

namespace {

template <typename Pred>
bool all_edges(const MixedGraph& g, Pred pred) {
    for (const auto& e : g.edges()) {
        if (!pred(e.mark)) return false;
    }
    return true;
}

/// Directed path from `from` to `to` along -> edges (BFS, smallest-index
/// neighbors first). Empty if none.
Path directed_path(const MixedGraph& g, Vertex from, Vertex to) {
    std::vector<Vertex> parent(g.size(), g.size());
    std::deque<Vertex> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        if (v == to) break;
        for (Vertex w : g.neighbors(v)) {
            if (g.mark(v, w) == Mark::Out && parent[w] == g.size()) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    if (parent[to] == g.size()) return {};
    Path p{to};
    while (p.back() != from) p.push_back(parent[p.back()]);
    std::reverse(p.begin(), p.end());
    return p;
}

std::optional<Path> find_directed_cycle(const MixedGraph& g) {
    enum class Color : std::uint8_t { White, Grey, Black };
    const std::size_t n = g.size();
    std::vector<Color> color(n, Color::White);
    std::vector<Vertex> stack;

    // Iterative DFS keeping the grey path on `stack`.
    for (Vertex root = 0; root < n; ++root) {
        if (color[root] != Color::White) continue;
        std::vector<std::pair<Vertex, std::size_t>> frames{{root, 0}};
        color[root] = Color::Grey;
        stack.push_back(root);
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            const auto& nbrs = g.neighbors(v);
            bool descended = false;
            while (next < nbrs.size()) {
                const Vertex w = nbrs[next++];
                if (g.mark(v, w) != Mark::Out) continue;
                if (color[w] == Color::Grey) {
                    auto it = std::find(stack.begin(), stack.end(), w);
                    return Path(it, stack.end());
                }
                if (color[w] == Color::White) {
                    color[w] = Color::Grey;
                    stack.push_back(w);
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                color[frames.back().first] = Color::Black;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return std::nullopt;
}

} // namespace

bool is_bidirected(const MixedGraph& g) noexcept {
    return all_edges(g, [](Mark m) { return m == Mark::Both; });
}

bool is_undirected(const MixedGraph& g) noexcept {
    return all_edges(g, [](Mark m) { return m == Mark::Line; });
}

bool is_directed(const MixedGraph& g) noexcept {
    return all_edges(g, [](Mark m) { return m == Mark::Out || m == Mark::In; });
}

bool has_bidirected_edge(const MixedGraph& g) noexcept {
    return !all_edges(g, [](Mark m) { return m != Mark::Both; });
}

bool same_skeleton(const MixedGraph& a, const MixedGraph& b) {
    if (a.names() != b.names()) return false;
    for (Vertex v = 0; v < a.size(); ++v) {
        if (a.neighbors(v) != b.neighbors(v)) return false;
    }
    return true;
}

bool is_complete(const MixedGraph& g, const VertexSet& a) {
    const auto vs = members(a);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (!g.adjacent(vs[i], vs[j])) return false;
        }
    }
    return true;
}

AncestralCheck is_ancestral(const MixedGraph& g) {
    using Kind = AncestralViolation::Kind;
    if (auto cycle = find_directed_cycle(g)) {
        return {false, AncestralViolation{Kind::DirectedCycle, std::move(*cycle)}};
    }
    const auto edges = g.edges();
    for (const auto& e : edges) {
        if (e.mark != Mark::Line) continue;
        for (auto [v, w] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            for (Vertex u : g.neighbors(v)) {
                if (g.arrowhead_at(v, u)) return {false, AncestralViolation{Kind::ArrowheadAtUndirected, {v, w, u}}};
            }
        }
    }
    for (const auto& e : edges) {
        if (e.mark != Mark::Both) continue;
        for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            Path p = directed_path(g, x, y);
            if (!p.empty()) {
                std::vector<Vertex> witness{x, y};
                witness.insert(witness.end(), p.begin(), p.end());
                return {false, AncestralViolation{Kind::BiDirectedAncestor, std::move(witness)}};
            }
        }
    }
    return {};
}

bool is_simplicial_vertex(const MixedGraph& g, Vertex v) { return is_complete(g, g.closed_boundary(v)); }

bool is_simplicial_by_containment(const MixedGraph& g, Vertex v) {
    const VertexSet bd = g.closed_boundary(v);
    for (Vertex w : g.neighbors(v)) {
        if (!bd.is_subset_of(g.closed_boundary(w))) return false;
    }
    return true;
}

bool is_simplicial_set(const MixedGraph& g, const VertexSet& a) {
    if (a.size() != g.size()) throw Error(ErrorKind::UnknownVertex, "vertex set does not belong to this graph");
    return is_complete(g, g.closed_boundary(a));
}

VertexSet simplicial_vertices(const MixedGraph& g) {
    VertexSet s(g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        if (is_simplicial_vertex(g, v)) s.set(v);
    }
    return s;
}

std::size_t arrowhead_count(const MixedGraph& g) noexcept {
    std::size_t count = 0;
    for (const auto& e : g.edges()) {
        if (e.mark == Mark::Both) count += 2;
        else if (e.mark == Mark::Out || e.mark == Mark::In) count += 1;
    }
    return count;
}

BoundaryContainmentCheck has_boundary_containment(const MixedGraph& g) {
    std::vector<VertexSet> bd;
    bd.reserve(g.size());
    for (Vertex v = 0; v < g.size(); ++v) bd.push_back(g.closed_boundary(v));

    for (const auto& e : g.edges()) {
        switch (e.mark) {
        case Mark::Line:
            if (!bd[e.u].is_subset_of(bd[e.v])) return {false, std::pair{e.u, e.v}};
            if (!bd[e.v].is_subset_of(bd[e.u])) return {false, std::pair{e.v, e.u}};
            break;
        case Mark::Out:
            if (!bd[e.u].is_subset_of(bd[e.v])) return {false, std::pair{e.u, e.v}};
            break;
        case Mark::In:
            if (!bd[e.v].is_subset_of(bd[e.u])) return {false, std::pair{e.v, e.u}};
            break;
        default:
            break;
        }
    }
    return {};
}

// -- formatting --------------------------------------------------------------------

std::string format_set(const MixedGraph& g, const VertexSet& s) {
    std::string out = "{";
    bool first = true;
    for (Vertex v : members(s)) {
        if (!first) out += ',';
        out += g.name(v);
        first = false;
    }
    return out + "}";
}

namespace {
const char* arrow(Mark m) {
    switch (m) {
    case Mark::Line: return "--";
    case Mark::Out: return "->";
    case Mark::In: return "<-";
    case Mark::Both: return "<->";
    case Mark::None: break;
    }
    return "..";
}
} // namespace

std::string format_edge(const MixedGraph& g, Vertex v, Vertex w) {
    if (w < v) std::swap(v, w);
    return g.name(v) + " " + arrow(g.mark(v, w)) + " " + g.name(w);
}

std::string format_path(const MixedGraph& g, const Path& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0) out += std::string(" ") + arrow(g.mark(p[i - 1], p[i])) + " ";
        out += g.name(p[i]);
    }
    return out;
}

} // namespace minorient
