#pragma once

#include <optional>
#include <vector>

#include "minorient/graph.hpp"

namespace minorient {

/// A permutation of a graph's vertices, earliest first.
using TotalOrder = std::vector<Vertex>;

/// G^s: drop every arrowhead that sits at a simplicial vertex of the
/// bi-directed graph G. Throws NotBiDirected.
MixedGraph simplicial_graph(const MixedGraph& g);

/// Sort by (|Bd(v)|, name). Strict boundary containment implies a strictly
/// smaller boundary, so this always extends the containment order.
TotalOrder boundary_order(const MixedGraph& g);

/// Throws OrderViolatesBoundaryOrder if `order` is not a permutation of the
/// vertices or places w before v although Bd(v) ⊊ Bd(w).
void check_extends_boundary_order(const MixedGraph& g, const TotalOrder& order);

/// Minimally oriented graph for the bi-directed graph G: start from G^s and
/// turn each remaining v <-> w with Bd(v) ⊆ Bd(w) and v before w into v -> w.
MixedGraph minimally_orient(const MixedGraph& g, const TotalOrder& order);
MixedGraph minimally_orient(const MixedGraph& g);

/// Every minimally oriented graph of G, deduplicated and sorted.
///
/// Only the relative order of adjacent vertices with equal closed boundaries
/// influences the output, and those "twin" classes are cliques whose members
/// are incomparable under boundary containment. Enumerating the permutations
/// of each non-simplicial twin class inside the default order therefore
/// covers every linear extension's output without visiting all of them.
std::vector<MixedGraph> all_minimal_orientations(const MixedGraph& g, std::size_t vertex_limit = 8);

/// Inclusion-maximal simplicial sets, ordered by smallest member. They are
/// the connected components of the subgraph induced by the simplicial
/// vertices.
std::vector<VertexSet> simplicial_blocks(const MixedGraph& g);

/// Induced four-vertex subgraph x <-> v <-> w <-> y (with x <-> y when
/// `cycle`) that keeps v <-> w bi-directed in every minimally oriented graph.
struct ForbiddenSubgraph {
    Vertex x;
    Vertex v;
    Vertex w;
    Vertex y;
    bool cycle;
};

/// Throws NotBiDirected or NotAdjacent.
std::optional<ForbiddenSubgraph> forbidden_subgraph_witness(const MixedGraph& g, Vertex v, Vertex w);

/// Orient the undirected edges of a bi-directed-free minimally oriented
/// graph from earlier to later vertex, turning every simplicial block into a
/// complete DAG. Throws HasBiDirectedEdge.
MixedGraph witness_dag(const MixedGraph& gmin);

enum class EquivalenceTag { UndirectedEquivalent, DagEquivalent, Neither };

const char* to_string(EquivalenceTag tag) noexcept;

struct EquivalenceClass {
    EquivalenceTag tag = EquivalenceTag::Neither;
    /// Markov equivalent undirected graph or DAG; empty for Neither.
    std::optional<MixedGraph> witness;
    /// Why no DAG exists; set for Neither only.
    std::optional<ForbiddenSubgraph> obstruction;
    MixedGraph minimal;
};

EquivalenceClass classify(const MixedGraph& g);

} // namespace minorient
