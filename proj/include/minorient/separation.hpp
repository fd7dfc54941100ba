#pragma once

#include <optional>
#include <vector>

#include "minorient/graph.hpp"

namespace minorient {

/// A path together with its collider flags; `colliders[i]` refers to
/// `path[i + 1]`.
struct ConnectingPath {
    Path path;
    std::vector<bool> colliders;
};

/// Both edges (prev, mid) and (mid, next) carry an arrowhead at mid.
bool is_collider(const MixedGraph& g, Vertex prev, Vertex mid, Vertex next);

/// Checks the m-connection conditions for an explicit path: non-colliders
/// outside C, colliders inside an(C). Does not check distinctness.
bool is_m_connecting(const MixedGraph& g, const Path& path, const VertexSet& given);

/// Reachability over (vertex, arrived-with-arrowhead) states with an(C)
/// precomputed. O(|V| + |E|) per query.
bool is_m_separated(const MixedGraph& g, Vertex v, Vertex w, const VertexSet& given);

bool is_m_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& given);

/// A shortest m-connecting path, or nullopt when v and w are m-separated.
/// Among the shortest paths the one with the most non-endpoints in C wins,
/// then the lexicographically smallest vertex sequence. On ancestral graphs
/// with the boundary containment property every non-endpoint of the
/// returned path is a collider in C.
std::optional<ConnectingPath> find_connecting_path(const MixedGraph& g, Vertex v, Vertex w, const VertexSet& given);

/// Searches every conditioning set for each non-adjacent pair. Exponential
/// in |V| - 2, hence the limit (TooLarge beyond it). Throws NotAncestral.
bool is_maximal(const MixedGraph& g, std::size_t limit = 16);

/// A conditioning set m-separating v and w, if one exists. The set
/// an({v,w}) \ {v,w} is tried first, then all subsets by increasing bitmask.
std::optional<VertexSet> find_separating_set(const MixedGraph& g, Vertex v, Vertex w);

} // namespace minorient
