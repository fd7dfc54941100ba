#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "minorient/graph.hpp"

namespace minorient {

/// v and w are m-separated given the vertex set encoded in `given`
/// (bit i = vertex i). Always stored with v < w.
struct SeparationStatement {
    Vertex v;
    Vertex w;
    std::uint64_t given;

    friend auto operator<=>(const SeparationStatement&, const SeparationStatement&) = default;
};

using IndependenceModel = std::set<SeparationStatement>;

struct OracleLimits {
    std::size_t independence_model = 7;
    std::size_t enumeration = 5;
};

/// Every statement the global Markov property makes. Enumerates all pairs
/// and all conditioning sets, so it throws TooLarge above `limit` vertices.
IndependenceModel independence_model(const MixedGraph& g, std::size_t limit = OracleLimits{}.independence_model);

enum class DecisionPath { BoundaryContainment, Oracle };

const char* to_string(DecisionPath path) noexcept;

struct EquivalenceDecision {
    bool equivalent = false;
    DecisionPath path = DecisionPath::Oracle;
    explicit operator bool() const noexcept { return equivalent; }
};

/// When one graph is bi-directed and the other is ancestral with the same
/// skeleton the answer is whether the other graph has the boundary
/// containment property. Anything else compares independence models.
/// Throws VertexSetMismatch, and TooLarge on the oracle path only.
EquivalenceDecision markov_equivalent(const MixedGraph& a, const MixedGraph& b,
                                      std::size_t limit = OracleLimits{}.independence_model);

/// Independence-model comparison only, never the fast path.
bool markov_equivalent_by_models(const MixedGraph& a, const MixedGraph& b,
                                 std::size_t limit = OracleLimits{}.independence_model);

/// All maximal ancestral graphs over the skeleton of `skeleton_of`. Edges
/// are assigned in pair order with marks cycling through (--, ->, <-, <->),
/// the last position varying fastest.
std::vector<MixedGraph> enumerate_mags(const MixedGraph& skeleton_of, std::size_t limit = OracleLimits{}.enumeration);

/// Brute-force minimally oriented graphs: the arrowhead-minimal members of
/// enumerate_mags(skeleton(G)) with the same independence model as G.
std::vector<MixedGraph> minimal_arrowhead_equivalents(const MixedGraph& g,
                                                      std::size_t limit = OracleLimits{}.enumeration);

} // namespace minorient
