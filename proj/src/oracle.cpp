#include "minorient/oracle.hpp"

#include <algorithm>
#include <limits>

#include "minorient/separation.hpp"

namespace minorient {

namespace {

void check_limit(const MixedGraph& g, std::size_t limit, const char* what) {
    if (g.size() > limit || g.size() > 62) {
        throw Error(ErrorKind::TooLarge, std::string(what) + " limited to " + std::to_string(limit) +
                                             " vertices, graph has " + std::to_string(g.size()));
    }
}

} // namespace

IndependenceModel independence_model(const MixedGraph& g, std::size_t limit) {
    check_limit(g, limit, "independence model enumeration");
    IndependenceModel model;
    const std::size_t n = g.size();
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex w = v + 1; w < n; ++w) {
            if (g.adjacent(v, w)) continue;
            const std::uint64_t pair = (std::uint64_t{1} << v) | (std::uint64_t{1} << w);
            const std::uint64_t full = (std::uint64_t{1} << n) - 1;
            const std::uint64_t free = full & ~pair;
            // Walk every submask of `free`, including the empty set.
            std::uint64_t c = free;
            while (true) {
                VertexSet given(n, c);
                if (is_m_separated(g, v, w, given)) model.insert({v, w, c});
                if (c == 0) break;
                c = (c - 1) & free;
            }
        }
    }
    return model;
}

const char* to_string(DecisionPath path) noexcept {
    return path == DecisionPath::BoundaryContainment ? "boundary-containment" : "oracle";
}

bool markov_equivalent_by_models(const MixedGraph& a, const MixedGraph& b, std::size_t limit) {
    if (a.names() != b.names()) throw Error(ErrorKind::VertexSetMismatch, "graphs have different vertex sets");
    return independence_model(a, limit) == independence_model(b, limit);
}

EquivalenceDecision markov_equivalent(const MixedGraph& a, const MixedGraph& b, std::size_t limit) {
    if (a.names() != b.names()) throw Error(ErrorKind::VertexSetMismatch, "graphs have different vertex sets");
    for (auto [bi, other] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        if (is_bidirected(*bi) && same_skeleton(*bi, *other) && is_ancestral(*other)) {
            return {static_cast<bool>(has_boundary_containment(*other)), DecisionPath::BoundaryContainment};
        }
    }
    return {markov_equivalent_by_models(a, b, limit), DecisionPath::Oracle};
}

std::vector<MixedGraph> enumerate_mags(const MixedGraph& skeleton_of, std::size_t limit) {
    check_limit(skeleton_of, limit, "maximal ancestral graph enumeration");
    static constexpr Mark kMarks[] = {Mark::Line, Mark::Out, Mark::In, Mark::Both};
    const auto edges = skeleton_of.edges();
    std::vector<std::size_t> digits(edges.size(), 0);
    GraphBuilder builder(skeleton_of);
    std::vector<MixedGraph> out;
    while (true) {
        for (std::size_t i = 0; i < edges.size(); ++i) builder.set(edges[i].u, edges[i].v, kMarks[digits[i]]);
        MixedGraph candidate = builder.build();
        if (is_ancestral(candidate) && is_maximal(candidate, limit)) out.push_back(std::move(candidate));

        std::size_t i = edges.size();
        while (i > 0 && digits[i - 1] == 3) digits[--i] = 0;
        if (i == 0) break;
        ++digits[i - 1];
    }
    return out;
}

std::vector<MixedGraph> minimal_arrowhead_equivalents(const MixedGraph& g, std::size_t limit) {
    check_limit(g, limit, "minimal orientation search");
    const IndependenceModel target = independence_model(g, limit);
    std::vector<MixedGraph> best;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    for (auto& candidate : enumerate_mags(skeleton(g), limit)) {
        const std::size_t arrows = arrowhead_count(candidate);
        if (arrows > best_count) continue;
        if (independence_model(candidate, limit) != target) continue;
        if (arrows < best_count) {
            best.clear();
            best_count = arrows;
        }
        best.push_back(std::move(candidate));
    }
    std::sort(best.begin(), best.end());
    return best;
}

} // namespace minorient
