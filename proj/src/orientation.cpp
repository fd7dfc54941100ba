#include "minorient/orientation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace minorient {

namespace {

void require_bidirected(const MixedGraph& g) {
    if (!is_bidirected(g)) throw Error(ErrorKind::NotBiDirected, "expected a bi-directed graph");
}

std::vector<VertexSet> closed_boundaries(const MixedGraph& g) {
    std::vector<VertexSet> bd;
    bd.reserve(g.size());
    for (Vertex v = 0; v < g.size(); ++v) bd.push_back(g.closed_boundary(v));
    return bd;
}

MixedGraph orient_with_positions(const MixedGraph& g, const std::vector<std::size_t>& position) {
    const MixedGraph gs = simplicial_graph(g);
    const auto bd = closed_boundaries(g);
    GraphBuilder b(gs);
    for (const auto& e : gs.edges()) {
        if (e.mark != Mark::Both) continue;
        auto [v, w] = position[e.u] < position[e.v] ? std::pair{e.u, e.v} : std::pair{e.v, e.u};
        if (bd[v].is_subset_of(bd[w])) b.set(v, w, Mark::Out);
    }
    return b.build();
}

} // namespace

MixedGraph simplicial_graph(const MixedGraph& g) {
    require_bidirected(g);
    const VertexSet simplicial = simplicial_vertices(g);
    GraphBuilder b(g);
    for (const auto& e : g.edges()) {
        const bool tail_u = simplicial.test(e.u);
        const bool tail_v = simplicial.test(e.v);
        if (tail_u && tail_v) b.set(e.u, e.v, Mark::Line);
        else if (tail_u) b.set(e.u, e.v, Mark::Out);
        else if (tail_v) b.set(e.v, e.u, Mark::Out);
    }
    return b.build();
}

TotalOrder boundary_order(const MixedGraph& g) {
    require_bidirected(g);
    TotalOrder order(g.size());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return g.neighbors(a).size() < g.neighbors(b).size(); });
    return order;
}

void check_extends_boundary_order(const MixedGraph& g, const TotalOrder& order) {
    std::vector<std::size_t> position(g.size(), g.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= g.size() || position[order[i]] != g.size()) {
            throw Error(ErrorKind::OrderViolatesBoundaryOrder, "order is not a permutation of the vertices");
        }
        position[order[i]] = i;
    }
    if (order.size() != g.size()) {
        throw Error(ErrorKind::OrderViolatesBoundaryOrder, "order is not a permutation of the vertices");
    }
    const auto bd = closed_boundaries(g);
    for (Vertex v = 0; v < g.size(); ++v) {
        for (Vertex w = 0; w < g.size(); ++w) {
            if (v != w && bd[v] != bd[w] && bd[v].is_subset_of(bd[w]) && position[w] < position[v]) {
                throw Error(ErrorKind::OrderViolatesBoundaryOrder,
                            g.name(w) + " precedes " + g.name(v) + " but Bd(" + g.name(v) + ") is strictly inside Bd(" +
                                g.name(w) + ")");
            }
        }
    }
}

MixedGraph minimally_orient(const MixedGraph& g, const TotalOrder& order) {
    require_bidirected(g);
    check_extends_boundary_order(g, order);
    std::vector<std::size_t> position(g.size());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    return orient_with_positions(g, position);
}

MixedGraph minimally_orient(const MixedGraph& g) { return minimally_orient(g, boundary_order(g)); }

std::vector<MixedGraph> all_minimal_orientations(const MixedGraph& g, std::size_t vertex_limit) {
    require_bidirected(g);
    if (g.size() > vertex_limit) {
        throw Error(ErrorKind::TooLarge, "orientation enumeration limited to " + std::to_string(vertex_limit) +
                                             " vertices, graph has " + std::to_string(g.size()));
    }
    const TotalOrder base = boundary_order(g);
    const VertexSet simplicial = simplicial_vertices(g);
    const auto bd = closed_boundaries(g);

    // Non-simplicial twin classes, each with the positions its members take
    // in the base order.
    std::map<std::vector<Vertex>, std::vector<std::size_t>> slots_by_class;
    for (std::size_t pos = 0; pos < base.size(); ++pos) {
        const Vertex v = base[pos];
        if (simplicial.test(v)) continue;
        slots_by_class[members(bd[v])].push_back(pos);
    }
    std::vector<std::vector<std::size_t>> slots;
    std::vector<std::vector<Vertex>> occupants;
    for (auto& [key, positions] : slots_by_class) {
        if (positions.size() < 2) continue;
        std::vector<Vertex> vs;
        for (auto p : positions) vs.push_back(base[p]);
        std::sort(vs.begin(), vs.end());
        slots.push_back(positions);
        occupants.push_back(std::move(vs));
    }

    std::set<MixedGraph> found;
    TotalOrder order = base;
    // Odometer over the per-class permutations.
    while (true) {
        for (std::size_t c = 0; c < slots.size(); ++c) {
            for (std::size_t i = 0; i < slots[c].size(); ++i) order[slots[c][i]] = occupants[c][i];
        }
        found.insert(minimally_orient(g, order));
        std::size_t c = 0;
        for (; c < slots.size(); ++c) {
            if (std::next_permutation(occupants[c].begin(), occupants[c].end())) break;
        }
        if (c == slots.size()) break;
    }
    return {found.begin(), found.end()};
}

std::vector<VertexSet> simplicial_blocks(const MixedGraph& g) {
    const VertexSet simplicial = simplicial_vertices(g);
    std::vector<VertexSet> blocks;
    VertexSet assigned(g.size());
    for (Vertex root : members(simplicial)) {
        if (assigned.test(root)) continue;
        VertexSet block(g.size());
        std::vector<Vertex> stack{root};
        block.set(root);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(v)) {
                if (simplicial.test(w) && !block.test(w)) {
                    block.set(w);
                    stack.push_back(w);
                }
            }
        }
        if (!is_simplicial_set(g, block)) {
            throw std::logic_error("simplicial component " + format_set(g, block) + " is not a simplicial set");
        }
        assigned |= block;
        blocks.push_back(std::move(block));
    }
    return blocks;
}

std::optional<ForbiddenSubgraph> forbidden_subgraph_witness(const MixedGraph& g, Vertex v, Vertex w) {
    require_bidirected(g);
    if (v >= g.size() || w >= g.size()) throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
    if (!g.adjacent(v, w)) {
        throw Error(ErrorKind::NotAdjacent, g.name(v) + " and " + g.name(w) + " are not adjacent");
    }
    const VertexSet bd_v = g.closed_boundary(v);
    const VertexSet bd_w = g.closed_boundary(w);
    const VertexSet only_v = bd_v - bd_w;
    const VertexSet only_w = bd_w - bd_v;
    if (only_v.none() || only_w.none()) return std::nullopt;
    const Vertex x = only_v.find_first();
    const Vertex y = only_w.find_first();
    return ForbiddenSubgraph{x, v, w, y, g.adjacent(x, y)};
}

MixedGraph witness_dag(const MixedGraph& gmin) {
    if (has_bidirected_edge(gmin)) {
        throw Error(ErrorKind::HasBiDirectedEdge, "a Markov equivalent DAG needs a graph without bi-directed edges");
    }
    GraphBuilder b(gmin);
    for (const auto& e : gmin.edges()) {
        if (e.mark == Mark::Line) b.set(e.u, e.v, Mark::Out);
    }
    return b.build();
}

const char* to_string(EquivalenceTag tag) noexcept {
    switch (tag) {
    case EquivalenceTag::UndirectedEquivalent: return "UNDIRECTED-EQUIVALENT";
    case EquivalenceTag::DagEquivalent: return "DAG-EQUIVALENT";
    case EquivalenceTag::Neither: return "NEITHER";
    }
    return "NEITHER";
}

EquivalenceClass classify(const MixedGraph& g) {
    EquivalenceClass out;
    out.minimal = minimally_orient(g);
    if (arrowhead_count(out.minimal) == 0) {
        out.tag = EquivalenceTag::UndirectedEquivalent;
        out.witness = out.minimal;
    } else if (!has_bidirected_edge(out.minimal)) {
        out.tag = EquivalenceTag::DagEquivalent;
        out.witness = witness_dag(out.minimal);
    } else {
        out.tag = EquivalenceTag::Neither;
        for (const auto& e : out.minimal.edges()) {
            if (e.mark != Mark::Both) continue;
            out.obstruction = forbidden_subgraph_witness(g, e.u, e.v);
            if (out.obstruction) break;
        }
        if (!out.obstruction) throw std::logic_error("bi-directed edge in G^min without an obstructing subgraph");
    }
    return out;
}

} // namespace minorient
