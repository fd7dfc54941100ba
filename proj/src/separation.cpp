#include "minorient/separation.hpp"

#include <algorithm>

namespace minorient {

namespace {

void check_query(const MixedGraph& g, const VertexSet& given) {
    if (given.size() != g.size()) throw Error(ErrorKind::UnknownVertex, "conditioning set does not belong to this graph");
}

void check_pair(const MixedGraph& g, Vertex v, Vertex w, const VertexSet& given) {
    if (v >= g.size() || w >= g.size()) throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
    check_query(g, given);
    if (v == w) throw Error(ErrorKind::OverlappingSets, "endpoints must be distinct");
    if (given.test(v) || given.test(w)) {
        throw Error(ErrorKind::OverlappingSets, "conditioning set contains an endpoint");
    }
}

/// Marks every vertex reachable from `sources` by a walk whose inner
/// vertices satisfy the m-connection conditions.
VertexSet reachable(const MixedGraph& g, const VertexSet& sources, const VertexSet& given) {
    const std::size_t n = g.size();
    const VertexSet an_given = ancestors(g, given);
    // visited[2 * x + h]: reached x through an edge with (h = 1) or without
    // (h = 0) an arrowhead at x.
    std::vector<bool> visited(2 * n, false);
    std::vector<std::pair<Vertex, bool>> stack;
    VertexSet reached(n);

    for (Vertex s : members(sources)) {
        for (Vertex y : g.neighbors(s)) {
            const bool head = g.arrowhead_at(y, s);
            if (!visited[2 * y + head]) {
                visited[2 * y + head] = true;
                stack.emplace_back(y, head);
            }
        }
    }
    while (!stack.empty()) {
        const auto [x, head_in] = stack.back();
        stack.pop_back();
        reached.set(x);
        for (Vertex y : g.neighbors(x)) {
            const bool collider = head_in && g.arrowhead_at(x, y);
            const bool pass = collider ? an_given.test(x) : !given.test(x);
            if (!pass) continue;
            const bool head = g.arrowhead_at(y, x);
            if (!visited[2 * y + head]) {
                visited[2 * y + head] = true;
                stack.emplace_back(y, head);
            }
        }
    }
    return reached;
}

/// Depth-first search over simple paths. Walks and paths disagree once an
/// undirected edge meets an arrowhead or a directed cycle exists, so
/// non-ancestral graphs take this route.
bool connected_by_path(const MixedGraph& g, Path& current, std::vector<bool>& on_path, const VertexSet& targets,
                       const VertexSet& given, const VertexSet& an_given) {
    const Vertex last = current.back();
    for (Vertex next : g.neighbors(last)) {
        if (on_path[next]) continue;
        if (current.size() >= 2) {
            const Vertex prev = current[current.size() - 2];
            const bool collider = g.arrowhead_at(last, prev) && g.arrowhead_at(last, next);
            if (collider ? !an_given.test(last) : given.test(last)) continue;
        }
        if (targets.test(next)) return true;
        on_path[next] = true;
        current.push_back(next);
        const bool found = connected_by_path(g, current, on_path, targets, given, an_given);
        current.pop_back();
        on_path[next] = false;
        if (found) return true;
    }
    return false;
}

bool connected(const MixedGraph& g, const VertexSet& sources, const VertexSet& targets, const VertexSet& given) {
    if (is_ancestral(g)) return reachable(g, sources, given).intersects(targets);
    const VertexSet an_given = ancestors(g, given);
    std::vector<bool> on_path(g.size(), false);
    for (Vertex s : members(sources)) {
        Path current{s};
        on_path[s] = true;
        if (connected_by_path(g, current, on_path, targets, given, an_given)) return true;
        on_path[s] = false;
    }
    return false;
}

struct PathSearch {
    const MixedGraph& g;
    Vertex target;
    const VertexSet& given;
    const VertexSet& an_given;
    std::size_t length; // number of edges
    Path current;
    std::vector<bool> on_path;
    std::optional<Path> best;
    std::size_t best_in_given = 0;

    std::size_t in_given(const Path& p) const {
        std::size_t c = 0;
        for (std::size_t i = 1; i + 1 < p.size(); ++i) c += given.test(p[i]);
        return c;
    }

    bool inner_ok(Vertex prev, Vertex mid, Vertex next) const {
        return is_collider(g, prev, mid, next) ? an_given.test(mid) : !given.test(mid);
    }

    void offer() {
        const std::size_t c = in_given(current);
        if (!best || c > best_in_given || (c == best_in_given && current < *best)) {
            best = current;
            best_in_given = c;
        }
    }

    void extend() {
        const Vertex last = current.back();
        const std::size_t edges_so_far = current.size() - 1;
        for (Vertex next : g.neighbors(last)) {
            if (on_path[next]) continue;
            if (current.size() >= 2 && !inner_ok(current[current.size() - 2], last, next)) continue;
            if (next == target) {
                if (edges_so_far + 1 == length) {
                    current.push_back(next);
                    offer();
                    current.pop_back();
                }
                continue;
            }
            if (edges_so_far + 1 >= length) continue;
            on_path[next] = true;
            current.push_back(next);
            extend();
            current.pop_back();
            on_path[next] = false;
        }
    }
};

} // namespace

bool is_collider(const MixedGraph& g, Vertex prev, Vertex mid, Vertex next) {
    return g.arrowhead_at(mid, prev) && g.arrowhead_at(mid, next);
}

bool is_m_connecting(const MixedGraph& g, const Path& path, const VertexSet& given) {
    if (path.size() < 2) return false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!g.adjacent(path[i], path[i + 1])) return false;
    }
    const VertexSet an_given = ancestors(g, given);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const bool ok = is_collider(g, path[i - 1], path[i], path[i + 1]) ? an_given.test(path[i]) : !given.test(path[i]);
        if (!ok) return false;
    }
    return true;
}

bool is_m_separated(const MixedGraph& g, Vertex v, Vertex w, const VertexSet& given) {
    check_pair(g, v, w, given);
    if (g.adjacent(v, w)) return false;
    VertexSet source(g.size());
    source.set(v);
    return !connected(g, source, g.make_set({w}), given);
}

bool is_m_separated(const MixedGraph& g, const VertexSet& a, const VertexSet& b, const VertexSet& given) {
    check_query(g, given);
    if (a.size() != g.size() || b.size() != g.size()) {
        throw Error(ErrorKind::UnknownVertex, "vertex set does not belong to this graph");
    }
    if (a.none() || b.none()) throw Error(ErrorKind::EmptySet, "both endpoint sets must be non-empty");
    if (a.intersects(b) || a.intersects(given) || b.intersects(given)) {
        throw Error(ErrorKind::OverlappingSets, "endpoint and conditioning sets must be pairwise disjoint");
    }
    return !connected(g, a, b, given);
}

std::optional<ConnectingPath> find_connecting_path(const MixedGraph& g, Vertex v, Vertex w, const VertexSet& given) {
    check_pair(g, v, w, given);
    if (is_m_separated(g, v, w, given) && !g.adjacent(v, w)) return std::nullopt;

    const VertexSet an_given = ancestors(g, given);
    for (std::size_t length = 1; length < g.size(); ++length) {
        PathSearch search{g, w, given, an_given, length, {v}, std::vector<bool>(g.size(), false), {}, 0};
        search.on_path[v] = true;
        search.extend();
        if (search.best) {
            ConnectingPath out{std::move(*search.best), {}};
            for (std::size_t i = 1; i + 1 < out.path.size(); ++i) {
                out.colliders.push_back(is_collider(g, out.path[i - 1], out.path[i], out.path[i + 1]));
            }
            return out;
        }
    }
    return std::nullopt;
}

std::optional<VertexSet> find_separating_set(const MixedGraph& g, Vertex v, Vertex w) {
    if (g.adjacent(v, w)) return std::nullopt;
    VertexSet candidate = ancestors(g, g.make_set({v, w}));
    candidate.reset(v);
    candidate.reset(w);
    if (is_m_separated(g, v, w, candidate)) return candidate;

    std::vector<Vertex> rest;
    for (Vertex u = 0; u < g.size(); ++u) {
        if (u != v && u != w) rest.push_back(u);
    }
    const std::uint64_t subsets = std::uint64_t{1} << rest.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        VertexSet c(g.size());
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (mask >> i & 1U) c.set(rest[i]);
        }
        if (is_m_separated(g, v, w, c)) return c;
    }
    return std::nullopt;
}

bool is_maximal(const MixedGraph& g, std::size_t limit) {
    if (g.size() > limit) {
        throw Error(ErrorKind::TooLarge, "maximality check limited to " + std::to_string(limit) + " vertices, graph has " +
                                             std::to_string(g.size()));
    }
    if (!is_ancestral(g)) throw Error(ErrorKind::NotAncestral, "maximality is defined for ancestral graphs");
    for (Vertex v = 0; v < g.size(); ++v) {
        for (Vertex w = v + 1; w < g.size(); ++w) {
            if (!g.adjacent(v, w) && !find_separating_set(g, v, w)) return false;
        }
    }
    return true;
}

} // namespace minorient
