#pragma once

// Brute-force reference implementations and generators shared by the tests.
// Nothing here calls the library's separation or orientation code.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "minorient/graph.hpp"

namespace testsupport {

using minorient::GraphBuilder;
using minorient::Mark;
using minorient::MixedGraph;
using minorient::Path;
using minorient::Vertex;
using minorient::VertexSet;

inline std::vector<std::string> letters(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
    return out;
}

inline std::vector<std::pair<Vertex, Vertex>> pairs(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
}

/// Every graph on n lettered vertices whose marks are drawn from `alphabet`
/// (Mark::None is always allowed), filtered by `keep`.
inline std::vector<MixedGraph> all_graphs(std::size_t n, const std::vector<Mark>& alphabet,
                                          const std::function<bool(const MixedGraph&)>& keep = {}) {
    const auto ps = pairs(n);
    std::vector<Mark> marks{Mark::None};
    marks.insert(marks.end(), alphabet.begin(), alphabet.end());
    std::vector<std::size_t> digit(ps.size(), 0);
    std::vector<MixedGraph> out;
    while (true) {
        GraphBuilder b(letters(n));
        for (std::size_t k = 0; k < ps.size(); ++k) b.set(ps[k].first, ps[k].second, marks[digit[k]]);
        auto g = b.build();
        if (!keep || keep(g)) out.push_back(std::move(g));
        std::size_t k = 0;
        while (k < ps.size() && ++digit[k] == marks.size()) digit[k++] = 0;
        if (k == ps.size()) break;
    }
    return out;
}

inline std::vector<MixedGraph> all_bidirected(std::size_t n) { return all_graphs(n, {Mark::Both}); }
inline std::vector<MixedGraph> all_undirected(std::size_t n) { return all_graphs(n, {Mark::Line}); }

inline bool brute_acyclic(const MixedGraph& g) {
    // Kahn's algorithm on the directed part.
    std::vector<std::size_t> indeg(g.size(), 0);
    for (Vertex v = 0; v < g.size(); ++v)
        for (Vertex w = 0; w < g.size(); ++w)
            if (g.mark(v, w) == Mark::Out) ++indeg[w];
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < g.size(); ++v)
        if (indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        ++seen;
        for (Vertex w = 0; w < g.size(); ++w)
            if (g.mark(v, w) == Mark::Out && --indeg[w] == 0) stack.push_back(w);
    }
    return seen == g.size();
}

inline std::vector<MixedGraph> all_dags(std::size_t n) {
    return all_graphs(n, {Mark::Out, Mark::In}, brute_acyclic);
}

/// an(C) by fixed-point iteration over directed edges.
inline std::vector<bool> brute_ancestors(const MixedGraph& g, const std::vector<bool>& c) {
    std::vector<bool> an = c;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex u = 0; u < g.size(); ++u)
            for (Vertex v = 0; v < g.size(); ++v)
                if (an[v] && !an[u] && g.mark(u, v) == Mark::Out) an[u] = changed = true;
    }
    return an;
}

inline bool head_at(const MixedGraph& g, Vertex at, Vertex other) {
    const Mark m = g.mark(at, other);
    return m == Mark::In || m == Mark::Both;
}

inline bool brute_connecting(const MixedGraph& g, const Path& p, const std::vector<bool>& c) {
    const auto an = brute_ancestors(g, c);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const bool collider = head_at(g, p[i], p[i - 1]) && head_at(g, p[i], p[i + 1]);
        if (collider ? !an[p[i]] : bool(c[p[i]])) return false;
    }
    return true;
}

/// Every simple path from v to w.
inline std::vector<Path> all_paths(const MixedGraph& g, Vertex v, Vertex w) {
    std::vector<Path> out;
    Path cur{v};
    std::vector<bool> on(g.size(), false);
    on[v] = true;
    std::function<void(Vertex)> dfs = [&](Vertex x) {
        for (Vertex y = 0; y < g.size(); ++y) {
            if (!g.adjacent(x, y) || on[y]) continue;
            cur.push_back(y);
            if (y == w) {
                out.push_back(cur);
            } else {
                on[y] = true;
                dfs(y);
                on[y] = false;
            }
            cur.pop_back();
        }
    };
    dfs(v);
    return out;
}

inline std::vector<bool> bits(std::size_t n, std::uint64_t mask) {
    std::vector<bool> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (mask >> i) & 1U;
    return out;
}

inline bool brute_separated(const MixedGraph& g, Vertex v, Vertex w, const std::vector<bool>& c) {
    for (const auto& p : all_paths(g, v, w))
        if (brute_connecting(g, p, c)) return false;
    return true;
}

using Statement = std::tuple<Vertex, Vertex, std::uint64_t>;

/// All (v < w, C) with v, w m-separated given C, by path enumeration.
inline std::set<Statement> brute_model(const MixedGraph& g) {
    std::set<Statement> out;
    const std::size_t n = g.size();
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w = v + 1; w < n; ++w) {
            const auto paths = all_paths(g, v, w);
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
                if ((m >> v & 1U) || (m >> w & 1U)) continue;
                const auto c = bits(n, m);
                bool sep = true;
                for (const auto& p : paths)
                    if (brute_connecting(g, p, c)) {
                        sep = false;
                        break;
                    }
                if (sep) out.emplace(v, w, m);
            }
        }
    return out;
}

inline VertexSet to_set(const std::vector<bool>& b) {
    VertexSet s(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) s[i] = b[i];
    return s;
}

/// Random simple mixed graph; each pair gets an edge with probability
/// `density`, its mark drawn uniformly from `alphabet`.
template <class Rng>
MixedGraph random_graph(Rng& rng, std::size_t n, double density, const std::vector<Mark>& alphabet) {
    std::bernoulli_distribution edge(density);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    GraphBuilder b(letters(n));
    for (auto [i, j] : pairs(n))
        if (edge(rng)) b.set(i, j, alphabet[pick(rng)]);
    return b.build();
}

template <class Rng>
MixedGraph random_bidirected(Rng& rng, std::size_t n, double density) {
    return random_graph(rng, n, density, {Mark::Both});
}

/// Random member of the model cone: diagonally dominant with random signs.
template <class Rng>
Eigen::MatrixXd random_cone_member(Rng& rng, const MixedGraph& g) {
    const auto n = Eigen::Index(g.size());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : pairs(g.size()))
        if (g.adjacent(i, j)) s(Eigen::Index(i), Eigen::Index(j)) = s(Eigen::Index(j), Eigen::Index(i)) = u(rng);
    for (Eigen::Index i = 0; i < n; ++i) s(i, i) = s.row(i).cwiseAbs().sum() + 0.5 + std::abs(u(rng));
    return s;
}

/// Sample covariance (divisor n) of n Gaussian draws with covariance sigma.
template <class Rng>
Eigen::MatrixXd sample_covariance(Rng& rng, const Eigen::MatrixXd& sigma, std::size_t n) {
    const Eigen::MatrixXd l = sigma.llt().matrixL();
    std::normal_distribution<double> z;
    Eigen::MatrixXd x(Eigen::Index(n), sigma.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        Eigen::VectorXd e(sigma.rows());
        for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = z(rng);
        x.row(r) = (l * e).transpose();
    }
    return x.transpose() * x / double(n);
}

} // namespace testsupport
