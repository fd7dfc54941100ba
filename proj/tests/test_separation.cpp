#include <doctest.h>

#include <random>

#include "minorient/separation.hpp"
#include "support.hpp"

using namespace minorient;
using namespace testsupport;

namespace {

const std::vector<Mark> kAllMarks{Mark::Line, Mark::Out, Mark::In, Mark::Both};

MixedGraph fig2i() { return parse_edges({}, {"v <-> w", "x <-> y", "w <-> y", "v <-> x"}); }
MixedGraph fig2iv() { return parse_edges({}, {"v -> w", "x -> y", "w <-> y", "v -- x"}); }

VertexSet given(const MixedGraph& g, std::vector<std::string> names) { return g.make_set(names); }

bool is_collider_at(const MixedGraph& g, const Path& p, std::size_t i) {
    return head_at(g, p[i], p[i - 1]) && head_at(g, p[i], p[i + 1]);
}

} // namespace

TEST_CASE("m-separation examples") {
    auto g = fig2i();
    const Vertex v = g.vertex("v"), y = g.vertex("y"), w = g.vertex("w"), x = g.vertex("x");
    CHECK(is_m_separated(g, v, y, g.no_vertices()));
    CHECK(is_m_separated(g, w, x, g.no_vertices()));
    // v <-> w <-> y is open once the collider w is conditioned on
    CHECK(!brute_separated(g, v, y, bits(4, 1U << w)));
    CHECK(!is_m_separated(g, v, y, given(g, {"w"})));
    auto g4 = fig2iv();
    CHECK(is_m_separated(g4, g4.vertex("v"), g4.vertex("y"), given(g4, {"x"})));
    CHECK(!is_m_separated(g, v, w, g.no_vertices()));
}

TEST_CASE("m-separation of sets") {
    auto g = fig2i();
    CHECK(is_m_separated(g, given(g, {"v"}), given(g, {"y"}), g.no_vertices()));
    CHECK(!is_m_separated(g, given(g, {"v"}), given(g, {"y", "w"}), g.no_vertices()));
    CHECK_THROWS_AS(is_m_separated(g, g.no_vertices(), given(g, {"y"}), g.no_vertices()), Error);
    CHECK_THROWS_AS(is_m_separated(g, given(g, {"v"}), given(g, {"v", "y"}), g.no_vertices()), Error);
}

TEST_CASE("m-separation errors") {
    auto g = fig2i();
    const Vertex v = g.vertex("v"), y = g.vertex("y");
    try {
        is_m_separated(g, v, v, g.no_vertices());
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OverlappingSets);
    }
    try {
        is_m_separated(g, v, y, given(g, {"y"}));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OverlappingSets);
    }
    try {
        is_m_separated(g, v, 17, g.no_vertices());
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownVertex);
    }
}

TEST_CASE("find_connecting_path") {
    // G2^min of the five/six vertex example
    auto g = parse_edges({}, {"v -> w", "x -> v", "y -> v", "x -> w", "y -> w", "z -> w"});
    auto p = find_connecting_path(g, g.vertex("x"), g.vertex("y"), given(g, {"w"}));
    REQUIRE(p);
    CHECK(p->path == Path{g.vertex("x"), g.vertex("w"), g.vertex("y")});
    CHECK(p->colliders == std::vector<bool>{true});

    auto g2 = fig2i();
    auto edge = find_connecting_path(g2, g2.vertex("v"), g2.vertex("w"), g2.no_vertices());
    REQUIRE(edge);
    CHECK(edge->path == Path{g2.vertex("v"), g2.vertex("w")});
    CHECK(!find_connecting_path(g2, g2.vertex("v"), g2.vertex("y"), g2.no_vertices()));
}

TEST_CASE("is_maximal") {
    for (const auto& g : all_bidirected(4)) CHECK(is_maximal(g));
    CHECK(is_maximal(parse_edges({}, {"1 -> 2", "2 <-> 3", "4 -> 3"})));
    CHECK(is_maximal(parse_edges({}, {"a -> b", "b <-> c", "a -> c"})));
    CHECK_THROWS_AS(is_maximal(parse_edges({}, {"a -> b", "b -> c", "c -> a"})), Error);
    GraphBuilder big(letters(17));
    CHECK_THROWS_AS(is_maximal(big.build()), Error);
}

TEST_CASE("property: is_maximal agrees with a brute separating-set search, exhaustive at 4 vertices") {
    std::size_t non_maximal = 0;
    for (const auto& g : all_graphs(4, kAllMarks, [](const MixedGraph& h) { return is_ancestral(h).ancestral; })) {
        bool brute = true;
        for (auto [v, w] : pairs(4)) {
            if (g.adjacent(v, w)) continue;
            bool found = false;
            for (std::uint64_t m = 0; m < 16 && !found; ++m) {
                if ((m >> v & 1U) || (m >> w & 1U)) continue;
                found = brute_separated(g, v, w, bits(4, m));
            }
            brute = brute && found;
        }
        REQUIRE(is_maximal(g) == brute);
        if (!brute) ++non_maximal;
    }
    CHECK(non_maximal > 0);
}

TEST_CASE("property: reachability agrees with path enumeration, exhaustive at 4 vertices") {
    for (const auto& g : all_graphs(4, kAllMarks)) {
        for (auto [v, w] : pairs(4)) {
            for (std::uint64_t m = 0; m < 16; ++m) {
                if ((m >> v & 1U) || (m >> w & 1U)) continue;
                const auto c = bits(4, m);
                const bool fast = is_m_separated(g, v, w, to_set(c));
                REQUIRE(fast == brute_separated(g, v, w, c));
                REQUIRE(fast == is_m_separated(g, w, v, to_set(c)));
            }
        }
    }
}

TEST_CASE("property: reachability agrees with path enumeration on random graphs up to 6 vertices") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 1500; ++t) {
        const std::size_t n = 5 + t % 2;
        auto g = random_graph(rng, n, 0.3 + 0.4 * (t % 3) / 2.0, kAllMarks);
        for (auto [v, w] : pairs(n)) {
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); m += 1 + (t % 5)) {
                if ((m >> v & 1U) || (m >> w & 1U)) continue;
                const auto c = bits(n, m);
                REQUIRE(is_m_separated(g, v, w, to_set(c)) == brute_separated(g, v, w, c));
            }
        }
    }
}

TEST_CASE("property: connecting paths on ancestral graphs with boundary containment") {
    // exhaustive at 4 vertices, sampled at 5
    std::vector<MixedGraph> corpus = all_graphs(4, kAllMarks, [](const MixedGraph& h) {
        return is_ancestral(h).ancestral && has_boundary_containment(h).holds;
    });
    std::mt19937_64 rng(99);
    while (corpus.size() < 4000) {
        auto g = random_graph(rng, 5, 0.6, kAllMarks);
        if (is_ancestral(g).ancestral && has_boundary_containment(g).holds) corpus.push_back(g);
    }
    for (const auto& g : corpus) {
        const std::size_t n = g.size();
        for (auto [v, w] : pairs(n)) {
            if (g.adjacent(v, w)) continue;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
                if ((m >> v & 1U) || (m >> w & 1U)) continue;
                const auto c = bits(n, m);
                std::vector<Path> connecting;
                for (auto& p : all_paths(g, v, w))
                    if (brute_connecting(g, p, c)) connecting.push_back(p);
                auto found = find_connecting_path(g, v, w, to_set(c));
                REQUIRE(found.has_value() == !connecting.empty());
                if (connecting.empty()) continue;
                std::size_t shortest = connecting.front().size();
                for (const auto& p : connecting) shortest = std::min(shortest, p.size());
                // every minimal-length connecting path is all colliders
                for (const auto& p : connecting) {
                    if (p.size() != shortest) continue;
                    for (std::size_t i = 1; i + 1 < p.size(); ++i) REQUIRE(is_collider_at(g, p, i));
                }
                // some connecting path has all non-endpoints colliders in C
                bool canonical = false;
                for (const auto& p : connecting) {
                    bool ok = true;
                    for (std::size_t i = 1; i + 1 < p.size(); ++i) ok = ok && is_collider_at(g, p, i) && c[p[i]];
                    canonical = canonical || ok;
                }
                REQUIRE(canonical);
                // the returned path is minimal and canonical
                REQUIRE(found->path.size() == shortest);
                REQUIRE(is_m_connecting(g, found->path, to_set(c)));
                for (std::size_t i = 1; i + 1 < found->path.size(); ++i) {
                    REQUIRE(found->colliders[i - 1]);
                    REQUIRE(c[found->path[i]]);
                }
            }
        }
    }
}
