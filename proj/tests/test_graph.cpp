#include <doctest.h>

#include <random>

#include "minorient/graph.hpp"
#include "support.hpp"

using namespace minorient;
using namespace testsupport;

namespace {

MixedGraph fig1() { return parse_edges({}, {"1 <-> 2", "2 <-> 3", "3 <-> 4"}); }
MixedGraph fig1_min() { return parse_edges({}, {"1 -> 2", "2 <-> 3", "4 -> 3"}); }
MixedGraph fig2iv() { return parse_edges({}, {"v -> w", "x -> y", "w <-> y", "v -- x"}); }
MixedGraph fig3_g1() { return parse_edges({}, {"v <-> w", "w <-> y", "v <-> y", "w <-> x", "v <-> x"}); }
MixedGraph fig3_g2() {
    return parse_edges({}, {"v <-> w", "w <-> y", "v <-> y", "w <-> x", "v <-> x", "w <-> z"});
}

VertexSet set_of(const MixedGraph& g, std::vector<std::string> names) { return g.make_set(names); }

} // namespace

TEST_CASE("build: 4-chain") {
    auto g = MixedGraph::build({"1", "2", "3", "4"}, {{"1", EdgeType::BiDirected, "2"},
                                                      {"2", EdgeType::BiDirected, "3"},
                                                      {"3", EdgeType::BiDirected, "4"}});
    CHECK(g.size() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.mark(0, 1) == Mark::Both);
    CHECK(!g.adjacent(0, 2));
    CHECK(g == fig1());
}

TEST_CASE("build: single vertex") {
    auto g = MixedGraph::build({"a"}, {});
    CHECK(g.size() == 1);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("build: errors") {
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("no error");
        return ErrorKind::ParseError;
    };
    CHECK(kind_of([] { MixedGraph::build({}, {{"a", EdgeType::BiDirected, "b"}, {"a", EdgeType::Directed, "b"}}); }) ==
          ErrorKind::ConflictingMarks);
    CHECK(kind_of([] { MixedGraph::build({}, {{"a", EdgeType::Directed, "b"}, {"b", EdgeType::Directed, "a"}}); }) ==
          ErrorKind::ConflictingMarks);
    CHECK(kind_of([] { MixedGraph::build({}, {{"a", EdgeType::Undirected, "a"}}); }) == ErrorKind::SelfEdge);
    CHECK(kind_of([] { MixedGraph::build({"a", "a"}, {}); }) == ErrorKind::DuplicateVertex);
    CHECK(kind_of([] { MixedGraph::build({"a b"}, {}); }) == ErrorKind::InvalidToken);
    CHECK(kind_of([] { MixedGraph::build({"a"}, {{"a", EdgeType::Directed, "b"}}, true); }) ==
          ErrorKind::UnknownVertex);
    // identical duplicates are idempotent, in either orientation for symmetric marks
    auto g = MixedGraph::build({}, {{"a", EdgeType::BiDirected, "b"}, {"b", EdgeType::BiDirected, "a"}});
    CHECK(g.edge_count() == 1);
}

TEST_CASE("boundary") {
    auto g = fig1();
    CHECK(format_set(g, g.boundary(g.vertex("2"))) == "{1,3}");
    CHECK(format_set(g, g.closed_boundary(g.vertex("2"))) == "{1,2,3}");
    auto iso = MixedGraph::build({"a", "b"}, {});
    CHECK(iso.boundary(0).none());
    CHECK(format_set(iso, iso.closed_boundary(0)) == "{a}");
    auto g2 = fig3_g2();
    CHECK(format_set(g2, g2.closed_boundary(g2.vertex("w"))) == "{v,w,x,y,z}");
    CHECK_THROWS_AS(g.vertex("9"), Error);
}

TEST_CASE("ancestors") {
    auto g = fig1();
    auto a = set_of(g, {"2", "3"});
    CHECK(ancestors(g, a) == a);
    auto m = fig1_min();
    CHECK(format_set(m, ancestors(m, set_of(m, {"2"}))) == "{1,2}");
    auto chain = parse_edges({}, {"a -> b", "b -> c"});
    CHECK(format_set(chain, ancestors(chain, set_of(chain, {"c"}))) == "{a,b,c}");
}

TEST_CASE("skeleton and induced subgraph") {
    auto sk = skeleton(fig1_min());
    CHECK(sk == parse_edges({}, {"1 -- 2", "2 -- 3", "3 -- 4"}));
    auto g2 = fig3_g2();
    CHECK(induced_subgraph(g2, set_of(g2, {"v", "w", "x", "y"})) == fig3_g1());
    CHECK(induced_subgraph(g2, g2.no_vertices()).size() == 0);
}

TEST_CASE("is_ancestral") {
    CHECK(is_ancestral(fig2iv()).ancestral);

    auto bad2 = parse_edges({}, {"a -- b", "c -> a"});
    auto r2 = is_ancestral(bad2);
    REQUIRE(!r2.ancestral);
    REQUIRE(r2.witness);
    CHECK(r2.witness->kind == AncestralViolation::Kind::ArrowheadAtUndirected);
    CHECK(r2.witness->vertices == std::vector<Vertex>{bad2.vertex("a"), bad2.vertex("b"), bad2.vertex("c")});

    // a <-> b with a -> c -> b: a is an ancestor of its spouse b
    auto bad3 = parse_edges({}, {"a <-> b", "a -> c", "c -> b"});
    auto r3 = is_ancestral(bad3);
    REQUIRE(!r3.ancestral);
    CHECK(r3.witness->kind == AncestralViolation::Kind::BiDirectedAncestor);
    const auto& wv = r3.witness->vertices;
    CHECK(wv[0] == bad3.vertex("a"));
    CHECK(wv[1] == bad3.vertex("b"));
    CHECK(Path(wv.begin() + 2, wv.end()) == Path{bad3.vertex("a"), bad3.vertex("c"), bad3.vertex("b")});
    // the path is a directed path, so a is in an({b})
    CHECK(ancestors(bad3, bad3.make_set({bad3.vertex("b")})).test(bad3.vertex("a")));

    auto cyc = parse_edges({}, {"a -> b", "b -> c", "c -> a"});
    auto rc = is_ancestral(cyc);
    REQUIRE(!rc.ancestral);
    CHECK(rc.witness->kind == AncestralViolation::Kind::DirectedCycle);
}

TEST_CASE("simplicial vertices") {
    auto g = fig1();
    CHECK(is_simplicial_vertex(g, g.vertex("1")));
    CHECK(is_simplicial_vertex(g, g.vertex("4")));
    CHECK(!is_simplicial_vertex(g, g.vertex("2")));
    CHECK(!is_simplicial_vertex(g, g.vertex("3")));
    auto g1 = fig3_g1();
    CHECK(format_set(g1, simplicial_vertices(g1)) == "{x,y}");
    auto tri = parse_edges({}, {"a <-> b", "b <-> c", "a <-> c"});
    CHECK(simplicial_vertices(tri).all());
    CHECK(is_simplicial_set(tri, tri.all_vertices()));
    CHECK(!is_simplicial_set(g, set_of(g, {"2"})));
}

TEST_CASE("arrowhead_count") {
    CHECK(arrowhead_count(fig3_g1()) == 10);
    CHECK(arrowhead_count(parse_edges({}, {"x -> v", "x -> w", "y -> v", "y -> w", "v -> w"})) == 5);
    CHECK(arrowhead_count(parse_edges({}, {"a -- b", "b -- c"})) == 0);
}

TEST_CASE("boundary containment") {
    CHECK(has_boundary_containment(fig3_g1()).holds);
    CHECK(has_boundary_containment(fig1_min()).holds);
    auto g = parse_edges({}, {"a -> b", "a <-> c"});
    auto r = has_boundary_containment(g);
    CHECK(!r.holds);
    REQUIRE(r.witness);
    CHECK(*r.witness == std::pair{g.vertex("a"), g.vertex("b")});
}

TEST_CASE("property: edge map symmetry on random graphs") {
    std::mt19937_64 rng(11);
    const std::vector<Mark> all{Mark::Line, Mark::Out, Mark::In, Mark::Both};
    for (int t = 0; t < 300; ++t) {
        auto g = random_graph(rng, 2 + t % 6, 0.5, all);
        for (Vertex v = 0; v < g.size(); ++v) {
            CHECK(g.mark(v, v) == Mark::None);
            for (Vertex w = 0; w < g.size(); ++w) CHECK(g.mark(w, v) == reverse(g.mark(v, w)));
        }
        auto sk = skeleton(g);
        CHECK(same_skeleton(sk, g));
        CHECK(arrowhead_count(sk) == 0);
    }
}

TEST_CASE("property: simplicial definitions agree, exhaustive up to 6 vertices") {
    std::size_t checked = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
        for (const auto& g : all_bidirected(n)) {
            for (Vertex v = 0; v < n; ++v) {
                REQUIRE(is_simplicial_vertex(g, v) == is_simplicial_by_containment(g, v));
                ++checked;
            }
        }
    }
    // marks do not enter either definition; cover mixed graphs at 4 vertices too
    for (const auto& g : all_graphs(4, {Mark::Line, Mark::Out, Mark::In, Mark::Both})) {
        for (Vertex v = 0; v < 4; ++v) REQUIRE(is_simplicial_vertex(g, v) == is_simplicial_by_containment(g, v));
    }
    CHECK(checked > 100000);
}

TEST_CASE("property: ancestors monotone and idempotent") {
    std::mt19937_64 rng(5);
    const std::vector<Mark> all{Mark::Line, Mark::Out, Mark::In, Mark::Both};
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + t % 6;
        auto g = random_graph(rng, n, 0.5, all);
        std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
        auto a = to_set(bits(n, pick(rng)));
        auto b = a | to_set(bits(n, pick(rng)));
        auto an_a = ancestors(g, a);
        CHECK(an_a.is_subset_of(ancestors(g, b)));
        CHECK(ancestors(g, an_a) == an_a);
        // agrees with fixed-point closure
        std::vector<bool> av(n);
        for (std::size_t i = 0; i < n; ++i) av[i] = a[i];
        CHECK(to_set(brute_ancestors(g, av)) == an_a);
    }
}

TEST_CASE("property: bi-directed, undirected and acyclic directed graphs are ancestral") {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (const auto& g : all_bidirected(n)) CHECK(is_ancestral(g).ancestral);
        for (const auto& g : all_undirected(n)) CHECK(is_ancestral(g).ancestral);
        for (const auto& g : all_dags(n)) CHECK(is_ancestral(g).ancestral);
    }
}
