#include "doctest.h"

#include "weldlab/generator.hpp"
#include "weldlab/graph_io.hpp"
#include "weldlab/multigraph.hpp"
#include "weldlab/oracle.hpp"

#include <cmath>
#include <memory>
#include <sstream>

using namespace weldlab;

namespace {

Instance make_g1(int k, std::uint64_t seed) {
    InstanceSpec spec;
    spec.k = k;
    spec.variant = Variant::G1;
    spec.seed = seed;
    return sample_instance(spec);
}

} // namespace

TEST_CASE("degree counts with multiplicity and filters") {
    Instance inst = make_g1(3, 7);
    const MultiGraph& g = *inst.graph;

    bool saw_looped_root = false, saw_weld = false, saw_interior = false;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.role(v) == VertexRole::Root && g.has_loop(v)) {
            CHECK(g.degree(v) == 5); // 4 tree edges + self-loop counting 1
            CHECK(g.degree(v, EdgeFilter::doubles_and_loops()) == 4);
            saw_looped_root = true;
        }
        if (g.role(v) == VertexRole::Body && inst.truth.weld_bit[v]) {
            CHECK(g.degree(v) == 5);
            CHECK(g.degree(v, EdgeFilter::doubles()) == 3); // parent + 2 weld-cycle edges
            saw_weld = true;
        }
        if (g.role(v) == VertexRole::Body && !inst.truth.weld_bit[v]) {
            CHECK(g.degree(v) == 5); // 3 tree edges + double edge counting 2
            saw_interior = true;
        }
    }
    CHECK(saw_looped_root);
    CHECK(saw_weld);
    CHECK(saw_interior);

    CHECK_THROWS_AS(g.degree(g.vertex_count()), std::out_of_range);
}

TEST_CASE("filter widening never increases a degree") {
    Instance inst = make_g1(2, 3);
    const MultiGraph& g = *inst.graph;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        CHECK(g.degree(v) >= g.degree(v, EdgeFilter::doubles()));
        CHECK(g.degree(v, EdgeFilter::doubles()) >= g.degree(v, EdgeFilter::doubles_and_loops()));
    }
}

TEST_CASE("degree bound is enforced on construction") {
    MultiGraph g(3);
    g.add_edge(0, 1, EdgeKind::Double);
    g.add_edge(0, 2, EdgeKind::Double);
    g.add_loop(0);
    CHECK(g.degree(0) == 5);
    CHECK_THROWS(g.add_edge(0, 1, EdgeKind::Single));
    CHECK_THROWS(g.add_loop(0)); // at most one self-loop
    g.validate();
}

TEST_CASE("oracle answers are fixed per instance and billed per query") {
    Instance inst = make_g1(2, 11);
    OracleHandle oracle(inst.graph, 99);
    const OracleAnswer a = oracle.query(5);
    const OracleAnswer b = oracle.query(5);
    CHECK(oracle.query_count() == 2); // identical answers, counter +2
    CHECK(a.neighbors == b.neighbors);
    CHECK(a.role == b.role);
    CHECK(a.loop == b.loop);

    // a second handle with the same seed gives the same answers independently
    OracleHandle oracle2(inst.graph, 99);
    const OracleAnswer c = oracle2.query(5);
    CHECK(c.neighbors == a.neighbors);
    CHECK(oracle2.query_count() == 1);

    CHECK_THROWS_AS(oracle.query(oracle.vertex_count() + 17), std::invalid_argument);
}

TEST_CASE("answer shapes by role") {
    Instance inst = make_g1(3, 7);
    OracleHandle oracle(inst.graph, 31);
    bool saw_leaf = false, saw_root = false;
    for (VertexId v = 0; v < inst.graph->vertex_count(); ++v) {
        if (inst.graph->role(v) == VertexRole::Antenna && inst.graph->degree(v) == 3 && !saw_leaf) {
            const OracleAnswer a = oracle.query(oracle.to_label(v));
            CHECK(a.role == VertexRole::Antenna);
            int singles = 0, doubles = 0;
            for (const auto& [nbr, kind] : a.neighbors)
                (kind == EdgeKind::Double ? doubles : singles) += 1;
            CHECK(singles == 1); // antenna leaf: tree parent + 1 double
            CHECK(doubles == 1);
            saw_leaf = true;
        }
        if (inst.graph->role(v) == VertexRole::Root && !saw_root) {
            const OracleAnswer a = oracle.query(oracle.to_label(v));
            CHECK(a.role == VertexRole::Root);
            int singles = 0;
            for (const auto& [nbr, kind] : a.neighbors)
                if (kind == EdgeKind::Single && nbr != oracle.to_label(v)) ++singles;
            CHECK(singles == 4);
            CHECK(a.loop == inst.graph->has_loop(v));
            saw_root = true;
        }
    }
    CHECK(saw_leaf);
    CHECK(saw_root);
}

TEST_CASE("random_vertex on a single-vertex graph returns that vertex") {
    auto g = std::make_shared<MultiGraph>(1);
    OracleHandle oracle(g, 0);
    Rng rng = make_rng(1, "one");
    CHECK(oracle.random_vertex(rng) == 0);
}

TEST_CASE("random_vertex is free and close to uniform") {
    Instance inst = make_g1(2, 13); // 156 vertices
    OracleHandle oracle(inst.graph, 5);
    Rng rng = make_rng(21, "draws");
    const std::uint64_t n = oracle.vertex_count();
    const std::uint64_t draws = 100000;
    std::vector<std::uint32_t> freq(n, 0);
    for (std::uint64_t i = 0; i < draws; ++i) ++freq[oracle.random_vertex(rng)];
    CHECK(oracle.query_count() == 0); // sampling a start point is free

    const double p = 1.0 / static_cast<double>(n);
    const double sigma = std::sqrt(draws * p * (1.0 - p));
    for (std::uint64_t v = 0; v < n; ++v)
        CHECK(std::fabs(static_cast<double>(freq[v]) - draws * p) <= 5.0 * sigma);
}

TEST_CASE("graph files round-trip and reject malformed input") {
    SUBCASE("empty graph") {
        MultiGraph g(0);
        std::stringstream ss;
        write_graph(ss, g, {0, 2, "custom"});
        LoadedGraph back = read_graph(ss);
        CHECK(back.graph.vertex_count() == 0);
        CHECK(back.header.k == 2);
    }

    SUBCASE("k=3 instance round-trips to a structurally identical graph") {
        Instance inst = make_g1(3, 7);
        std::stringstream ss;
        write_graph(ss, *inst.graph, {inst.graph->vertex_count(), 3, "g1"});
        const std::string first = ss.str();
        LoadedGraph back = read_graph(ss);
        back.graph.validate();
        std::stringstream ss2;
        write_graph(ss2, back.graph, {back.graph.vertex_count(), 3, "g1"});
        CHECK(ss2.str() == first); // canonical form is a fixed point
    }

    SUBCASE("vertex with six single edges is rejected") {
        std::stringstream ss;
        ss << "weldlab-graph v1 n=7 k=2 variant=custom\n";
        ss << "0 role=body loop=0 : 1 2 3 4 5 6\n";
        for (int v = 1; v <= 6; ++v) ss << v << " role=body loop=0 : 0\n";
        CHECK_THROWS_AS(read_graph(ss), ParseError);
    }

    SUBCASE("asymmetric edge list is rejected with the offending line") {
        std::stringstream ss;
        ss << "weldlab-graph v1 n=2 k=2 variant=custom\n";
        ss << "0 role=body loop=0 : 1\n";
        ss << "1 role=body loop=0 :\n";
        try {
            read_graph(ss);
            CHECK(false);
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("asymmetric") != std::string::npos);
        }
    }

    SUBCASE("loop flag must match the neighbor list") {
        std::stringstream ss;
        ss << "weldlab-graph v1 n=1 k=2 variant=custom\n";
        ss << "0 role=body loop=1 :\n";
        CHECK_THROWS_AS(read_graph(ss), ParseError);
    }
}

TEST_CASE("advice sidecar round-trips") {
    std::vector<std::uint8_t> bits{1, 0, 1, 1, 0};
    std::stringstream ss;
    write_advice(ss, bits);
    CHECK(read_advice(ss, 5) == bits);

    std::stringstream bad("0 1\n0 0\n");
    CHECK_THROWS_AS(read_advice(bad, 2), ParseError); // duplicate + missing label
}
