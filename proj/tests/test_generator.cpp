#include "doctest.h"

#include "weldlab/analysis.hpp"
#include "weldlab/generator.hpp"

#include <map>
#include <set>

using namespace weldlab;

TEST_CASE("root-joined trees have the textbook shape") {
    CHECK_THROWS_AS(make_root_joined_tree(0), std::invalid_argument);

    RootJoinedTree t1 = make_root_joined_tree(1);
    CHECK(t1.graph.vertex_count() == 5); // root + 2 antenna + 2 body

    RootJoinedTree t3 = make_root_joined_tree(3);
    CHECK(t3.graph.vertex_count() == 29);
    std::uint64_t twice_edges = 0;
    for (VertexId v = 0; v < t3.graph.vertex_count(); ++v)
        twice_edges += static_cast<std::uint64_t>(t3.graph.degree(v));
    CHECK(twice_edges / 2 == 28);
    CHECK(t3.graph.degree(t3.root()) == 4);
    for (VertexId v = 1; v < t3.graph.vertex_count(); ++v) {
        const int d = t3.graph.degree(v);
        CHECK((d == 1 || d == 3));
    }
    CHECK(t3.body_leaves().size() == 8);
}

TEST_CASE("welding modes produce the advertised cycles") {
    Rng rng = make_rng(5, "weld-test");
    RootJoinedTree a = make_root_joined_tree(2), b = make_root_joined_tree(2);

    SUBCASE("alternating: one 8-cycle, weld degree 3 pre-advice") {
        WeldedPair pair = weld_pair(a, b, WeldMode::Alternating, rng);
        for (VertexId v : pair.left_leaves) CHECK(pair.graph.degree(v) == 3);
        for (VertexId v : pair.right_leaves) CHECK(pair.graph.degree(v) == 3);
        // walk the cycle: alternates sides, returns after 8 steps
        std::set<VertexId> left(pair.left_leaves.begin(), pair.left_leaves.end());
        std::set<VertexId> weld(pair.left_leaves.begin(), pair.left_leaves.end());
        weld.insert(pair.right_leaves.begin(), pair.right_leaves.end());
        VertexId start = pair.left_leaves[0], cur = start, prev = start;
        // first cycle neighbor of start
        for (const NeighborEntry& e : pair.graph.neighbors(start))
            if (weld.count(e.neighbor)) { cur = e.neighbor; break; }
        int steps = 1;
        bool side = true; // cur is on the right side now
        while (cur != start) {
            CHECK(left.count(cur) != (side ? 1u : 0u));
            VertexId nxt = cur;
            for (const NeighborEntry& e : pair.graph.neighbors(cur))
                if (weld.count(e.neighbor) && e.neighbor != prev) { nxt = e.neighbor; break; }
            prev = cur;
            cur = nxt;
            side = !side;
            ++steps;
            REQUIRE(steps <= 9);
        }
        CHECK(steps == 8); // single alternating Hamiltonian cycle
    }

    SUBCASE("self: two disjoint 4-cycles") {
        WeldedPair pair = weld_pair(a, b, WeldMode::Self, rng);
        std::set<VertexId> left(pair.left_leaves.begin(), pair.left_leaves.end());
        for (VertexId v : pair.left_leaves) {
            int weld_edges = 0;
            for (const NeighborEntry& e : pair.graph.neighbors(v))
                if (left.count(e.neighbor)) ++weld_edges;
            CHECK(weld_edges == 2); // cycle stays within the same tree
        }
    }

    SUBCASE("degenerate self weld is rejected") {
        RootJoinedTree s1 = make_root_joined_tree(1), s2 = make_root_joined_tree(1);
        CHECK_THROWS_AS(weld_pair(s1, s2, WeldMode::Self, rng), std::invalid_argument);
    }

    SUBCASE("leaf-count mismatch is rejected") {
        RootJoinedTree s3 = make_root_joined_tree(3);
        CHECK_THROWS_AS(weld_pair(a, s3, WeldMode::Alternating, rng), std::invalid_argument);
    }
}

TEST_CASE("self-loop classes have the step-b sizes") {
    Rng rng = make_rng(9, "loops");
    CHECK_THROWS_AS(assign_self_loops(13, 3, 1, rng), std::invalid_argument);

    LoopAssignment a = assign_self_loops(14, 3, 1, rng);
    std::map<int, int> hist;
    for (std::uint8_t c : a.loops_per_pair) ++hist[c];
    CHECK(hist[1] == 8); // 2^k pairs with one loop
    CHECK(hist[2] == 3); // 2^{k-1}-1 with both
    CHECK(hist[0] == 3);
    std::uint64_t loops = 0;
    for (std::uint8_t c : a.loops_per_pair) loops += c;
    CHECK(loops == 14); // 2^{k+1}-2 = half of the 2(2^{k+1}-2) roots
    CHECK(hist[0] + hist[2] == 6); // even-parity candies = 2^k - 2
}

TEST_CASE("advice edges form the parity bijections") {
    InstanceSpec spec;
    spec.k = 3;
    spec.variant = Variant::G1;
    spec.seed = 21;
    Instance inst = sample_instance(spec);
    const MultiGraph& g = *inst.graph;

    std::uint64_t weld_edges = 0, interior_edges = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        int doubles = 0;
        for (const NeighborEntry& e : g.neighbors(v)) {
            if (e.kind != EdgeKind::Double) continue;
            ++doubles;
            if (g.role(v) == VertexRole::Body) {
                CHECK(g.role(e.neighbor) == VertexRole::Antenna);
                const bool partner_odd = inst.truth.pair_loops[inst.truth.pair_id[e.neighbor]] == 1;
                if (inst.truth.weld_bit[v]) {
                    CHECK(partner_odd); // weld -> antenna in a one-loop candy
                    ++weld_edges;
                } else {
                    CHECK_FALSE(partner_odd); // interior -> even-parity candy
                    ++interior_edges;
                }
            }
        }
        if (g.role(v) == VertexRole::Root) CHECK(doubles == 0);
        else CHECK(doubles == 1); // every non-root vertex carries exactly one
    }
    CHECK(weld_edges == 224);
    CHECK(interior_edges == 168);
}

TEST_CASE("sampled instances satisfy the census closed forms") {
    for (int k = 2; k <= 6; ++k) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            for (Variant variant : {Variant::G1, Variant::G2}) {
                InstanceSpec spec;
                spec.k = k;
                spec.variant = variant;
                spec.seed = seed;
                Instance inst = sample_instance(spec);
                inst.graph->validate();
                CensusReport rep = structural_census(inst);
                INFO("k=", k, " seed=", seed, " variant=", variant_name(variant), ": ",
                     rep.failed_identity);
                CHECK(rep.pass);
            }
        }
    }
}

TEST_CASE("k=3 G1: 812 vertices, 14 candies, reduced graph bipartite") {
    InstanceSpec spec;
    spec.k = 3;
    spec.variant = Variant::G1;
    spec.seed = 7;
    Instance inst = sample_instance(spec);
    CHECK(inst.graph->vertex_count() == 812);
    int maxdeg = 0;
    for (VertexId v = 0; v < inst.graph->vertex_count(); ++v)
        maxdeg = std::max(maxdeg, inst.graph->degree(v));
    CHECK(maxdeg == 5);

    ReducedGraph red = ReducedGraph::from(*inst.graph);
    CHECK(reduced_components(red).size() == 14);
    CHECK(two_color(red).bipartite);

    spec.variant = Variant::G2;
    Instance no = sample_instance(spec);
    CHECK(no.graph->vertex_count() == 812); // count-identical to the sibling
    CHECK(reduced_components(ReducedGraph::from(*no.graph)).size() == 28);
}

TEST_CASE("generation is deterministic in the seed") {
    InstanceSpec spec;
    spec.k = 2;
    spec.variant = Variant::G1;
    spec.seed = 424242;
    Instance a = sample_instance(spec);
    Instance b = sample_instance(spec);
    CHECK(edge_symmetric_difference(*a.graph, *b.graph) == 0);
    CHECK(a.truth.weld_bit == b.truth.weld_bit);
}

TEST_CASE("general yes instances scale with j and tolerate shorter cycles") {
    InstanceSpec spec;
    spec.k = 2;
    spec.variant = Variant::YesGeneral;
    spec.j = 2;
    spec.seed = 77;
    spec.single_long_weld = false;
    Instance inst = sample_instance(spec);
    CHECK(inst.graph->vertex_count() == instance_vertex_count(2, 2));
    inst.graph->validate();
    CensusReport rep = structural_census(inst);
    INFO(rep.failed_identity);
    CHECK(rep.pass);
    // every weld vertex still carries exactly 2 cycle edges
    for (VertexId v = 0; v < inst.graph->vertex_count(); ++v)
        if (inst.truth.weld_bit[v])
            CHECK(inst.graph->degree(v, EdgeFilter::doubles()) == 3);
}

TEST_CASE("sec63 convention swaps the advice classes consistently") {
    InstanceSpec spec;
    spec.k = 3;
    spec.variant = Variant::G1;
    spec.seed = 5;
    spec.advice = AdviceConvention::Sec63;
    Instance inst = sample_instance(spec);
    inst.graph->validate();
    CensusReport rep = structural_census(inst);
    INFO(rep.failed_identity);
    CHECK(rep.pass);
    // weld vertices now match antennas in even-parity pairs
    const MultiGraph& g = *inst.graph;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.role(v) != VertexRole::Body || !inst.truth.weld_bit[v]) continue;
        for (const NeighborEntry& e : g.neighbors(v))
            if (e.kind == EdgeKind::Double)
                CHECK(inst.truth.pair_loops[inst.truth.pair_id[e.neighbor]] != 1);
    }
}
