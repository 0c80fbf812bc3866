#include "doctest.h"

#include "weldlab/generator.hpp"
#include "weldlab/oracle.hpp"
#include "weldlab/tester.hpp"

#include <memory>

using namespace weldlab;

namespace {

struct Fixture {
    Instance inst;
    std::shared_ptr<OracleHandle> oracle;
    std::vector<std::uint8_t> advice_bits;

    Fixture(int k, Variant variant, std::uint64_t seed) {
        InstanceSpec spec;
        spec.k = k;
        spec.variant = variant;
        spec.seed = seed;
        inst = sample_instance(spec);
        oracle = std::make_shared<OracleHandle>(inst.graph, derive_seed(seed, "oracle"));
        advice_bits = inst.truth.weld_bit;
    }

    AdviceSource advice() const {
        auto bits = advice_bits;
        auto o = oracle;
        return [bits, o](Label l) { return (int)bits[o->to_internal(l)]; };
    }

    TestContext context(std::uint64_t ctx_seed = 1, AdviceSource src = nullptr) {
        TesterParams params;
        params.k = inst.spec.k;
        params.eps = 0.1;
        params.seed = ctx_seed;
        return TestContext(*oracle, src ? src : advice(), params);
    }

    Label label_of_first(auto&& pred) const {
        for (VertexId v = 0; v < inst.graph->vertex_count(); ++v)
            if (pred(v)) return oracle->to_label(v);
        REQUIRE(false);
        return 0;
    }
};

} // namespace

TEST_CASE("consistency test on clean instances") {
    Fixture fx(3, Variant::G1, 31);
    auto ctx = fx.context();

    SUBCASE("roots, interior and weld vertices all pass") {
        for (auto pred : {+[](const Instance& i, VertexId v) { return i.graph->role(v) == VertexRole::Root; },
                          +[](const Instance& i, VertexId v) { return i.truth.weld_bit[v] == 1; },
                          +[](const Instance& i, VertexId v) {
                              return i.graph->role(v) == VertexRole::Antenna;
                          }}) {
            const Label l = fx.label_of_first([&](VertexId v) { return pred(fx.inst, v); });
            const Verdict verdict = ctx.consistency_test(l);
            CHECK(verdict.accept);
        }
    }

    SUBCASE("outcomes are rng-independent on intact candies") {
        const Label weld = fx.label_of_first([&](VertexId v) { return fx.inst.truth.weld_bit[v]; });
        const Label interior = fx.label_of_first([&](VertexId v) {
            return fx.inst.graph->role(v) == VertexRole::Body && !fx.inst.truth.weld_bit[v];
        });
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            auto c = fx.context(seed);
            CHECK(c.consistency_test(weld).accept);
            CHECK(c.weld_consistency_test(interior).accept);
        }
    }

    SUBCASE("marked interior vertex is rejected") {
        // an interior body vertex whose tree neighbors are all unmarked, so
        // the marked filter leaves its full degree visible
        const VertexId interior = [&] {
            for (VertexId v = 0; v < fx.inst.graph->vertex_count(); ++v) {
                if (fx.inst.graph->role(v) != VertexRole::Body || fx.inst.truth.weld_bit[v])
                    continue;
                bool clean = true;
                for (const NeighborEntry& e : fx.inst.graph->neighbors(v))
                    if (e.kind == EdgeKind::Single && fx.inst.truth.weld_bit[e.neighbor])
                        clean = false;
                if (clean) return v;
            }
            return VertexId{0};
        }();
        auto corrupted = fx.advice_bits;
        corrupted[interior] = 1;
        auto o = fx.oracle;
        auto ctx2 = fx.context(2, [corrupted, o](Label l) { return (int)corrupted[o->to_internal(l)]; });
        const Verdict v = ctx2.consistency_test(fx.oracle->to_label(interior));
        CHECK_FALSE(v.accept);
        CHECK(v.reason == RejectReason::MarkedNonLeaf);
    }
}

TEST_CASE("degree-2 vertices trip the banned-degree check") {
    // a path of 5 vertices: every interior vertex has filtered degree 2
    auto graph = std::make_shared<MultiGraph>(5);
    for (VertexId v = 0; v + 1 < 5; ++v) graph->add_edge(v, v + 1, EdgeKind::Single);
    OracleHandle oracle(graph, 3);
    TesterParams params;
    params.k = 2;
    params.seed = 9;
    TestContext ctx(oracle, [](Label) { return 0; }, params);
    const Verdict v = ctx.consistency_test(oracle.to_label(2));
    CHECK_FALSE(v.accept);
    CHECK(v.reason == RejectReason::BannedDegree);
}

TEST_CASE("weld-consistency accepts clean candies and catches fake welds") {
    Fixture fx(3, Variant::G1, 5);

    SUBCASE("weld vertex with correct advice accepts deterministically") {
        auto ctx = fx.context();
        const Label weld = fx.label_of_first([&](VertexId v) { return fx.inst.truth.weld_bit[v]; });
        CHECK(ctx.weld_consistency_test(weld).accept);
    }

    SUBCASE("interior vertex at depth < k accepts immediately") {
        auto ctx = fx.context();
        const Label interior = fx.label_of_first([&](VertexId v) {
            return fx.inst.graph->role(v) == VertexRole::Body && !fx.inst.truth.weld_bit[v];
        });
        const Verdict v = ctx.weld_consistency_test(interior);
        CHECK(v.accept);
    }

    SUBCASE("marked antenna leaf has no marked neighbors") {
        // corrupt the advice of an antenna leaf: consistency passes (degree 1,
        // root-path of length k) but the weld branch finds 0 marked neighbors
        const VertexId leaf = [&] {
            for (VertexId v = 0; v < fx.inst.graph->vertex_count(); ++v)
                if (fx.inst.graph->role(v) == VertexRole::Antenna &&
                    fx.inst.graph->degree(v, EdgeFilter::doubles_and_loops()) == 1)
                    return v;
            return VertexId{0};
        }();
        auto corrupted = fx.advice_bits;
        corrupted[leaf] = 1;
        auto o = fx.oracle;
        auto ctx = fx.context(4, [corrupted, o](Label l) { return (int)corrupted[o->to_internal(l)]; });
        const Verdict v = ctx.weld_consistency_test(fx.oracle->to_label(leaf));
        CHECK_FALSE(v.accept);
        CHECK(v.reason == RejectReason::WeldNeighborCount);
    }
}

TEST_CASE("marked vertex with three marked neighbors is rejected") {
    // custom graph: root r with children {u, x, y}; chain u - v; v carries
    // three marked pendant leaves, so the weld check sees 3 marked neighbors
    auto graph = std::make_shared<MultiGraph>(10);
    const VertexId r = 0, u = 1, v = 2, w = 3, x = 4, y = 5, z = 6;
    const VertexId m1 = 7, m2 = 8, m3 = 9;
    graph->add_edge(r, u, EdgeKind::Single);
    graph->add_edge(r, x, EdgeKind::Single);
    graph->add_edge(r, y, EdgeKind::Single);
    graph->add_edge(r, z, EdgeKind::Single);
    graph->add_edge(u, v, EdgeKind::Single);
    graph->add_edge(u, w, EdgeKind::Single);
    graph->add_edge(v, m1, EdgeKind::Single);
    graph->add_edge(v, m2, EdgeKind::Single);
    graph->add_edge(v, m3, EdgeKind::Single);
    OracleHandle oracle(graph, 17);
    std::vector<std::uint8_t> marks(10, 0);
    marks[v] = marks[m1] = marks[m2] = marks[m3] = 1;
    TesterParams params;
    params.k = 2;
    params.seed = 11;
    TestContext ctx(oracle, [&](Label l) { return (int)marks[oracle.to_internal(l)]; }, params);
    const Verdict verdict = ctx.weld_consistency_test(oracle.to_label(v));
    CHECK_FALSE(verdict.accept);
    CHECK(verdict.reason == RejectReason::WeldNeighborCount);
}

TEST_CASE("completeness holds on intact candies and flags flipped advice") {
    Fixture fx(3, Variant::G1, 13);

    SUBCASE("intact candy accepts with probability 1") {
        auto ctx = fx.context();
        const Label weld = fx.label_of_first([&](VertexId v) { return fx.inst.truth.weld_bit[v]; });
        CHECK(ctx.completeness_test(weld).accept);
        const Label antenna = fx.label_of_first(
            [&](VertexId v) { return fx.inst.graph->role(v) == VertexRole::Antenna; });
        CHECK(ctx.completeness_test(antenna).accept);
    }

    SUBCASE("flipping one weld bit is caught at least half the time") {
        const VertexId flipped = [&] {
            for (VertexId v = 0; v < fx.inst.graph->vertex_count(); ++v)
                if (fx.inst.truth.weld_bit[v]) return v;
            return VertexId{0};
        }();
        auto corrupted = fx.advice_bits;
        corrupted[flipped] = 0;
        auto o = fx.oracle;
        // test a surviving marked weld in the same candy
        const VertexId probe = [&] {
            for (VertexId v = 0; v < fx.inst.graph->vertex_count(); ++v)
                if (corrupted[v] && fx.inst.truth.pair_id[v] == fx.inst.truth.pair_id[flipped])
                    return v;
            return VertexId{0};
        }();
        int rejects = 0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            TesterParams params;
            params.k = 3;
            params.eps = 0.1;
            params.seed = derive_seed(99, "flip", trial);
            TestContext ctx(*fx.oracle, [corrupted, o](Label l) {
                return (int)corrupted[o->to_internal(l)];
            }, params);
            if (!ctx.completeness_test(fx.oracle->to_label(probe)).accept) ++rejects;
        }
        CHECK(rejects >= trials / 2);
    }

    SUBCASE("double-bow-tie with all-zero advice rejects") {
        Fixture g2(3, Variant::G2, 13);
        TesterParams params;
        params.k = 3;
        params.seed = 3;
        TestContext ctx(*g2.oracle, [](Label) { return 0; }, params);
        const Label body = g2.label_of_first(
            [&](VertexId v) { return g2.inst.graph->role(v) == VertexRole::Body; });
        CHECK_FALSE(ctx.completeness_test(body).accept);
    }
}

TEST_CASE("advice test checks structure and loop parity") {
    Fixture fx(3, Variant::G1, 17);

    SUBCASE("weld and interior vertices accept under correct advice") {
        auto ctx = fx.context();
        const Label weld = fx.label_of_first([&](VertexId v) { return fx.inst.truth.weld_bit[v]; });
        CHECK(ctx.advice_test(weld).accept);
        const Label interior = fx.label_of_first([&](VertexId v) {
            return fx.inst.graph->role(v) == VertexRole::Body && !fx.inst.truth.weld_bit[v];
        });
        CHECK(ctx.advice_test(interior).accept);
        const Label root = fx.label_of_first(
            [&](VertexId v) { return fx.inst.graph->role(v) == VertexRole::Root; });
        CHECK(ctx.advice_test(root).accept);
    }

    SUBCASE("globally inverted convention rejects on parity") {
        TesterParams params;
        params.k = 3;
        params.eps = 0.1;
        params.seed = 23;
        params.advice = AdviceConvention::Sec63; // instance was built under Sec6
        TestContext ctx(*fx.oracle, fx.advice(), params);
        const Label weld = fx.label_of_first([&](VertexId v) { return fx.inst.truth.weld_bit[v]; });
        const Verdict v = ctx.advice_test(weld);
        CHECK_FALSE(v.accept);
        CHECK(v.reason == RejectReason::AdviceParityMismatch);
    }

    SUBCASE("a vertex with two double edges is structurally rejected") {
        // corrupt a copy of the instance: tie two antenna leaves together
        auto corrupted = std::make_shared<MultiGraph>(*fx.inst.graph);
        std::vector<VertexId> leaves;
        for (VertexId v = 0; v < corrupted->vertex_count() && leaves.size() < 2; ++v)
            if (corrupted->role(v) == VertexRole::Antenna &&
                corrupted->degree(v, EdgeFilter::doubles_and_loops()) == 1)
                leaves.push_back(v);
        corrupted->add_edge(leaves[0], leaves[1], EdgeKind::Double);
        auto oracle = std::make_shared<OracleHandle>(corrupted, 7);
        auto bits = fx.advice_bits;
        TesterParams params;
        params.k = 3;
        params.seed = 29;
        TestContext ctx(*oracle, [bits, oracle](Label l) { return (int)bits[oracle->to_internal(l)]; },
                        params);
        const Verdict v = ctx.advice_test(oracle->to_label(leaves[0]));
        CHECK_FALSE(v.accept);
        CHECK(v.reason == RejectReason::AdviceStructure);
    }
}

TEST_CASE("final test: completeness, soundness and the vertex-count gate") {
    SUBCASE("accepts G1 with ground-truth advice") {
        Fixture fx(2, Variant::G1, 41);
        auto ctx = fx.context();
        const Verdict v = ctx.final_test();
        CHECK(v.accept);
        CHECK(v.advice_queries > 0); // advice reads are billed separately
    }

    SUBCASE("rejects G2 under every reference advice family") {
        Fixture fx(3, Variant::G2, 43);
        auto o = fx.oracle;
        const std::vector<AdviceSource> families = {
            [](Label) { return 0; },
            [](Label) { return 1; },
            [o, &fx](Label l) { return (int)fx.inst.truth.weld_bit[o->to_internal(l)]; },
        };
        for (const auto& family : families) {
            TesterParams params;
            params.k = 3;
            params.seed = 47;
            TestContext ctx(*fx.oracle, family, params);
            CHECK_FALSE(ctx.final_test().accept);
        }
    }

    SUBCASE("wrong vertex count is rejected before any advice query") {
        auto graph = std::make_shared<MultiGraph>(5);
        OracleHandle oracle(graph, 1);
        TesterParams params;
        params.k = 3;
        params.seed = 53;
        TestContext ctx(oracle, [](Label) { return 0; }, params);
        const Verdict v = ctx.final_test();
        CHECK_FALSE(v.accept);
        CHECK(v.reason == RejectReason::VertexCountNotMultiple);
        CHECK(v.oracle_queries == 0);
    }

    SUBCASE("query budget stays under the frozen regression bound") {
        // C3 = 8, measured once across the grid and frozen
        const double c3 = 8.0;
        for (int k = 2; k <= 4; ++k) {
            Fixture fx(k, Variant::G1, 59);
            auto ctx = fx.context();
            const Verdict v = ctx.final_test();
            CHECK(v.accept);
            CHECK(static_cast<double>(v.oracle_queries) <= c3 * k * k / (0.1 * 0.1));
        }
    }
}
