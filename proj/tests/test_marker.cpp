#include "doctest.h"

#include "weldlab/generator.hpp"
#include "weldlab/lazy_instance.hpp"
#include "weldlab/marker.hpp"
#include "weldlab/oracle.hpp"

#include <memory>

using namespace weldlab;

namespace {

struct Fixture {
    Instance inst;
    std::shared_ptr<OracleHandle> oracle;

    Fixture(int k, Variant variant, std::uint64_t seed) {
        InstanceSpec spec;
        spec.k = k;
        spec.variant = variant;
        spec.seed = seed;
        inst = sample_instance(spec);
        oracle = std::make_shared<OracleHandle>(inst.graph, derive_seed(seed, "oracle"));
    }

    VertexId first(auto&& pred) const {
        for (VertexId v = 0; v < inst.graph->vertex_count(); ++v)
            if (pred(v)) return v;
        REQUIRE(false);
        return 0;
    }
};

} // namespace

TEST_CASE("leaf scan separates antenna side from body side") {
    Fixture fx(3, Variant::G1, 3);
    QuantumMarker marker(*fx.oracle, 3, 99);

    const VertexId leaf = fx.first([&](VertexId v) {
        return fx.inst.graph->role(v) == VertexRole::Antenna &&
               fx.inst.graph->degree(v, EdgeFilter::doubles_and_loops()) == 1;
    });
    CHECK(marker.leaf_scan(fx.oracle->to_label(leaf)) == LeafScanResult::NotInW);

    const VertexId antenna_interior = fx.first([&](VertexId v) {
        return fx.inst.graph->role(v) == VertexRole::Antenna &&
               fx.inst.graph->degree(v, EdgeFilter::doubles_and_loops()) == 3;
    });
    CHECK(marker.leaf_scan(fx.oracle->to_label(antenna_interior)) == LeafScanResult::NotInW);

    const VertexId root = fx.first([&](VertexId v) { return fx.inst.graph->role(v) == VertexRole::Root; });
    CHECK(marker.leaf_scan(fx.oracle->to_label(root)) == LeafScanResult::NotInW);

    const VertexId weld = fx.first([&](VertexId v) { return fx.inst.truth.weld_bit[v] == 1; });
    CHECK(marker.leaf_scan(fx.oracle->to_label(weld)) == LeafScanResult::BodyNonRoot);

    const VertexId interior = fx.first([&](VertexId v) {
        return fx.inst.graph->role(v) == VertexRole::Body && !fx.inst.truth.weld_bit[v];
    });
    CHECK(marker.leaf_scan(fx.oracle->to_label(interior)) == LeafScanResult::BodyNonRoot);
}

TEST_CASE("the reduced body component has two roots and 2(2^{k+1}-1) vertices") {
    Fixture fx(3, Variant::G1, 5);
    const VertexId root = fx.first([&](VertexId v) { return fx.inst.graph->role(v) == VertexRole::Root; });
    BodyComponent comp = fx.oracle->peek_body_component(fx.oracle->to_label(root));
    CHECK(comp.labels.size() == 30);
    CHECK(comp.roots.size() == 2);
    // no vertex keeps an antenna edge and degrees stay <= 3
    for (const auto& row : comp.adj) CHECK(row.size() <= 3);
}

TEST_CASE("find_exit lands on the paired root of the same candy") {
    Fixture fx(3, Variant::G1, 7);
    QuantumMarker marker(*fx.oracle, 3, 11);
    for (VertexId v = 0; v < fx.inst.graph->vertex_count(); ++v) {
        if (fx.inst.graph->role(v) != VertexRole::Root) continue;
        const Label partner = marker.find_exit(fx.oracle->to_label(v));
        const VertexId p = fx.oracle->to_internal(partner);
        CHECK(fx.inst.graph->role(p) == VertexRole::Root);
        CHECK(p != v);
        CHECK(fx.inst.truth.pair_id[p] == fx.inst.truth.pair_id[v]);
    }
}

TEST_CASE("find_exit on a double-bow-tie surfaces the malformed structure") {
    Fixture fx(3, Variant::G2, 7);
    QuantumMarker marker(*fx.oracle, 3, 11);
    const VertexId root = fx.first([&](VertexId v) { return fx.inst.graph->role(v) == VertexRole::Root; });
    CHECK_THROWS_AS(marker.find_exit(fx.oracle->to_label(root)),
                    QuantumMarker::MalformedInstance);

    // classify maps the failure to bit 0 plus the diagnostic flag
    const VertexId weld = fx.first([&](VertexId v) { return fx.inst.truth.weld_bit[v] == 1; });
    CHECK(marker.classify(fx.oracle->to_label(weld)) == 0);
    CHECK(marker.advice().malformed_seen);
}

TEST_CASE("classify matches ground truth on whole instances") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        Fixture fx(2, Variant::G1, seed);
        QuantumMarker marker(*fx.oracle, 2, derive_seed(seed, "m"));
        for (Label l = 0; l < fx.oracle->vertex_count(); ++l)
            CHECK(marker.classify(l) == fx.inst.truth.weld_bit[fx.oracle->to_internal(l)]);
        CHECK_FALSE(marker.advice().malformed_seen);
        CHECK(marker.advice().modeled_quantum_queries > 0);
    }
}

TEST_CASE("classify agrees with the lazy ensemble's ground truth") {
    const int k = 4;
    LazyEnsembleOracle oracle(k, Variant::G1, 31);
    QuantumMarker marker(oracle, k, 17);
    Rng rng = make_rng(3, "spot");
    for (int i = 0; i < 50; ++i) {
        const Label l = oracle.random_vertex(rng);
        const Coord& c = oracle.coord_of(l);
        CHECK(marker.classify(l) == (oracle.weld_bit(c) ? 1 : 0));
    }
}

TEST_CASE("per-classify cost is charged once and only for fresh vertices") {
    Fixture fx(2, Variant::G1, 9);
    QuantumMarker marker(*fx.oracle, 2, 5);
    const VertexId weld = fx.first([&](VertexId v) { return fx.inst.truth.weld_bit[v] == 1; });
    const Label l = fx.oracle->to_label(weld);
    marker.classify(l);
    const std::uint64_t first_cost = marker.last_classify_cost();
    CHECK(first_cost > 0);
    marker.classify(l);
    CHECK(marker.last_classify_cost() == 0); // memoized
}

TEST_CASE("sec63 instances classify correctly under the matching convention") {
    InstanceSpec spec;
    spec.k = 2;
    spec.variant = Variant::G1;
    spec.seed = 13;
    spec.advice = AdviceConvention::Sec63;
    Instance inst = sample_instance(spec);
    auto oracle = std::make_shared<OracleHandle>(inst.graph, 3);
    QuantumMarker marker(*oracle, 2, 7, AdviceConvention::Sec63);
    for (Label l = 0; l < oracle->vertex_count(); ++l)
        CHECK(marker.classify(l) == inst.truth.weld_bit[oracle->to_internal(l)]);
}
