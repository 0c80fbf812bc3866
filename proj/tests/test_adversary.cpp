#include "doctest.h"

#include "weldlab/adversary.hpp"
#include "weldlab/knowledge.hpp"
#include "weldlab/lazy_instance.hpp"

#include <map>
#include <set>

using namespace weldlab;

TEST_CASE("knowledge graph detects cycles with parity") {
    KnowledgeGraph kg;
    for (Label l = 0; l < 5; ++l) kg.add_vertex(l, VertexRole::Body, KnownVia::SingleEdge);
    kg.add_edge(0, 1, EdgeKind::Single);
    kg.add_edge(1, 2, EdgeKind::Single);
    kg.add_edge(2, 3, EdgeKind::Single);
    CHECK_FALSE(kg.cycle_seen());

    SUBCASE("even cycle is a cycle but not odd") {
        kg.add_edge(3, 0, EdgeKind::Single);
        CHECK(kg.cycle_seen());
        CHECK_FALSE(kg.odd_cycle_seen());
    }
    SUBCASE("triangle closes an odd cycle") {
        kg.add_edge(2, 0, EdgeKind::Single);
        CHECK(kg.cycle_seen());
        CHECK(kg.odd_cycle_seen());
    }
    SUBCASE("double edges do not feed traversal cycles") {
        kg.add_edge(3, 0, EdgeKind::Double);
        CHECK_FALSE(kg.cycle_seen());
    }
    SUBCASE("duplicate edge reports are ignored") {
        auto out = kg.add_edge(0, 1, EdgeKind::Single);
        CHECK_FALSE(out.is_new);
        CHECK_FALSE(kg.cycle_seen());
    }
    SUBCASE("edges need known endpoints") {
        CHECK_THROWS_AS(kg.add_edge(0, 99, EdgeKind::Single), std::logic_error);
    }
}

TEST_CASE("lazy game trees expose the welded structure") {
    LazyGameTree tree(LazyGameTree::Kind::Welded, 4, 7);
    const Label r0 = tree.root_label(0);
    OracleAnswer root_ans = tree.query(r0);
    CHECK(root_ans.neighbors.size() == 2);

    // descend to a leaf: k steps
    Label cur = root_ans.neighbors[0].first;
    for (int d = 1; d < 4; ++d) {
        OracleAnswer a = tree.query(cur);
        CHECK(a.neighbors.size() == 3);
        // pick a child (deeper coordinate)
        for (const auto& [nbr, kind] : a.neighbors) {
            if (!tree.known_label(nbr)) continue;
            if (tree.coord_of(nbr).depth == d + 1) {
                cur = nbr;
                break;
            }
        }
    }
    OracleAnswer leaf_ans = tree.query(cur);
    CHECK(leaf_ans.neighbors.size() == 3); // parent + 2 cycle edges
    int cross = 0;
    for (const auto& [nbr, kind] : leaf_ans.neighbors)
        if (tree.coord_of(nbr).depth == 4 && tree.coord_of(nbr).tree != tree.coord_of(cur).tree)
            ++cross;
    CHECK(cross == 2); // welded mode alternates trees
}

TEST_CASE("self-welded game trees cycle within one tree") {
    LazyGameTree tree(LazyGameTree::Kind::SelfWelded, 3, 9);
    const Label r = tree.root_label(0);
    OracleAnswer ans = tree.query(r);
    Label cur = ans.neighbors[0].first;
    for (int d = 1; d < 3; ++d) {
        OracleAnswer a = tree.query(cur);
        for (const auto& [nbr, kind] : a.neighbors)
            if (tree.coord_of(nbr).depth == d + 1) {
                cur = nbr;
                break;
            }
    }
    OracleAnswer leaf = tree.query(cur);
    int same_depth = 0;
    for (const auto& [nbr, kind] : leaf.neighbors)
        if (tree.coord_of(nbr).depth == 3) {
            ++same_depth;
            CHECK(tree.coord_of(nbr).tree == 0);
        }
    CHECK(same_depth == 2);
}

TEST_CASE("games: degenerate cases behave as predicted") {
    SUBCASE("game C with a single query cannot win") {
        GameSpec spec;
        spec.game = GameId::C;
        spec.k = 4;
        spec.t = 1;
        spec.trials = 300;
        GameResult r = run_game(spec, GameStrategyKind::Bfs, 5);
        CHECK(r.wins == 0);
    }
    SUBCASE("game B with no queries wins exactly when the start is the root") {
        GameSpec spec;
        spec.game = GameId::B;
        spec.k = 2;
        spec.t = 0;
        spec.trials = 4000;
        GameResult r = run_game(spec, GameStrategyKind::RandomWalk, 11);
        // start is uniform over 2^{k+1}-1 = 7 vertices
        const double expect = 1.0 / 7.0;
        CHECK(r.wilson.low < expect);
        CHECK(r.wilson.high > expect);
    }
    SUBCASE("query budget hypothesis is enforced") {
        GameSpec spec;
        spec.game = GameId::A;
        spec.k = 3;
        spec.t = 5; // > 2^{k-1} = 4
        CHECK_THROWS_AS(run_game(spec, GameStrategyKind::Bfs, 1), std::invalid_argument);
    }
    SUBCASE("random starts occasionally expose a root") {
        GameSpec spec;
        spec.game = GameId::D;
        spec.k = 2;
        spec.t = 2; // 2^{k-1}
        spec.trials = 2000;
        GameResult r = run_game(spec, GameStrategyKind::RandomWalk, 21);
        CHECK(r.wins > 0); // depth-1 starts reveal the root on the first query
        CHECK(r.win_probability < 0.9);
    }
}

TEST_CASE("run_against drives strategies legally on both worlds") {
    for (const std::string& name : reference_strategy_names()) {
        for (int world = 0; world < 3; ++world) {
            std::unique_ptr<ActionBackend> backend;
            if (world == 0) backend = make_real_backend(5, Variant::G1, 100 + world);
            else if (world == 1) backend = make_real_backend(5, Variant::G2, 100 + world);
            else backend = make_simulator_backend(5, 100 + world);
            auto strat = make_strategy(name);
            Transcript tr = run_against(*backend, *strat, 12, 777);
            CHECK(tr.queries_used <= 12);
            std::uint64_t hist_total = 0;
            for (const auto& [key, count] : tr.histogram) hist_total += count;
            CHECK(hist_total >= tr.queries_used);
        }
    }
}

TEST_CASE("simulator and real ensembles at tiny budgets agree on reveal types") {
    // small-scale version of the fidelity criterion
    FidelityResult f = simulator_fidelity(6, Variant::G1, 3, "random-walk", 1500, 4242);
    CHECK(f.kept_real > 1000);
    CHECK(f.kept_sim > 1000);
    CHECK(f.chi2.p_value > 0.001);
}

TEST_CASE("exhaustive budgets distinguish the ensembles at k=3") {
    // with the budget covering the whole instance, BFS finds odd cycles in
    // G2 and never in G1
    DistinguishResult r = distinguishing_experiment(3, 900, "bfs", 30, 31);
    CHECK(r.advantage >= 0.9);
}

TEST_CASE("tiny budgets yield no measurable advantage") {
    DistinguishResult r = distinguishing_experiment(8, 2, "random-walk", 400, 12345);
    CHECK(r.advantage <= 0.1);
}

TEST_CASE("lazy ensemble structure matches the materialized conventions") {
    LazyEnsembleOracle oracle(3, Variant::G1, 17);
    CHECK(oracle.vertex_count() == 812);
    // a weld vertex answers with 3 singles + 1 double
    const Label weld = oracle.label_of(Coord{0, 0, 2, 3, 1});
    OracleAnswer ans = oracle.query(weld);
    int singles = 0, doubles = 0;
    for (const auto& [nbr, kind] : ans.neighbors)
        (kind == EdgeKind::Double ? doubles : singles) += 1;
    CHECK(singles == 3);
    CHECK(doubles == 1);

    // the advice partner of a weld vertex lives in a one-loop pair
    const Coord partner = oracle.advice_partner(Coord{0, 0, 2, 3, 1});
    CHECK(partner.side == 1);
    CHECK(oracle.pair_loops()[partner.pair] == 1);

    // roots report 4 singles plus the loop flag
    const Label root = oracle.label_of(Coord{1, 0, 0, 0, 0});
    OracleAnswer root_ans = oracle.query(root);
    std::size_t expected = root_ans.loop ? 5 : 4;
    CHECK(root_ans.neighbors.size() == expected);
}

TEST_CASE("lazy ensemble pair loop classes have the pinned sizes") {
    LazyEnsembleOracle oracle(4, Variant::G2, 23);
    std::map<int, int> hist;
    for (std::uint8_t c : oracle.pair_loops()) ++hist[c];
    CHECK(hist[1] == 16);
    CHECK(hist[2] == 7);
    CHECK(hist[0] == 7);
}
