#include "weldlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace weldlab {

ReducedGraph ReducedGraph::from(const MultiGraph& g) {
    ReducedGraph r;
    r.adj.resize(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (int i = 0; i < g.slot_count(v); ++i) {
            const NeighborEntry e = g.slot(v, i);
            if (e.kind == EdgeKind::Double || e.neighbor == v) continue;
            r.adj[v].push_back(e.neighbor);
        }
    }
    return r;
}

std::uint64_t ReducedGraph::edge_count() const {
    std::uint64_t twice = 0;
    for (const auto& row : adj) twice += row.size();
    return twice / 2;
}

TwoColorResult two_color(const ReducedGraph& g) {
    const std::size_t n = g.vertex_count();
    TwoColorResult res;
    res.color.assign(n, 2); // 2 = uncolored
    std::vector<VertexId> parent(n, 0);
    std::deque<VertexId> queue;

    for (VertexId start = 0; start < n; ++start) {
        if (res.color[start] != 2) continue;
        res.color[start] = 0;
        parent[start] = start;
        queue.push_back(start);
        while (!queue.empty()) {
            const VertexId u = queue.front();
            queue.pop_front();
            for (VertexId w : g.adj[u]) {
                if (res.color[w] == 2) {
                    res.color[w] = res.color[u] ^ 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if (res.color[w] == res.color[u]) {
                    // Odd cycle: climb both BFS paths to the meeting point.
                    std::vector<VertexId> pu{u}, pw{w};
                    while (pu.back() != parent[pu.back()]) pu.push_back(parent[pu.back()]);
                    while (pw.back() != parent[pw.back()]) pw.push_back(parent[pw.back()]);
                    // trim to lowest common ancestor
                    while (pu.size() >= 2 && pw.size() >= 2 &&
                           pu[pu.size() - 1] == pw[pw.size() - 1] &&
                           pu[pu.size() - 2] == pw[pw.size() - 2]) {
                        pu.pop_back();
                        pw.pop_back();
                    }
                    // cycle: u..lca then back down lca..w (closing edge w-u implied)
                    res.bipartite = false;
                    std::vector<VertexId> cycle = pu;
                    for (std::size_t i = pw.size() - 1; i-- > 0;) cycle.push_back(pw[i]);
                    res.odd_cycle = std::move(cycle);
                    return res;
                }
            }
        }
    }
    res.bipartite = true;
    return res;
}

std::vector<std::vector<VertexId>> reduced_components(const ReducedGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::vector<VertexId>> comps;
    std::vector<VertexId> stack;
    for (VertexId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        comps.emplace_back();
        stack.push_back(s);
        seen[s] = 1;
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            comps.back().push_back(u);
            for (VertexId w : g.adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return comps;
}

ReducedGraph induced_subgraph(const ReducedGraph& g, const std::vector<VertexId>& keep) {
    std::map<VertexId, VertexId> index;
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<VertexId>(i);
    ReducedGraph sub;
    sub.adj.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (VertexId w : g.adj[keep[i]]) {
            auto it = index.find(w);
            if (it != index.end()) sub.adj[i].push_back(it->second);
        }
    }
    return sub;
}

namespace {

// Greedy edge-disjoint odd-cycle packing: find an odd cycle, remove its
// edges, repeat. Each packed cycle forces at least one deletion.
std::uint64_t packing_lower_bound(ReducedGraph g) {
    std::uint64_t packed = 0;
    for (;;) {
        TwoColorResult tc = two_color(g);
        if (tc.bipartite) return packed;
        ++packed;
        const auto& cyc = tc.odd_cycle;
        auto drop_edge = [&](VertexId a, VertexId b) {
            auto& ra = g.adj[a];
            auto ita = std::find(ra.begin(), ra.end(), b);
            if (ita != ra.end()) ra.erase(ita);
            auto& rb = g.adj[b];
            auto itb = std::find(rb.begin(), rb.end(), a);
            if (itb != rb.end()) rb.erase(itb);
        };
        for (std::size_t i = 0; i < cyc.size(); ++i)
            drop_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
    }
}

std::uint64_t cut_size(const ReducedGraph& g, const std::vector<std::uint8_t>& side) {
    std::uint64_t cut2 = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        for (VertexId w : g.adj[v])
            if (side[v] != side[w]) ++cut2;
    return cut2 / 2;
}

// Simulated-annealing max-cut; returns |E| - best cut.
std::uint64_t local_search_upper_bound(const ReducedGraph& g, std::uint64_t seed) {
    const std::size_t n = g.vertex_count();
    const std::uint64_t edges = g.edge_count();
    if (n == 0 || edges == 0) return 0;
    Rng rng = make_rng(seed, "maxcut-anneal");
    std::uint64_t best_cut = 0;
    const int restarts = 4;
    for (int rs = 0; rs < restarts; ++rs) {
        std::vector<std::uint8_t> side(n);
        for (auto& s : side) s = static_cast<std::uint8_t>(uniform_below(rng, 2));
        // gain[v] = cut change when flipping v
        std::vector<long long> gain(n, 0);
        auto recompute_gain = [&](VertexId v) {
            long long same = 0, cross = 0;
            for (VertexId w : g.adj[v]) (side[v] == side[w] ? same : cross) += 1;
            gain[v] = same - cross;
        };
        for (VertexId v = 0; v < n; ++v) recompute_gain(v);
        double temp = 2.0;
        const std::size_t iters = 400 * n;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t it = 0; it < iters; ++it) {
            const VertexId v = static_cast<VertexId>(uniform_below(rng, n));
            const long long delta = gain[v];
            if (delta >= 0 || unit(rng) < std::exp(static_cast<double>(delta) / temp)) {
                side[v] ^= 1;
                gain[v] = -gain[v];
                for (VertexId w : g.adj[v]) {
                    // edge v-w switched sides status
                    if (side[v] == side[w]) gain[w] += 2;
                    else gain[w] -= 2;
                }
            }
            temp = std::max(0.05, temp * 0.99995);
        }
        // final greedy sweep to a local optimum
        bool improved = true;
        while (improved) {
            improved = false;
            for (VertexId v = 0; v < n; ++v) {
                if (gain[v] > 0) {
                    side[v] ^= 1;
                    gain[v] = -gain[v];
                    for (VertexId w : g.adj[v]) {
                        if (side[v] == side[w]) gain[w] += 2;
                        else gain[w] -= 2;
                    }
                    improved = true;
                }
            }
        }
        best_cut = std::max(best_cut, cut_size(g, side));
    }
    return edges - best_cut;
}

// Exact min deletions via branch and bound over 2-colorings, components up
// to kExactDistanceCap vertices.
struct ExactSolver {
    const ReducedGraph& g;
    std::vector<std::uint8_t> color;
    std::vector<VertexId> order;
    std::uint64_t best;

    explicit ExactSolver(const ReducedGraph& graph) : g(graph) {
        color.assign(g.vertex_count(), 2);
        order.resize(g.vertex_count());
        std::iota(order.begin(), order.end(), VertexId{0});
        // BFS-ish order improves pruning
        best = g.edge_count();
    }

    void run(std::size_t at, std::uint64_t violated) {
        if (violated >= best) return;
        if (at == order.size()) {
            best = violated;
            return;
        }
        const VertexId v = order[at];
        for (std::uint8_t c = 0; c < 2; ++c) {
            if (at == 0 && c == 1) break; // fix first vertex color by symmetry
            std::uint64_t add = 0;
            for (VertexId w : g.adj[v])
                if (color[w] == c) ++add; // edges counted from the later endpoint
            color[v] = c;
            run(at + 1, violated + add);
            color[v] = 2;
        }
    }
};

std::uint64_t exact_distance(const ReducedGraph& g) {
    if (g.vertex_count() > kExactDistanceCap)
        throw std::invalid_argument("exact bipartite distance capped at " +
                                    std::to_string(kExactDistanceCap) + " vertices");
    ExactSolver solver(g);
    solver.run(0, 0);
    return solver.best;
}

} // namespace

DistanceReport bipartite_distance(const ReducedGraph& g, DistanceMode mode, std::uint64_t seed) {
    DistanceReport rep;
    TwoColorResult tc = two_color(g);
    rep.is_bipartite = tc.bipartite;
    if (!tc.bipartite) rep.odd_cycle_witness = tc.odd_cycle;
    if (tc.bipartite) {
        rep.lower_bound = 0;
        rep.upper_bound = 0;
        if (mode == DistanceMode::ExactSmall) rep.exact = 0;
        return rep;
    }
    switch (mode) {
        case DistanceMode::PackingLB:
            rep.lower_bound = packing_lower_bound(g);
            rep.upper_bound = local_search_upper_bound(g, seed);
            break;
        case DistanceMode::LocalSearchUB:
            rep.lower_bound = packing_lower_bound(g);
            rep.upper_bound = local_search_upper_bound(g, seed);
            break;
        case DistanceMode::ExactSmall: {
            rep.lower_bound = packing_lower_bound(g);
            rep.upper_bound = local_search_upper_bound(g, seed);
            rep.exact = exact_distance(g);
            break;
        }
    }
    return rep;
}

CensusReport structural_census(const Instance& inst) {
    const MultiGraph& g = *inst.graph;
    const int k = inst.spec.k;
    const int j = inst.spec.variant == Variant::YesGeneral ? inst.spec.j : 1;
    CensusReport rep;
    rep.expected = RoleCensus::closed_form(k, j);

    auto fail = [&](const std::string& what) {
        rep.pass = false;
        rep.failed_identity = what;
        return rep;
    };

    // Multi-source BFS from roots over single non-loop edges gives tree
    // depths; weld vertices are the Body vertices at depth k.
    const VertexId n = g.vertex_count();
    std::vector<std::uint32_t> depth(n, UINT32_MAX);
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < n; ++v) {
        if (g.role(v) == VertexRole::Root) {
            depth[v] = 0;
            queue.push_back(v);
            ++rep.counted.roots;
        }
        if (g.has_loop(v)) ++rep.loops_total;
    }
    while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        for (const NeighborEntry& e : g.neighbors(u)) {
            if (e.kind == EdgeKind::Double || e.neighbor == u) continue;
            if (depth[e.neighbor] == UINT32_MAX) {
                depth[e.neighbor] = depth[u] + 1;
                queue.push_back(e.neighbor);
            }
        }
    }

    std::uint64_t doubles_on_nonroot = 0;
    for (VertexId v = 0; v < n; ++v) {
        int dbl = 0;
        for (const NeighborEntry& e : g.neighbors(v))
            if (e.kind == EdgeKind::Double) ++dbl;
        switch (g.role(v)) {
            case VertexRole::Root:
                if (dbl != 0) return fail("root with a double edge");
                break;
            case VertexRole::Antenna:
                ++rep.counted.antenna;
                if (dbl != 1) return fail("antenna vertex without exactly one double edge");
                ++doubles_on_nonroot;
                break;
            case VertexRole::Body: {
                if (dbl != 1) return fail("body vertex without exactly one double edge");
                ++doubles_on_nonroot;
                if (depth[v] == static_cast<std::uint32_t>(k)) ++rep.counted.weld;
                else if (depth[v] >= 1 && depth[v] < static_cast<std::uint32_t>(k)) ++rep.counted.interior;
                else return fail("body vertex at impossible tree depth");
                break;
            }
        }
    }

    if (rep.counted.roots != rep.expected.roots) return fail("root count");
    if (rep.counted.weld != rep.expected.weld) return fail("weld count");
    if (rep.counted.interior != rep.expected.interior) return fail("interior count");
    if (rep.counted.antenna != rep.expected.antenna) return fail("antenna count");
    if (rep.counted.total_vertices() != instance_vertex_count(k, j)) return fail("total vertex count");

    const std::uint64_t pairs = inst.spec.pair_count();
    const bool have_truth =
        inst.truth.pair_loops.size() == pairs && inst.truth.pair_id.size() == n;

    // Pair-level loop classes. With generator ground truth the pairing is
    // exact; without it (loading from a file), G1/yes components *are* the
    // pairs, while G2's pairing is classically unrecoverable and the class
    // split is skipped.
    ReducedGraph red = ReducedGraph::from(g);
    const auto comps = reduced_components(red);
    rep.reduced_components = comps.size();

    std::vector<std::uint32_t> pair_of(n, 0);
    std::uint64_t class_groups = 0;
    bool check_classes = true;
    if (have_truth) {
        for (VertexId v = 0; v < n; ++v) pair_of[v] = inst.truth.pair_id[v];
        class_groups = pairs;
    } else if (inst.spec.variant != Variant::G2) {
        for (std::size_t c = 0; c < comps.size(); ++c)
            for (VertexId v : comps[c]) pair_of[v] = static_cast<std::uint32_t>(c);
        class_groups = comps.size();
    } else {
        check_classes = false;
    }

    if (check_classes) {
        std::vector<std::uint32_t> loops_per_pair(class_groups, 0);
        for (VertexId v = 0; v < n; ++v)
            if (g.has_loop(v)) ++loops_per_pair[pair_of[v]];
        for (std::size_t p = 0; p < loops_per_pair.size(); ++p) {
            if (have_truth && loops_per_pair[p] != inst.truth.pair_loops[p])
                return fail("pair loop count vs ground truth");
            switch (loops_per_pair[p]) {
                case 0: ++rep.counted.candies_zero_loops; break;
                case 1: ++rep.counted.candies_one_loop; break;
                case 2: ++rep.counted.candies_two_loops; break;
                default: return fail("pair with more than two loops");
            }
        }
        if (inst.spec.advice == AdviceConvention::Sec6) {
            if (rep.counted.candies_one_loop != rep.expected.candies_one_loop)
                return fail("one-loop class size");
            if (rep.counted.candies_two_loops != rep.expected.candies_two_loops)
                return fail("two-loop class size");
            if (rep.counted.candies_zero_loops != rep.expected.candies_zero_loops)
                return fail("zero-loop class size");
        }

        // Advice wiring: under Sec6 every weld vertex's double partner must
        // sit in a pair with exactly one loop, every interior vertex's in an
        // even-parity pair (swapped under Sec63).
        std::vector<std::uint32_t> loops_of_group = loops_per_pair;
        for (VertexId v = 0; v < n; ++v) {
            if (g.role(v) != VertexRole::Body) continue;
            for (const NeighborEntry& e : g.neighbors(v)) {
                if (e.kind != EdgeKind::Double) continue;
                const bool partner_odd = loops_of_group[pair_of[e.neighbor]] == 1;
                const bool is_weld = depth[v] == static_cast<std::uint32_t>(k);
                const bool expect_odd =
                    inst.spec.advice == AdviceConvention::Sec6 ? is_weld : !is_weld;
                if (partner_odd != expect_odd) return fail("advice edge parity class");
                if (g.role(e.neighbor) != VertexRole::Antenna) return fail("advice edge not into antenna");
            }
        }
    } else {
        // G2 without ground truth: each bow-tie component holds one root and
        // at most one loop
        for (const auto& comp : comps) {
            std::uint32_t comp_loops = 0, comp_roots = 0;
            for (VertexId v : comp) {
                if (g.has_loop(v)) ++comp_loops;
                if (g.role(v) == VertexRole::Root) ++comp_roots;
            }
            if (comp_roots != 1) return fail("bow-tie component without a unique root");
            if (comp_loops > 1) return fail("bow-tie component with multiple loops");
        }
    }

    const std::uint64_t expected_components = inst.spec.variant == Variant::G2 ? 2 * pairs : pairs;
    if (inst.spec.variant != Variant::YesGeneral || inst.spec.single_long_weld) {
        if (rep.reduced_components != expected_components) return fail("reduced component count");
    }
    if (rep.loops_total != rep.expected.candies_one_loop + 2 * rep.expected.candies_two_loops)
        return fail("total loop count");

    rep.pass = true;
    return rep;
}

std::uint64_t edge_symmetric_difference(const MultiGraph& a, const MultiGraph& b) {
    auto collect = [](const MultiGraph& g) {
        std::map<std::tuple<VertexId, VertexId, EdgeKind>, std::uint64_t> edges;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            for (const NeighborEntry& e : g.neighbors(v)) {
                if (e.neighbor < v) continue; // count each undirected edge once; loops (==v) included
                const std::uint64_t weight = e.kind == EdgeKind::Double ? 2 : 1;
                edges[{v, e.neighbor, e.kind}] += weight;
            }
        }
        return edges;
    };
    const auto ea = collect(a);
    const auto eb = collect(b);
    std::uint64_t diff = 0;
    for (const auto& [key, w] : ea) {
        auto it = eb.find(key);
        const std::uint64_t wb = it == eb.end() ? 0 : it->second;
        diff += w > wb ? w - wb : 0;
    }
    for (const auto& [key, w] : eb) {
        auto it = ea.find(key);
        const std::uint64_t wa = it == ea.end() ? 0 : it->second;
        diff += w > wa ? w - wa : 0;
    }
    return diff;
}

} // namespace weldlab
