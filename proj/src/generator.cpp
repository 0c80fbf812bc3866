#include "weldlab/generator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace weldlab {

namespace {

// Generator-natural vertex layout. Each pair holds two root-joined trees;
// within a tree, vertex 0 is the root, the antenna side occupies the next
// 2^{k+1}-2 slots (heap order, depth major), then the body side.
struct Layout {
    int k;
    std::uint64_t pairs;
    std::uint64_t side_size; // 2^{k+1} - 2
    std::uint64_t tree_size; // 2^{k+2} - 3

    explicit Layout(int k_, std::uint64_t pairs_)
        : k(k_), pairs(pairs_),
          side_size((std::uint64_t{2} << k_) - 2),
          tree_size(2 * ((std::uint64_t{2} << k_) - 2) + 1) {}

    std::uint64_t total() const { return pairs * 2 * tree_size; }

    std::uint64_t root(std::uint64_t pair, int tau) const {
        return (pair * 2 + static_cast<std::uint64_t>(tau)) * tree_size;
    }
    // d in [1, k], i in [0, 2^d)
    std::uint64_t side(std::uint64_t pair, int tau, bool body, int d, std::uint64_t i) const {
        const std::uint64_t local = 1 + (body ? side_size : 0) + ((std::uint64_t{1} << d) - 2 + i);
        return root(pair, tau) + local;
    }
};

std::uint64_t pow2(int e) { return std::uint64_t{1} << e; }

void add_tree_edges(MultiGraph& g, const Layout& lay, const std::vector<VertexId>& perm,
                    std::uint64_t pair, int tau) {
    auto at = [&](std::uint64_t natural) { return perm[natural]; };
    const VertexId r = at(lay.root(pair, tau));
    g.set_role(r, VertexRole::Root);
    for (int body = 0; body <= 1; ++body) {
        for (int d = 1; d <= lay.k; ++d) {
            for (std::uint64_t i = 0; i < pow2(d); ++i) {
                const VertexId v = at(lay.side(pair, tau, body != 0, d, i));
                g.set_role(v, body ? VertexRole::Body : VertexRole::Antenna);
                const VertexId parent = d == 1 ? r : at(lay.side(pair, tau, body != 0, d - 1, i / 2));
                g.add_edge(parent, v, EdgeKind::Single);
            }
        }
    }
}

// One uniformly random alternating Hamiltonian cycle over left/right leaf
// vectors of equal size n >= 2: visit left[sigma[i]], right[rho[i]] in turn.
void add_alternating_cycle(MultiGraph& g, const std::vector<VertexId>& left,
                           const std::vector<VertexId>& right, Rng& rng) {
    const std::size_t n = left.size();
    if (n != right.size() || n < 2)
        throw std::invalid_argument("alternating cycle needs two equal leaf sets of size >= 2");
    std::vector<std::uint32_t> sigma(n), rho(n);
    std::iota(sigma.begin(), sigma.end(), 0u);
    std::iota(rho.begin(), rho.end(), 0u);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::shuffle(rho.begin(), rho.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
        g.add_edge(left[sigma[i]], right[rho[i]], EdgeKind::Single);
        g.add_edge(right[rho[i]], left[sigma[(i + 1) % n]], EdgeKind::Single);
    }
}

// One uniformly random Hamiltonian cycle over a single leaf set, n >= 3
// (n = 2 would be a doubled 2-cycle, which collides with double-edge
// semantics and is rejected).
void add_self_cycle(MultiGraph& g, const std::vector<VertexId>& leaves, Rng& rng) {
    const std::size_t n = leaves.size();
    if (n < 3) throw std::invalid_argument("self weld needs at least 3 leaves (k >= 2)");
    std::vector<std::uint32_t> pi(n);
    std::iota(pi.begin(), pi.end(), 0u);
    std::shuffle(pi.begin(), pi.end(), rng);
    for (std::size_t i = 0; i < n; ++i)
        g.add_edge(leaves[pi[i]], leaves[pi[(i + 1) % n]], EdgeKind::Single);
}

// Collection of alternating cycles covering both leaf sets, each cycle
// holding at least 2 leaves per side.
void add_alternating_cycle_collection(MultiGraph& g, std::vector<VertexId> left,
                                      std::vector<VertexId> right, Rng& rng) {
    std::shuffle(left.begin(), left.end(), rng);
    std::shuffle(right.begin(), right.end(), rng);
    std::size_t at = 0;
    while (at < left.size()) {
        const std::size_t remaining = left.size() - at;
        std::size_t s = 2 + uniform_below(rng, remaining - 1);
        if (remaining - s == 1) s = remaining;
        std::vector<VertexId> l(left.begin() + at, left.begin() + at + s);
        std::vector<VertexId> r(right.begin() + at, right.begin() + at + s);
        add_alternating_cycle(g, l, r, rng);
        at += s;
    }
}

} // namespace

RoleCensus RoleCensus::closed_form(int k, int j) {
    RoleCensus c;
    const std::uint64_t pairs = 2 * static_cast<std::uint64_t>(j) * (pow2(k) - 1);
    c.roots = 2 * pairs;
    c.weld = pairs * 2 * pow2(k);
    c.interior = pairs * 2 * (pow2(k) - 2);
    c.antenna = pairs * 2 * (pow2(k + 1) - 2);
    c.candies_one_loop = static_cast<std::uint64_t>(j) * pow2(k);
    c.candies_two_loops = static_cast<std::uint64_t>(j) * (pow2(k - 1) - 1);
    c.candies_zero_loops = static_cast<std::uint64_t>(j) * (pow2(k - 1) - 1);
    return c;
}

VertexId RootJoinedTree::side_vertex(bool body, int d, std::uint32_t i) const {
    if (d < 1 || d > k || i >= pow2(d)) throw std::out_of_range("side_vertex: bad coordinates");
    const std::uint64_t side_size = pow2(k + 1) - 2;
    return static_cast<VertexId>(1 + (body ? side_size : 0) + (pow2(d) - 2 + i));
}

std::vector<VertexId> RootJoinedTree::body_leaves() const {
    std::vector<VertexId> out;
    out.reserve(pow2(k));
    for (std::uint64_t i = 0; i < pow2(k); ++i)
        out.push_back(body_vertex(k, static_cast<std::uint32_t>(i)));
    return out;
}

RootJoinedTree make_root_joined_tree(int k) {
    if (k < 1) throw std::invalid_argument("make_root_joined_tree: k must be >= 1");
    RootJoinedTree t;
    t.k = k;
    t.graph.resize(static_cast<VertexId>(pow2(k + 2) - 3));
    t.graph.set_role(0, VertexRole::Root);
    for (int body = 0; body <= 1; ++body) {
        for (int d = 1; d <= k; ++d) {
            for (std::uint32_t i = 0; i < pow2(d); ++i) {
                const VertexId v = t.side_vertex(body != 0, d, i);
                t.graph.set_role(v, body ? VertexRole::Body : VertexRole::Antenna);
                const VertexId parent = d == 1 ? t.root() : t.side_vertex(body != 0, d - 1, i / 2);
                t.graph.add_edge(parent, v, EdgeKind::Single);
            }
        }
    }
    return t;
}

WeldedPair weld_pair(const RootJoinedTree& t1, const RootJoinedTree& t2, WeldMode mode, Rng& rng) {
    if (t1.k != t2.k) throw std::invalid_argument("weld_pair: leaf-count mismatch");
    const int k = t1.k;
    if (mode == WeldMode::Self && pow2(k) < 3)
        throw std::invalid_argument("weld_pair: self weld of 2^k <= 2 leaves would double a 2-cycle");

    WeldedPair out;
    const VertexId n1 = t1.graph.vertex_count();
    out.graph.resize(n1 + t2.graph.vertex_count());
    auto copy_in = [&out](const MultiGraph& src, VertexId offset) {
        for (VertexId v = 0; v < src.vertex_count(); ++v) {
            out.graph.set_role(v + offset, src.role(v));
            for (const NeighborEntry& e : src.neighbors(v))
                if (e.neighbor > v) out.graph.add_edge(v + offset, e.neighbor + offset, e.kind);
        }
    };
    copy_in(t1.graph, 0);
    copy_in(t2.graph, n1);

    out.left_root = t1.root();
    out.right_root = static_cast<VertexId>(t2.root() + n1);
    out.left_leaves = t1.body_leaves();
    out.right_leaves = t2.body_leaves();
    for (VertexId& v : out.right_leaves) v = static_cast<VertexId>(v + n1);

    if (mode == WeldMode::Alternating) {
        add_alternating_cycle(out.graph, out.left_leaves, out.right_leaves, rng);
    } else {
        add_self_cycle(out.graph, out.left_leaves, rng);
        add_self_cycle(out.graph, out.right_leaves, rng);
    }
    return out;
}

LoopAssignment assign_self_loops(std::uint64_t pair_count, int k, int j, Rng& rng) {
    return assign_self_loops_with_convention(pair_count, k, j, AdviceConvention::Sec6, rng);
}

LoopAssignment assign_self_loops_with_convention(std::uint64_t pair_count, int k, int j,
                                                 AdviceConvention conv, Rng& rng) {
    const std::uint64_t expected = 2 * static_cast<std::uint64_t>(j) * (pow2(k) - 1);
    if (pair_count != expected)
        throw std::invalid_argument("assign_self_loops: expected " + std::to_string(expected) +
                                    " pairs, got " + std::to_string(pair_count));
    std::uint64_t one, two, zero;
    if (conv == AdviceConvention::Sec6) {
        one = static_cast<std::uint64_t>(j) * pow2(k);
        two = static_cast<std::uint64_t>(j) * (pow2(k - 1) - 1);
        zero = two;
    } else {
        // Swapped classes so that weld <-> even-parity antennas still forms a
        // bijection: 2^k - 2 one-loop pairs, 2^{k-1} with two, 2^{k-1} with none.
        one = static_cast<std::uint64_t>(j) * (pow2(k) - 2);
        two = static_cast<std::uint64_t>(j) * pow2(k - 1);
        zero = two;
    }
    LoopAssignment a;
    a.loops_per_pair.reserve(pair_count);
    a.loops_per_pair.insert(a.loops_per_pair.end(), one, 1);
    a.loops_per_pair.insert(a.loops_per_pair.end(), two, 2);
    a.loops_per_pair.insert(a.loops_per_pair.end(), zero, 0);
    std::shuffle(a.loops_per_pair.begin(), a.loops_per_pair.end(), rng);
    a.looped_root_of_pair.resize(pair_count, 0);
    for (std::uint64_t p = 0; p < pair_count; ++p)
        if (a.loops_per_pair[p] == 1)
            a.looped_root_of_pair[p] = static_cast<std::uint8_t>(uniform_below(rng, 2));
    return a;
}

Instance sample_instance(const InstanceSpec& spec) {
    if (spec.k < 2) throw std::invalid_argument("sample_instance: minimum supported k is 2");
    if (spec.variant == Variant::YesGeneral && spec.j < 1)
        throw std::invalid_argument("sample_instance: j must be positive");
    const std::uint64_t pairs = spec.pair_count();
    const Layout lay(spec.k, pairs);
    const std::uint64_t n64 = lay.total();
    if (n64 > 100'000'000ULL)
        throw std::invalid_argument("sample_instance: instance too large to materialize; use the lazy ensemble");
    const VertexId n = static_cast<VertexId>(n64);
    const int j = spec.variant == Variant::YesGeneral ? spec.j : 1;

    // Uniform public relabeling, fixed before construction so the graph is
    // built directly in its final label space.
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    {
        Rng rng = make_rng(spec.seed, "labels");
        std::shuffle(perm.begin(), perm.end(), rng);
    }

    Instance inst;
    inst.spec = spec;
    auto graph = std::make_shared<MultiGraph>(n);
    inst.truth.weld_bit.assign(n, 0);
    inst.truth.pair_id.assign(n, 0);

    for (std::uint64_t p = 0; p < pairs; ++p) {
        add_tree_edges(*graph, lay, perm, p, 0);
        add_tree_edges(*graph, lay, perm, p, 1);
    }
    for (std::uint64_t p = 0; p < pairs; ++p)
        for (std::uint64_t local = 0; local < 2 * lay.tree_size; ++local)
            inst.truth.pair_id[perm[lay.root(p, 0) + local]] = static_cast<std::uint32_t>(p);

    // self-loop classes
    Rng rng_loops = make_rng(spec.seed, "loop-classes");
    LoopAssignment loops =
        assign_self_loops_with_convention(pairs, spec.k, j, spec.advice, rng_loops);
    inst.truth.pair_loops = loops.loops_per_pair;
    for (std::uint64_t p = 0; p < pairs; ++p) {
        switch (loops.loops_per_pair[p]) {
            case 1: graph->add_loop(perm[lay.root(p, loops.looped_root_of_pair[p])]); break;
            case 2:
                graph->add_loop(perm[lay.root(p, 0)]);
                graph->add_loop(perm[lay.root(p, 1)]);
                break;
            default: break;
        }
    }

    // advice double edges via random bijections: under Sec6 weld
    // vertices match antennas of one-loop pairs and interior vertices match
    // antennas of even-parity pairs; Sec63 swaps the two classes.
    Rng rng_advice = make_rng(spec.seed, "advice");
    std::vector<VertexId> weld_slots, interior_slots, antenna_odd, antenna_even;
    for (std::uint64_t p = 0; p < pairs; ++p) {
        const bool odd = loops.loops_per_pair[p] == 1;
        for (int tau = 0; tau <= 1; ++tau) {
            for (int d = 1; d <= spec.k; ++d) {
                for (std::uint64_t i = 0; i < pow2(d); ++i) {
                    const VertexId body_v = perm[lay.side(p, tau, true, d, i)];
                    if (d == spec.k) {
                        weld_slots.push_back(body_v);
                        inst.truth.weld_bit[body_v] = 1;
                    } else {
                        interior_slots.push_back(body_v);
                    }
                    const VertexId ant_v = perm[lay.side(p, tau, false, d, i)];
                    (odd ? antenna_odd : antenna_even).push_back(ant_v);
                }
            }
        }
    }
    auto& weld_targets = spec.advice == AdviceConvention::Sec6 ? antenna_odd : antenna_even;
    auto& interior_targets = spec.advice == AdviceConvention::Sec6 ? antenna_even : antenna_odd;
    if (weld_slots.size() != weld_targets.size() || interior_slots.size() != interior_targets.size())
        throw std::logic_error("advice bijection cardinality mismatch (generator bug)");
    std::shuffle(weld_targets.begin(), weld_targets.end(), rng_advice);
    std::shuffle(interior_targets.begin(), interior_targets.end(), rng_advice);
    for (std::size_t i = 0; i < weld_slots.size(); ++i)
        graph->add_edge(weld_slots[i], weld_targets[i], EdgeKind::Double);
    for (std::size_t i = 0; i < interior_slots.size(); ++i)
        graph->add_edge(interior_slots[i], interior_targets[i], EdgeKind::Double);

    // weld cycles
    Rng rng_weld = make_rng(spec.seed, "weld");
    for (std::uint64_t p = 0; p < pairs; ++p) {
        std::vector<VertexId> left, right;
        left.reserve(pow2(spec.k));
        right.reserve(pow2(spec.k));
        for (std::uint64_t i = 0; i < pow2(spec.k); ++i) {
            left.push_back(perm[lay.side(p, 0, true, spec.k, i)]);
            right.push_back(perm[lay.side(p, 1, true, spec.k, i)]);
        }
        switch (spec.variant) {
            case Variant::G1:
                add_alternating_cycle(*graph, left, right, rng_weld);
                break;
            case Variant::G2:
                add_self_cycle(*graph, left, rng_weld);
                add_self_cycle(*graph, right, rng_weld);
                break;
            case Variant::YesGeneral:
                if (spec.single_long_weld) add_alternating_cycle(*graph, left, right, rng_weld);
                else add_alternating_cycle_collection(*graph, left, right, rng_weld);
                break;
        }
    }

    inst.graph = std::move(graph);
    return inst;
}

std::vector<std::uint8_t> ground_truth_advice(const Instance& inst) {
    return inst.truth.weld_bit;
}

} // namespace weldlab
