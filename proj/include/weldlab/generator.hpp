// generator.hpp - construction of the yes-instance candy ensembles and the
// hard no-instance double-bow-tie ensembles.
//
// An instance is assembled from 2j(2^k-1) pairs of depth-k root-joined
// binary trees: self-loop classes are assigned to pairs, advice double
// edges pair every non-root body vertex with a distinct antenna vertex
// (weld vertices to antennas of one-loop pairs, interior vertices to
// antennas of even-parity pairs), and the body leaves of every pair are
// welded by a single alternating cycle (yes) or by one cycle per tree (no).
// Finally all vertex ids are shuffled uniformly.
#pragma once

#include "weldlab/multigraph.hpp"
#include "weldlab/rng.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace weldlab {

enum class Variant { G1, G2, YesGeneral };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::G1: return "g1";
        case Variant::G2: return "g2";
        case Variant::YesGeneral: return "yes";
    }
    return "?";
}

// Advice wiring convention. Sec6 (the default) sends
// weld vertices to antennas in one-loop pairs; Sec63 swaps the two classes.
enum class AdviceConvention { Sec6, Sec63 };

struct InstanceSpec {
    int k = 3;
    Variant variant = Variant::G1;
    int j = 1;                    // candy multiplicity (YesGeneral only)
    std::uint64_t seed = 0;
    bool single_long_weld = true; // YesGeneral may split the weld into shorter alternating cycles
    AdviceConvention advice = AdviceConvention::Sec6;

    std::uint64_t pair_count() const {
        const std::uint64_t mult = variant == Variant::YesGeneral ? static_cast<std::uint64_t>(j) : 1;
        return 2 * mult * ((std::uint64_t{1} << k) - 1);
    }
};

struct RoleCensus {
    std::uint64_t roots = 0;
    std::uint64_t weld = 0;
    std::uint64_t interior = 0;
    std::uint64_t antenna = 0;
    std::uint64_t candies_zero_loops = 0;
    std::uint64_t candies_one_loop = 0;
    std::uint64_t candies_two_loops = 0;

    std::uint64_t total_vertices() const { return roots + weld + interior + antenna; }

    // Closed forms for an instance with p = 2j(2^k-1) pairs.
    static RoleCensus closed_form(int k, int j = 1);
};

// Candy vertex count 2^{k+3} - 6.
inline std::uint64_t candy_vertex_count(int k) { return (std::uint64_t{1} << (k + 3)) - 6; }

// Total instance size p * (2^{k+3} - 6) with p = 2j(2^k-1).
inline std::uint64_t instance_vertex_count(int k, int j = 1) {
    return 2 * static_cast<std::uint64_t>(j) * ((std::uint64_t{1} << k) - 1) * candy_vertex_count(k);
}

// Ground truth retained by the generator for validation harnesses only;
// testers and markers never see it.
struct GroundTruth {
    std::vector<std::uint8_t> weld_bit;    // per vertex id: 1 iff weld vertex
    std::vector<std::uint32_t> pair_id;    // per vertex id
    std::vector<std::uint8_t> pair_loops;  // per pair: 0, 1 or 2 self-loops
};

struct Instance {
    std::shared_ptr<const MultiGraph> graph;
    InstanceSpec spec;
    GroundTruth truth;
};

// A root-joined binary tree fragment: two depth-k binary trees (antenna and
// body) sharing their root. Vertex 0 is the root; side vertices are laid out
// heap-style level by level.
struct RootJoinedTree {
    int k = 0;
    MultiGraph graph; // roles set; no loops, no welds, no advice edges yet

    VertexId root() const { return 0; }
    // Side-local addressing: depth d in [1,k], index i in [0, 2^d).
    VertexId antenna_vertex(int d, std::uint32_t i) const { return side_vertex(false, d, i); }
    VertexId body_vertex(int d, std::uint32_t i) const { return side_vertex(true, d, i); }
    VertexId side_vertex(bool body, int d, std::uint32_t i) const;
    std::vector<VertexId> body_leaves() const;
};

// Two depth-k binary trees sharing a root (degree 4).
RootJoinedTree make_root_joined_tree(int k);

enum class WeldMode { Alternating, Self };

// Welding of a standalone pair of fragments assembled into one graph:
// alternating joins the two leaf sets by one Hamiltonian cycle alternating
// sides; self joins each tree's own leaves by one cycle. Used directly by
// unit tests; sample_instance applies the same wiring inline.
struct WeldedPair {
    MultiGraph graph;
    std::vector<VertexId> left_leaves;
    std::vector<VertexId> right_leaves;
    VertexId left_root = 0;
    VertexId right_root = 0;
};
WeldedPair weld_pair(const RootJoinedTree& t1, const RootJoinedTree& t2, WeldMode mode, Rng& rng);

// Loop classes over exactly 2j(2^k-1) pairs: j*2^k pairs get one
// loop (uniform root), j*(2^{k-1}-1) get two, j*(2^{k-1}-1) get none.
struct LoopAssignment {
    std::vector<std::uint8_t> loops_per_pair;      // 0, 1 or 2
    std::vector<std::uint8_t> looped_root_of_pair; // for one-loop pairs: which root (0/1)
};
LoopAssignment assign_self_loops(std::uint64_t pair_count, int k, int j, Rng& rng);
// Sec63 swaps the advice classes, which forces swapped class sizes to keep
// the weld <-> antenna bijection exact (2^k-2 one-loop pairs, 2^{k-1} each
// with two and zero).
LoopAssignment assign_self_loops_with_convention(std::uint64_t pair_count, int k, int j,
                                                 AdviceConvention conv, Rng& rng);

// Full assembly: trees, loops, advice edges, welds, relabeling.
Instance sample_instance(const InstanceSpec& spec);

// Ground-truth advice for the oracle's label space: bit per public label.
std::vector<std::uint8_t> ground_truth_advice(const Instance& inst);

} // namespace weldlab
