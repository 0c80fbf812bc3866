// analysis.hpp - the distance side of the separation: 2-coloring with odd
// cycle witnesses, bracketing bounds on bipartite distance (edge-disjoint
// odd-cycle packing below, local-search max-cut above, branch and bound on
// tiny components), structural census auditing against the closed forms.
#pragma once

#include "weldlab/generator.hpp"
#include "weldlab/multigraph.hpp"
#include "weldlab/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace weldlab {

// Instance with all double edges and self-loops removed. Simple by
// construction for generated instances (weld cycles never duplicate tree
// edges).
struct ReducedGraph {
    std::vector<std::vector<VertexId>> adj;

    static ReducedGraph from(const MultiGraph& g);
    std::size_t vertex_count() const { return adj.size(); }
    std::uint64_t edge_count() const;
};

struct TwoColorResult {
    bool bipartite = false;
    std::vector<std::uint8_t> color;     // valid when bipartite
    std::vector<VertexId> odd_cycle;     // closed odd walk witness otherwise
};

TwoColorResult two_color(const ReducedGraph& g);

enum class DistanceMode { PackingLB, LocalSearchUB, ExactSmall };

struct DistanceReport {
    bool is_bipartite = false;
    std::optional<std::vector<VertexId>> odd_cycle_witness;
    std::uint64_t lower_bound = 0; // edge-disjoint odd-cycle packing
    std::uint64_t upper_bound = 0; // edges above the best bipartition found
    std::optional<std::uint64_t> exact; // tiny components only
};

constexpr std::size_t kExactDistanceCap = 30;

// Bracketing bounds on min #edge deletions to reach bipartiteness.
// ExactSmall throws std::invalid_argument beyond kExactDistanceCap vertices.
DistanceReport bipartite_distance(const ReducedGraph& g, DistanceMode mode,
                                  std::uint64_t seed = 0);

// Connected components of the reduced graph.
std::vector<std::vector<VertexId>> reduced_components(const ReducedGraph& g);

// Induced subgraph on `keep`, relabeled 0..keep.size()-1.
ReducedGraph induced_subgraph(const ReducedGraph& g, const std::vector<VertexId>& keep);

struct CensusReport {
    RoleCensus expected;
    RoleCensus counted;
    bool pass = false;
    std::string failed_identity; // first identity that failed, empty when pass
    std::uint64_t reduced_components = 0;
    std::uint64_t loops_total = 0;
};

// Recount all role classes and loop classes from the raw graph and compare
// with the closed forms. Pair-level loop classes come from the generator's
// ground truth (the pairing is not classically recoverable for G2).
CensusReport structural_census(const Instance& inst);

// Multiset symmetric difference of edge sets (with multiplicity), counting
// loops once and double edges as two.
std::uint64_t edge_symmetric_difference(const MultiGraph& a, const MultiGraph& b);

} // namespace weldlab
