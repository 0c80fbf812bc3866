// oracle.hpp - label-obfuscated, query-counted adjacency-list access.
//
// Testers and markers see only public labels: the oracle permutes vertex ids
// uniformly and presents each neighbor list in a per-vertex shuffled order.
// Both permutations are fixed at construction from the oracle seed, so every
// answer is a pure function of (instance, seed, label). Neighbor-list queries
// cost 1; sampling a start label and reading the (public) vertex count are
// free.
#pragma once

#include "weldlab/multigraph.hpp"
#include "weldlab/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <utility>
#include <vector>

namespace weldlab {

using Label = std::uint64_t;

struct OracleAnswer {
    VertexRole role;
    bool loop;
    // All neighbors, in the instance-fixed permuted order. A self-loop shows
    // up as the vertex's own label with kind Single.
    std::vector<std::pair<Label, EdgeKind>> neighbors;
};

// The reduced single-edge component handed to the walk simulator: double
// edges and self-loops dropped, antenna subtrees severed at every root. This
// is the simulation stand-in for quantum superposition access and is not
// query-counted; the classical probe queries that the marking algorithm
// itself performs are billed separately.
struct BodyComponent {
    std::vector<Label> labels;
    std::vector<std::vector<std::uint32_t>> adj; // indices into labels
    std::vector<std::uint32_t> roots;            // indices with Root role
};

class AdjacencyOracle {
public:
    virtual ~AdjacencyOracle() = default;

    virtual OracleAnswer query(Label label) = 0;
    virtual Label random_vertex(Rng& rng) = 0;
    virtual std::uint64_t vertex_count() const = 0;
    virtual std::uint64_t query_count() const = 0;

    // Simulation backdoor (uncounted).
    virtual BodyComponent peek_body_component(Label root) = 0;
};

// Oracle over a materialized MultiGraph.
class OracleHandle final : public AdjacencyOracle {
public:
    OracleHandle(std::shared_ptr<const MultiGraph> graph, std::uint64_t seed)
        : graph_(std::move(graph)), seed_(seed) {
        const VertexId n = graph_->vertex_count();
        id_to_label_.resize(n);
        std::iota(id_to_label_.begin(), id_to_label_.end(), VertexId{0});
        Rng rng = make_rng(seed_, "oracle-label-perm");
        std::shuffle(id_to_label_.begin(), id_to_label_.end(), rng);
        label_to_id_.resize(n);
        for (VertexId v = 0; v < n; ++v) label_to_id_[id_to_label_[v]] = v;
    }

    OracleAnswer query(Label label) override {
        const VertexId v = to_internal(label);
        ++queries_;
        OracleAnswer ans;
        ans.role = graph_->role(v);
        ans.loop = graph_->has_loop(v);
        const int m = graph_->slot_count(v);
        ans.neighbors.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const NeighborEntry e = graph_->slot(v, i);
            ans.neighbors.emplace_back(id_to_label_[e.neighbor], e.kind);
        }
        // Instance-fixed neighbor order: a fresh per-vertex stream, not
        // re-randomized across repeated queries.
        Rng order = make_rng(seed_, "oracle-nbr-order", v);
        std::shuffle(ans.neighbors.begin(), ans.neighbors.end(), order);
        return ans;
    }

    Label random_vertex(Rng& rng) override {
        if (graph_->vertex_count() == 0) throw std::invalid_argument("random_vertex: empty instance");
        return uniform_below(rng, graph_->vertex_count());
    }

    std::uint64_t vertex_count() const override { return graph_->vertex_count(); }
    std::uint64_t query_count() const override { return queries_; }

    BodyComponent peek_body_component(Label root) override;

    // Harness-only helpers for validation against ground truth; testers never
    // touch internal ids.
    VertexId to_internal(Label label) const {
        if (label >= label_to_id_.size())
            throw std::invalid_argument("unknown public label " + std::to_string(label));
        return label_to_id_[static_cast<std::size_t>(label)];
    }
    Label to_label(VertexId v) const { return id_to_label_.at(v); }

    const MultiGraph& graph() const { return *graph_; }

private:
    std::shared_ptr<const MultiGraph> graph_;
    std::uint64_t seed_;
    std::uint64_t queries_ = 0;
    std::vector<VertexId> id_to_label_;
    std::vector<VertexId> label_to_id_;
};

} // namespace weldlab
