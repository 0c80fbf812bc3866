// knowledge.hpp - the adversary's view of the instance: known labels with
// roles and provenance, known edges, and a parity union-find over single
// edges for online (odd) cycle detection.
#pragma once

#include "weldlab/multigraph.hpp"
#include "weldlab/oracle.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace weldlab {

// How a label first entered the knowledge graph.
enum class KnownVia : std::uint8_t {
    InitialRoot,   // pre-known root label
    FreeRootChild, // revealed by a free root query
    SingleEdge,    // revealed as a tree/weld neighbor
    AdviceEdge,    // revealed across a double edge
    Queried,       // target of an unknown-label query
    Start          // handed to the adversary as a starting vertex
};

class KnowledgeGraph {
public:
    struct VertexInfo {
        VertexRole role = VertexRole::Body;
        KnownVia via = KnownVia::SingleEdge;
        bool queried = false;
        bool loop = false;
        std::uint32_t id = 0; // dense index, assigned on insertion
    };

    struct EdgeOutcome {
        bool is_new = false;
        bool closed_cycle = false;
        bool closed_odd_cycle = false;
    };

    bool knows(Label l) const { return vertices_.count(l) != 0; }
    bool queried(Label l) const {
        auto it = vertices_.find(l);
        return it != vertices_.end() && it->second.queried;
    }

    const VertexInfo& info(Label l) const {
        auto it = vertices_.find(l);
        if (it == vertices_.end()) throw std::invalid_argument("label not in knowledge graph");
        return it->second;
    }

    void add_vertex(Label l, VertexRole role, KnownVia via, bool loop = false) {
        auto [it, fresh] =
            vertices_.try_emplace(l, VertexInfo{role, via, false, loop,
                                                static_cast<std::uint32_t>(vertices_.size())});
        if (fresh) {
            uf_parent_.push_back(it->second.id);
            uf_parity_.push_back(0);
        } else {
            it->second.loop = it->second.loop || loop;
        }
    }

    void mark_queried(Label l) { vertices_.at(l).queried = true; }

    // Both endpoints must already be known. Single edges feed the parity
    // union-find; double (advice) edges are recorded but do not count toward
    // the traversal cycles the games are about.
    EdgeOutcome add_edge(Label a, Label b, EdgeKind kind) {
        if (!knows(a) || !knows(b)) throw std::logic_error("knowledge edge with unknown endpoint");
        EdgeOutcome out;
        const std::uint32_t ia = vertices_.at(a).id, ib = vertices_.at(b).id;
        const std::uint64_t key = edge_key(ia, ib, kind);
        if (!edges_.insert(key).second) return out;
        out.is_new = true;
        if (kind != EdgeKind::Single || a == b) return out;
        auto [ra, pa] = find(ia);
        auto [rb, pb] = find(ib);
        if (ra == rb) {
            out.closed_cycle = true;
            out.closed_odd_cycle = pa == pb; // even path + this edge = odd cycle
            cycle_seen_ = true;
            if (out.closed_odd_cycle) odd_cycle_seen_ = true;
        } else {
            uf_parent_[ra] = rb;
            uf_parity_[ra] = static_cast<std::uint8_t>(pa ^ pb ^ 1);
        }
        return out;
    }

    bool cycle_seen() const { return cycle_seen_; }
    bool odd_cycle_seen() const { return odd_cycle_seen_; }
    std::size_t vertex_count() const { return vertices_.size(); }

    template <class F>
    void for_each_vertex(F&& f) const {
        for (const auto& [l, info] : vertices_) f(l, info);
    }

private:
    std::pair<std::uint32_t, std::uint8_t> find(std::uint32_t x) {
        std::uint32_t root = x;
        std::uint8_t parity = 0;
        while (uf_parent_[root] != root) {
            parity ^= uf_parity_[root];
            root = uf_parent_[root];
        }
        // path compression, repointing every node straight to the root
        std::uint32_t cur = x;
        std::uint8_t cur_parity = parity;
        while (uf_parent_[cur] != cur) {
            const std::uint32_t next = uf_parent_[cur];
            const std::uint8_t step = uf_parity_[cur];
            uf_parent_[cur] = root;
            uf_parity_[cur] = cur_parity;
            cur_parity = static_cast<std::uint8_t>(cur_parity ^ step);
            cur = next;
        }
        return {root, parity};
    }

    static std::uint64_t edge_key(std::uint32_t a, std::uint32_t b, EdgeKind kind) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 33) | (static_cast<std::uint64_t>(b) << 1) |
               (kind == EdgeKind::Double ? 1u : 0u);
    }

    std::unordered_map<Label, VertexInfo> vertices_;
    std::unordered_set<std::uint64_t> edges_;
    std::vector<std::uint32_t> uf_parent_;
    std::vector<std::uint8_t> uf_parity_;
    bool cycle_seen_ = false;
    bool odd_cycle_seen_ = false;
};

} // namespace weldlab
