// multigraph.hpp - bounded-degree undirected multigraph with self-loops,
// double edges and per-vertex role tags. Degree is counted with multiplicity
// (single edge 1, double edge 2, self-loop 1) against a hard bound of 5,
// which caps the adjacency of any vertex at 5 slots and lets us store the
// whole structure in flat fixed-size arrays.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace weldlab {

using VertexId = std::uint32_t;

enum class EdgeKind : std::uint8_t { Single = 0, Double = 1 };

enum class VertexRole : std::uint8_t { Body = 0, Antenna = 1, Root = 2 };

inline const char* role_name(VertexRole r) {
    switch (r) {
        case VertexRole::Body: return "body";
        case VertexRole::Antenna: return "antenna";
        case VertexRole::Root: return "root";
    }
    return "?";
}

struct NeighborEntry {
    VertexId neighbor;
    EdgeKind kind;
};

constexpr int kMaxDegree = 5;

// Which edges a traversal ignores. Ignored edges are also excluded from
// degree counts.
struct EdgeFilter {
    bool ignore_double = false;
    bool ignore_loops = false;

    static EdgeFilter none() { return {}; }
    static EdgeFilter doubles() { return {true, false}; }
    static EdgeFilter doubles_and_loops() { return {true, true}; }
};

class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(VertexId n) { resize(n); }

    void resize(VertexId n) {
        nbr_.assign(static_cast<std::size_t>(n) * kMaxDegree, 0);
        kind_.assign(static_cast<std::size_t>(n) * kMaxDegree, 0);
        slot_count_.assign(n, 0);
        roles_.assign(n, static_cast<std::uint8_t>(VertexRole::Body));
        loops_.assign(n, 0);
    }

    VertexId vertex_count() const { return static_cast<VertexId>(slot_count_.size()); }

    VertexRole role(VertexId v) const { check(v); return static_cast<VertexRole>(roles_[v]); }
    void set_role(VertexId v, VertexRole r) { check(v); roles_[v] = static_cast<std::uint8_t>(r); }

    bool has_loop(VertexId v) const { check(v); return loops_[v] != 0; }

    // Adds an undirected edge (both endpoint slots). u != v.
    void add_edge(VertexId u, VertexId v, EdgeKind kind) {
        check(u); check(v);
        if (u == v) throw std::invalid_argument("add_edge: use add_loop for self-loops");
        const int weight = kind == EdgeKind::Double ? 2 : 1;
        if (degree(u) + weight > kMaxDegree)
            throw std::invalid_argument("add_edge: degree bound exceeded at vertex " + std::to_string(u));
        if (degree(v) + weight > kMaxDegree)
            throw std::invalid_argument("add_edge: degree bound exceeded at vertex " + std::to_string(v));
        add_slot_raw(u, v, kind);
        add_slot_raw(v, u, kind);
    }

    // Adds a self-loop at v (at most one per vertex), counting 1 to degree.
    void add_loop(VertexId v) {
        check(v);
        if (loops_[v]) throw std::invalid_argument("add_loop: vertex already has a self-loop");
        if (degree(v) + 1 > kMaxDegree) throw std::invalid_argument("add_loop: degree bound exceeded");
        loops_[v] = 1;
        add_slot_raw(v, v, EdgeKind::Single);
    }

    // Neighbor slots including the self-loop entry (own id) when present.
    std::vector<NeighborEntry> neighbors(VertexId v) const {
        check(v);
        std::vector<NeighborEntry> out;
        out.reserve(slot_count_[v]);
        for (int i = 0; i < slot_count_[v]; ++i) out.push_back(slot(v, i));
        return out;
    }

    int slot_count(VertexId v) const { check(v); return slot_count_[v]; }
    NeighborEntry slot(VertexId v, int i) const {
        const std::size_t at = static_cast<std::size_t>(v) * kMaxDegree + static_cast<std::size_t>(i);
        return NeighborEntry{nbr_[at], static_cast<EdgeKind>(kind_[at])};
    }

    // Degree counted with multiplicity, excluding edges matched by `ignore`.
    int degree(VertexId v, EdgeFilter ignore = EdgeFilter::none()) const {
        check(v);
        int d = 0;
        for (int i = 0; i < slot_count_[v]; ++i) {
            const NeighborEntry e = slot(v, i);
            if (e.neighbor == v) {
                if (!ignore.ignore_loops) d += 1;
            } else if (e.kind == EdgeKind::Double) {
                if (!ignore.ignore_double) d += 2;
            } else {
                d += 1;
            }
        }
        return d;
    }

    // Structural validation of the type invariants: symmetry with equal
    // multiplicity and kind, degree bound, at most one loop per vertex.
    // Throws std::runtime_error naming the first violated invariant.
    void validate() const;

    // Canonical form: neighbor slots sorted ascending by (neighbor, kind).
    void canonicalize();

private:
    void check(VertexId v) const {
        if (v >= vertex_count()) throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
    }
    void add_slot_raw(VertexId v, VertexId n, EdgeKind kind) {
        if (slot_count_[v] >= kMaxDegree) throw std::invalid_argument("adjacency slots exhausted");
        const std::size_t at = static_cast<std::size_t>(v) * kMaxDegree + slot_count_[v];
        nbr_[at] = n;
        kind_[at] = static_cast<std::uint8_t>(kind);
        ++slot_count_[v];
    }

    std::vector<VertexId> nbr_;
    std::vector<std::uint8_t> kind_;
    std::vector<std::uint8_t> slot_count_;
    std::vector<std::uint8_t> roles_;
    std::vector<std::uint8_t> loops_;
};

} // namespace weldlab
