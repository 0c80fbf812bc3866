// lazy_instance.hpp - instance ensembles sampled on demand.
//
// The adversary experiments need G1/G2 instances and bare (self-)welded
// trees at sizes far beyond what can be materialized (k up to 20), while
// strategies only ever see a handful of vertices. Everything here defers
// random decisions until first observation and keeps the conditional
// distribution exact: weld cycles grow fragment by fragment with the
// completion-counting weights, advice bijections match slots uniformly among
// the unmatched, labels are fresh uniform 64-bit values.
#pragma once

#include "weldlab/generator.hpp"
#include "weldlab/oracle.hpp"
#include "weldlab/rng.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace weldlab {

// Uniform Hamiltonian cycle over one leaf set (self mode, n >= 3) or
// uniform alternating Hamiltonian cycle over two equal leaf sets, sampled
// incrementally. Slot = (side, index); in self mode side is always 0.
class LazyCycle {
public:
    struct Slot {
        std::uint8_t side;
        std::uint64_t idx;
        bool operator==(const Slot&) const = default;
    };

    LazyCycle(std::uint64_t n_left, std::uint64_t n_right);

    // Both cycle neighbors of a leaf, sampling lazily.
    std::pair<Slot, Slot> neighbors(Slot x, Rng& rng);

    // Sample every remaining edge (used before materializing a component).
    void complete(Rng& rng);

    // Visit every sampled edge once.
    template <class F>
    void for_each_edge(F&& f) const {
        for (const auto& [key, node] : nodes_) {
            const Slot self = unkey(key);
            for (int i = 0; i < node.filled; ++i) {
                const Slot other = node.nb[i];
                if (key < key_of(other)) f(self, other);
            }
        }
    }

    bool alternating() const { return n_[1] != 0; }

private:
    struct Node {
        Slot nb[2];
        int filled = 0;
        // fragment bookkeeping for endpoint leaves
        std::uint64_t uf_parent;
        int list_id = -1;  // which endpoint list this leaf currently sits in
        std::size_t list_pos = 0;
    };

    static std::uint64_t key_of(Slot s) {
        return (static_cast<std::uint64_t>(s.side) << 62) | s.idx;
    }
    static Slot unkey(std::uint64_t key) {
        return Slot{static_cast<std::uint8_t>(key >> 62), key & ((std::uint64_t{1} << 62) - 1)};
    }

    Node& touch(Slot s);
    std::uint64_t uf_find(std::uint64_t key);
    struct FragInfo {
        std::uint64_t end_a, end_b; // endpoint leaf keys
        std::uint64_t size;
    };

    // Endpoint lists by fragment end type. Self mode uses only kEndPlain.
    enum ListId { kEndPlain = 0, kEndLL = 1, kEndRR = 2, kEndLRLeft = 3, kEndLRRight = 4 };
    void list_insert(std::uint64_t leaf_key, int list);
    void list_remove(std::uint64_t leaf_key);
    void refresh_fragment_lists(std::uint64_t root_key);

    // Draws the partner slot for the free slot of `leaf_key` and links them.
    Slot draw_partner_and_link(std::uint64_t leaf_key, Rng& rng);
    void link(std::uint64_t a_key, std::uint64_t b_key);
    std::uint64_t fresh_leaf(std::uint8_t side, std::optional<std::uint64_t> avoid, Rng& rng);

    std::uint64_t n_[2];
    std::unordered_map<std::uint64_t, Node> nodes_;
    std::unordered_map<std::uint64_t, FragInfo> fragments_; // keyed by uf root
    std::vector<std::uint64_t> lists_[5];
    std::uint64_t touched_[2] = {0, 0}; // touched leaves per side
    std::uint64_t tracked_fragments_ = 0;
    std::uint64_t edges_ = 0;
};

// ---------------------------------------------------------------------------

// Structural coordinate of a vertex inside the pair ensemble.
struct Coord {
    std::uint32_t pair = 0;
    std::uint8_t tree = 0;  // 0 or 1 within the pair
    std::uint8_t side = 0;  // 0 root, 1 antenna, 2 body
    std::uint8_t depth = 0; // 1..k for side vertices
    std::uint64_t idx = 0;  // < 2^depth
    bool operator==(const Coord&) const = default;
};

struct CoordHash {
    std::size_t operator()(const Coord& c) const {
        std::uint64_t x = (static_cast<std::uint64_t>(c.pair) << 40) ^
                          (static_cast<std::uint64_t>(c.tree) << 38) ^
                          (static_cast<std::uint64_t>(c.side) << 36) ^
                          (static_cast<std::uint64_t>(c.depth) << 28) ^ c.idx;
        return static_cast<std::size_t>(splitmix64(x));
    }
};

// A G1/G2 instance sampled on demand behind the AdjacencyOracle interface.
// Labels are fresh uniform 64-bit values tagged with their role; pair
// classes and loop flags are fixed up front (they are pair-level and small);
// weld cycles and advice bijections are sampled on first touch.
class LazyEnsembleOracle final : public AdjacencyOracle {
public:
    LazyEnsembleOracle(int k, Variant variant, std::uint64_t seed,
                       AdviceConvention convention = AdviceConvention::Sec6);

    OracleAnswer query(Label label) override;
    Label random_vertex(Rng& rng) override;
    std::uint64_t vertex_count() const override;
    std::uint64_t query_count() const override { return queries_; }
    BodyComponent peek_body_component(Label root) override;

    // --- harness-side (uncounted) helpers -------------------------------
    Label label_of(const Coord& c);            // assigns lazily
    const Coord& coord_of(Label l) const;
    bool known_label(Label l) const { return label_to_coord_.count(l) != 0; }
    VertexRole role_of_label(Label l) const;
    std::vector<Label> root_labels();          // all roots, materialized
    bool root_has_loop(const Coord& root_coord) const;
    // Uniform vertex of a given role among those whose label is not yet
    // assigned (adversary Actions I and II).
    std::optional<Coord> sample_unknown(VertexRole role, Rng& rng, int max_tries = 4096);
    // Ground-truth weld bit (validation only).
    bool weld_bit(const Coord& c) const { return c.side == 2 && c.depth == k_; }
    std::uint32_t pair_of(Label l) const { return coord_of(l).pair; }
    int k() const { return k_; }
    Variant variant() const { return variant_; }
    std::uint64_t pair_count() const { return pairs_; }
    const std::vector<std::uint8_t>& pair_loops() const { return loop_assignment_.loops_per_pair; }

    // Advice partner of a body/antenna vertex (samples the bijection edge).
    Coord advice_partner(const Coord& c);

private:
    Coord parent_of(const Coord& c) const;
    LazyCycle& cycle_of_pair(std::uint32_t pair, std::uint8_t tree);
    bool pair_parity_odd(std::uint32_t pair) const {
        return loop_assignment_.loops_per_pair[pair] == 1;
    }

    // Advice bijection pools. Class 0: weld <-> antenna-in-matching-parity
    // pairs; class 1: interior <-> antenna-in-other-parity pairs.
    Coord draw_unmatched_antenna(bool odd_pairs, Rng& rng);
    Coord draw_unmatched_body(bool weld, Rng& rng);

    int k_;
    Variant variant_;
    AdviceConvention convention_;
    std::uint64_t seed_;
    std::uint64_t pairs_;
    Rng rng_; // lazily consumed; all sampling flows through this stream
    LoopAssignment loop_assignment_;
    std::vector<std::uint32_t> odd_pair_ids_;
    std::vector<std::uint32_t> even_pair_ids_;

    std::unordered_map<Coord, Label, CoordHash> coord_to_label_;
    std::unordered_map<Label, Coord> label_to_coord_;
    std::unordered_map<Coord, Coord, CoordHash> advice_match_;
    std::unordered_map<std::uint64_t, LazyCycle> cycles_; // key: pair*2+tree (G2) or pair (G1)
    std::uint64_t queries_ = 0;
};

// Bare (self-)welded tree for games A-D: binary trees of depth k without
// antennas, advice edges or loops.
class LazyGameTree {
public:
    enum class Kind { SelfWelded, Welded };

    LazyGameTree(Kind kind, int k, std::uint64_t seed);

    struct TreeCoord {
        std::uint8_t tree;
        std::uint8_t depth;
        std::uint64_t idx;
        bool operator==(const TreeCoord&) const = default;
    };

    OracleAnswer query(Label label); // role field unused (Body for all)
    Label label_of(const TreeCoord& c);
    const TreeCoord& coord_of(Label l) const;
    bool known_label(Label l) const { return label_to_coord_.count(l) != 0; }
    Label root_label(std::uint8_t tree) { return label_of({tree, 0, 0}); }
    bool is_root(const TreeCoord& c) const { return c.depth == 0; }
    Label uniform_vertex(Rng& rng);
    std::uint64_t query_count() const { return queries_; }
    int k() const { return k_; }
    Kind kind() const { return kind_; }

private:
    struct TreeCoordHash {
        std::size_t operator()(const TreeCoord& c) const {
            return static_cast<std::size_t>(
                splitmix64((static_cast<std::uint64_t>(c.tree) << 40) ^
                           (static_cast<std::uint64_t>(c.depth) << 32) ^ c.idx));
        }
    };

    Kind kind_;
    int k_;
    Rng rng_;
    LazyCycle cycle_;
    std::unordered_map<TreeCoord, Label, TreeCoordHash> coord_to_label_;
    std::unordered_map<Label, TreeCoord> label_to_coord_;
    std::uint64_t queries_ = 0;
};

} // namespace weldlab
