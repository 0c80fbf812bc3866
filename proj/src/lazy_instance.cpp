#include "weldlab/lazy_instance.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace weldlab {

// ---------------------------------------------------------------------------
// LazyCycle
//
// Fragments of the eventual cycle are paths; every fragment exposes exactly
// two free half-edge slots (a fresh leaf is a virtual singleton with both
// slots free). Connecting two fragments multiplies the number of completions
// by a factor that depends only on the aggregate fragment profile, except in
// the alternating case where fragments whose ends lie on the same side (LL /
// RR) versus opposite sides (LR) complete differently: attaching a same-side
// fragment end to an RR/LL slot carries weight 2a-1 against weight 2a for an
// LR slot, with a the number of LL (equivalently RR) fragments. Sampling
// with those weights keeps the final cycle exactly uniform.

LazyCycle::LazyCycle(std::uint64_t n_left, std::uint64_t n_right) {
    n_[0] = n_left;
    n_[1] = n_right;
    if (n_right == 0) {
        if (n_left < 3) throw std::invalid_argument("LazyCycle: self cycle needs >= 3 leaves");
    } else {
        if (n_left != n_right || n_left < 2)
            throw std::invalid_argument("LazyCycle: alternating cycle needs equal sides of >= 2");
    }
}

LazyCycle::Node& LazyCycle::touch(Slot s) {
    const std::uint64_t key = key_of(s);
    auto it = nodes_.find(key);
    if (it != nodes_.end()) return it->second;
    Node node;
    node.uf_parent = key;
    ++touched_[s.side];
    return nodes_.emplace(key, node).first->second;
}

std::uint64_t LazyCycle::uf_find(std::uint64_t key) {
    std::uint64_t root = key;
    while (nodes_.at(root).uf_parent != root) root = nodes_.at(root).uf_parent;
    while (nodes_.at(key).uf_parent != key) {
        const std::uint64_t next = nodes_.at(key).uf_parent;
        nodes_.at(key).uf_parent = root;
        key = next;
    }
    return root;
}

void LazyCycle::list_insert(std::uint64_t leaf_key, int list) {
    Node& node = nodes_.at(leaf_key);
    if (node.list_id == list) return;
    if (node.list_id >= 0) list_remove(leaf_key);
    node.list_id = list;
    node.list_pos = lists_[list].size();
    lists_[list].push_back(leaf_key);
}

void LazyCycle::list_remove(std::uint64_t leaf_key) {
    Node& node = nodes_.at(leaf_key);
    if (node.list_id < 0) return;
    auto& list = lists_[node.list_id];
    const std::size_t pos = node.list_pos;
    list[pos] = list.back();
    nodes_.at(list[pos]).list_pos = pos;
    list.pop_back();
    node.list_id = -1;
}

void LazyCycle::refresh_fragment_lists(std::uint64_t root_key) {
    const FragInfo& info = fragments_.at(root_key);
    const Slot a = unkey(info.end_a), b = unkey(info.end_b);
    if (!alternating()) {
        list_insert(info.end_a, kEndPlain);
        list_insert(info.end_b, kEndPlain);
        return;
    }
    if (a.side == 0 && b.side == 0) {
        list_insert(info.end_a, kEndLL);
        list_insert(info.end_b, kEndLL);
    } else if (a.side == 1 && b.side == 1) {
        list_insert(info.end_a, kEndRR);
        list_insert(info.end_b, kEndRR);
    } else {
        list_insert(a.side == 0 ? info.end_a : info.end_b, kEndLRLeft);
        list_insert(a.side == 0 ? info.end_b : info.end_a, kEndLRRight);
    }
}

std::uint64_t LazyCycle::fresh_leaf(std::uint8_t side, std::optional<std::uint64_t> avoid, Rng& rng) {
    for (int tries = 0; tries < 1 << 20; ++tries) {
        const Slot s{side, uniform_below(rng, n_[side])};
        const std::uint64_t key = key_of(s);
        if (nodes_.count(key)) continue;
        if (avoid && *avoid == key) continue;
        return key;
    }
    throw std::runtime_error("LazyCycle: fresh leaf rejection sampling exhausted");
}

void LazyCycle::link(std::uint64_t a_key, std::uint64_t b_key) {
    Node& na = touch(unkey(a_key));
    Node& nb = touch(unkey(b_key));
    if (na.filled >= 2 || nb.filled >= 2) throw std::logic_error("LazyCycle: slot overflow");
    na.nb[na.filled++] = unkey(b_key);
    nb.nb[nb.filled++] = unkey(a_key);
    ++edges_;

    auto frag_of = [&](std::uint64_t key) -> std::uint64_t {
        const std::uint64_t root = uf_find(key);
        if (!fragments_.count(root)) fragments_[root] = FragInfo{key, key, 1};
        return root;
    };
    const std::uint64_t ra = frag_of(a_key);
    const std::uint64_t rb = frag_of(b_key);
    if (ra == rb) {
        // closing the full cycle
        const FragInfo info = fragments_.at(ra);
        list_remove(info.end_a);
        list_remove(info.end_b);
        fragments_.erase(ra);
        return;
    }
    const FragInfo fa = fragments_.at(ra);
    const FragInfo fb = fragments_.at(rb);
    const std::uint64_t other_a = fa.end_a == a_key ? fa.end_b : fa.end_a;
    const std::uint64_t other_b = fb.end_a == b_key ? fb.end_b : fb.end_a;

    // Leaves that are no longer fragment ends leave their lists. A leaf stays
    // an end when it still has a free slot (fresh singletons keep one).
    if (other_a != a_key) list_remove(a_key);
    else if (nodes_.at(a_key).filled == 2) list_remove(a_key);
    if (other_b != b_key) list_remove(b_key);
    else if (nodes_.at(b_key).filled == 2) list_remove(b_key);

    nodes_.at(rb).uf_parent = ra;
    fragments_.erase(rb);
    FragInfo merged;
    merged.size = fa.size + fb.size;
    merged.end_a = nodes_.at(a_key).filled == 2 ? other_a : a_key;
    merged.end_b = nodes_.at(b_key).filled == 2 ? other_b : b_key;
    fragments_[ra] = merged;
    if (nodes_.at(merged.end_a).filled == 2 || nodes_.at(merged.end_b).filled == 2)
        throw std::logic_error("LazyCycle: merged fragment lost a free end");
    refresh_fragment_lists(ra);
}

LazyCycle::Slot LazyCycle::draw_partner_and_link(std::uint64_t leaf_key, Rng& rng) {
    const Slot x = unkey(leaf_key);
    const bool x_tracked = nodes_.count(leaf_key) != 0;

    // Fragment of x: end sides and membership for exclusions.
    std::uint64_t x_root = 0;
    Slot end_a = x, end_b = x; // virtual singleton
    if (x_tracked) {
        x_root = uf_find(leaf_key);
        const FragInfo& info = fragments_.at(x_root);
        end_a = unkey(info.end_a);
        end_b = unkey(info.end_b);
    }

    const std::uint64_t fresh_l = n_[0] - touched_[0];
    const std::uint64_t fresh_r = alternating() ? n_[1] - touched_[1] : 0;
    const std::uint64_t fragments_total =
        fragments_.size() + fresh_l + fresh_r + (x_tracked ? 0 : 1);

    if (fragments_total == 1) {
        // x's fragment spans every leaf; close the cycle.
        const std::uint64_t partner =
            key_of(end_a) == leaf_key ? key_of(end_b) : key_of(end_a);
        link(leaf_key, partner);
        return unkey(partner);
    }

    std::uint64_t partner_key = 0;
    if (!alternating()) {
        // Every other fragment offers 2 slots, all equivalent.
        const std::uint64_t fresh_other = fresh_l - (x_tracked ? 0 : 1);
        const std::uint64_t tracked_slots =
            lists_[kEndPlain].size() - (x_tracked ? 2 : 0);
        const std::uint64_t total = 2 * fresh_other + tracked_slots;
        const std::uint64_t r = uniform_below(rng, total);
        if (r < 2 * fresh_other) {
            partner_key = fresh_leaf(0, x_tracked ? std::nullopt : std::optional(leaf_key), rng);
        } else {
            for (;;) {
                const std::uint64_t cand =
                    lists_[kEndPlain][uniform_below(rng, lists_[kEndPlain].size())];
                if (x_tracked && uf_find(cand) == x_root) continue;
                partner_key = cand;
                break;
            }
        }
    } else {
        const std::uint8_t sx = x.side;
        const std::uint8_t sr = static_cast<std::uint8_t>(1 - sx);
        // fragment profile: a = #same-side-ended fragments per side, b = #LR
        const std::uint64_t a_tracked_same_sr =
            (sr == 0 ? lists_[kEndLL].size() : lists_[kEndRR].size()) / 2;
        const std::uint64_t a = a_tracked_same_sr + (sr == 0 ? fresh_l : fresh_r);
        const std::uint64_t b = lists_[kEndLRLeft].size();
        const bool x_frag_is_lr = end_a.side != end_b.side;

        const int same_list = sr == 0 ? kEndLL : kEndRR;
        const int lr_list = sr == 0 ? kEndLRLeft : kEndLRRight;
        const std::uint64_t fresh_sr = sr == 0 ? fresh_l : fresh_r;

        auto pick_same_side_slot = [&]() {
            const std::uint64_t r2 = uniform_below(rng, 2 * a);
            if (r2 < 2 * fresh_sr) return fresh_leaf(sr, std::nullopt, rng);
            return lists_[same_list][uniform_below(rng, lists_[same_list].size())];
        };

        if (x_frag_is_lr) {
            // successor profile is the same for every eligible slot: uniform
            // over 2a same-side-type slots and the other b-1 LR ends.
            const std::uint64_t total = 2 * a + b - 1;
            const std::uint64_t r = uniform_below(rng, total);
            if (r < 2 * a) {
                partner_key = pick_same_side_slot();
            } else {
                for (;;) {
                    const std::uint64_t cand =
                        lists_[lr_list][uniform_below(rng, lists_[lr_list].size())];
                    if (uf_find(cand) == x_root) continue;
                    partner_key = cand;
                    break;
                }
            }
        } else {
            // x sits on an LL/RR-type fragment: completion counts differ by
            // target type; weight same-side-type slots 2a-1 and LR slots 2a.
            const std::uint64_t w_same = 2 * a * (2 * a - 1);
            const std::uint64_t w_lr = b * 2 * a;
            const std::uint64_t r = uniform_below(rng, w_same + w_lr);
            if (r < w_same) {
                partner_key = pick_same_side_slot();
            } else {
                partner_key = lists_[lr_list][uniform_below(rng, lists_[lr_list].size())];
            }
        }
    }
    link(leaf_key, partner_key);
    return unkey(partner_key);
}

std::pair<LazyCycle::Slot, LazyCycle::Slot> LazyCycle::neighbors(Slot x, Rng& rng) {
    if (x.idx >= n_[x.side] || (x.side == 1 && !alternating()))
        throw std::out_of_range("LazyCycle: bad slot");
    const std::uint64_t key = key_of(x);
    auto it = nodes_.find(key);
    int have = it == nodes_.end() ? 0 : it->second.filled;
    while (have < 2) {
        draw_partner_and_link(key, rng);
        have = nodes_.at(key).filled;
    }
    const Node& node = nodes_.at(key);
    return {node.nb[0], node.nb[1]};
}

void LazyCycle::complete(Rng& rng) {
    if (n_[0] + n_[1] > (std::uint64_t{1} << 22))
        throw std::invalid_argument("LazyCycle::complete: cycle too large to materialize");
    for (std::uint8_t side = 0; side < (alternating() ? 2 : 1); ++side)
        for (std::uint64_t i = 0; i < n_[side]; ++i) neighbors(Slot{side, i}, rng);
}

// ---------------------------------------------------------------------------
// LazyEnsembleOracle

namespace {
std::uint64_t pow2u(int e) { return std::uint64_t{1} << e; }
} // namespace

LazyEnsembleOracle::LazyEnsembleOracle(int k, Variant variant, std::uint64_t seed,
                                       AdviceConvention convention)
    : k_(k), variant_(variant), convention_(convention), seed_(seed),
      pairs_(2 * (pow2u(k) - 1)), rng_(make_rng(seed, "lazy-ensemble")) {
    if (k < 2) throw std::invalid_argument("LazyEnsembleOracle: k must be >= 2");
    if (variant == Variant::YesGeneral)
        throw std::invalid_argument("LazyEnsembleOracle: only G1/G2 ensembles are lazy");
    Rng loops_rng = make_rng(seed, "loop-classes");
    loop_assignment_ =
        assign_self_loops_with_convention(pairs_, k, 1, convention, loops_rng);
    for (std::uint32_t p = 0; p < pairs_; ++p) {
        if (loop_assignment_.loops_per_pair[p] == 1) odd_pair_ids_.push_back(p);
        else even_pair_ids_.push_back(p);
    }
}

std::uint64_t LazyEnsembleOracle::vertex_count() const {
    return instance_vertex_count(k_, 1);
}

Label LazyEnsembleOracle::label_of(const Coord& c) {
    auto it = coord_to_label_.find(c);
    if (it != coord_to_label_.end()) return it->second;
    Label l;
    do {
        l = rng_();
    } while (label_to_coord_.count(l));
    coord_to_label_.emplace(c, l);
    label_to_coord_.emplace(l, c);
    return l;
}

const Coord& LazyEnsembleOracle::coord_of(Label l) const {
    auto it = label_to_coord_.find(l);
    if (it == label_to_coord_.end())
        throw std::invalid_argument("unknown public label " + std::to_string(l));
    return it->second;
}

VertexRole LazyEnsembleOracle::role_of_label(Label l) const {
    const Coord& c = coord_of(l);
    if (c.side == 0) return VertexRole::Root;
    return c.side == 1 ? VertexRole::Antenna : VertexRole::Body;
}

std::vector<Label> LazyEnsembleOracle::root_labels() {
    std::vector<Label> out;
    out.reserve(pairs_ * 2);
    for (std::uint32_t p = 0; p < pairs_; ++p)
        for (std::uint8_t t = 0; t < 2; ++t) out.push_back(label_of(Coord{p, t, 0, 0, 0}));
    return out;
}

bool LazyEnsembleOracle::root_has_loop(const Coord& c) const {
    const std::uint8_t loops = loop_assignment_.loops_per_pair[c.pair];
    if (loops == 2) return true;
    if (loops == 0) return false;
    return loop_assignment_.looped_root_of_pair[c.pair] == c.tree;
}

Coord LazyEnsembleOracle::parent_of(const Coord& c) const {
    if (c.side == 0 || c.depth == 0) throw std::logic_error("parent_of: root has no parent");
    if (c.depth == 1) return Coord{c.pair, c.tree, 0, 0, 0};
    return Coord{c.pair, c.tree, c.side, static_cast<std::uint8_t>(c.depth - 1), c.idx / 2};
}

LazyCycle& LazyEnsembleOracle::cycle_of_pair(std::uint32_t pair, std::uint8_t tree) {
    const std::uint64_t key =
        variant_ == Variant::G1 ? pair : (static_cast<std::uint64_t>(pair) * 2 + tree);
    auto it = cycles_.find(key);
    if (it == cycles_.end()) {
        if (variant_ == Variant::G1)
            it = cycles_.emplace(key, LazyCycle(pow2u(k_), pow2u(k_))).first;
        else
            it = cycles_.emplace(key, LazyCycle(pow2u(k_), 0)).first;
    }
    return it->second;
}

Coord LazyEnsembleOracle::draw_unmatched_antenna(bool odd_pairs, Rng& rng) {
    const auto& pool = odd_pairs ? odd_pair_ids_ : even_pair_ids_;
    const std::uint64_t positions = pow2u(k_ + 1) - 2;
    for (int tries = 0; tries < 1 << 20; ++tries) {
        const std::uint32_t pair = pool[uniform_below(rng, pool.size())];
        const std::uint8_t tree = static_cast<std::uint8_t>(uniform_below(rng, 2));
        const std::uint64_t j = uniform_below(rng, positions);
        const int d = std::bit_width(j + 2) - 1;
        const std::uint64_t i = j + 2 - pow2u(d);
        const Coord c{pair, tree, 1, static_cast<std::uint8_t>(d), i};
        if (!advice_match_.count(c)) return c;
    }
    throw std::runtime_error("advice pool exhausted (experiment too long)");
}

Coord LazyEnsembleOracle::draw_unmatched_body(bool weld, Rng& rng) {
    for (int tries = 0; tries < 1 << 20; ++tries) {
        const std::uint32_t pair = static_cast<std::uint32_t>(uniform_below(rng, pairs_));
        const std::uint8_t tree = static_cast<std::uint8_t>(uniform_below(rng, 2));
        Coord c{pair, tree, 2, 0, 0};
        if (weld) {
            c.depth = static_cast<std::uint8_t>(k_);
            c.idx = uniform_below(rng, pow2u(k_));
        } else {
            const std::uint64_t j = uniform_below(rng, pow2u(k_) - 2);
            const int d = std::bit_width(j + 2) - 1;
            c.depth = static_cast<std::uint8_t>(d);
            c.idx = j + 2 - pow2u(d);
        }
        if (!advice_match_.count(c)) return c;
    }
    throw std::runtime_error("advice pool exhausted (experiment too long)");
}

Coord LazyEnsembleOracle::advice_partner(const Coord& c) {
    auto it = advice_match_.find(c);
    if (it != advice_match_.end()) return it->second;
    Coord partner;
    if (c.side == 2) {
        const bool weld = c.depth == static_cast<std::uint8_t>(k_);
        const bool odd = convention_ == AdviceConvention::Sec6 ? weld : !weld;
        partner = draw_unmatched_antenna(odd, rng_);
    } else if (c.side == 1) {
        const bool odd_pair = pair_parity_odd(c.pair);
        const bool weld = convention_ == AdviceConvention::Sec6 ? odd_pair : !odd_pair;
        partner = draw_unmatched_body(weld, rng_);
    } else {
        throw std::logic_error("advice_partner: roots carry no advice edge");
    }
    advice_match_.emplace(c, partner);
    advice_match_.emplace(partner, c);
    return partner;
}

OracleAnswer LazyEnsembleOracle::query(Label label) {
    const Coord c = coord_of(label);
    ++queries_;
    OracleAnswer ans;
    if (c.side == 0) {
        ans.role = VertexRole::Root;
        ans.loop = root_has_loop(c);
        for (std::uint8_t side = 1; side <= 2; ++side)
            for (std::uint64_t i = 0; i < 2; ++i)
                ans.neighbors.emplace_back(label_of(Coord{c.pair, c.tree, side, 1, i}),
                                           EdgeKind::Single);
        if (ans.loop) ans.neighbors.emplace_back(label, EdgeKind::Single);
    } else {
        ans.role = c.side == 1 ? VertexRole::Antenna : VertexRole::Body;
        ans.loop = false;
        ans.neighbors.emplace_back(label_of(parent_of(c)), EdgeKind::Single);
        if (c.depth < k_) {
            for (std::uint64_t b = 0; b < 2; ++b)
                ans.neighbors.emplace_back(
                    label_of(Coord{c.pair, c.tree, c.side,
                                   static_cast<std::uint8_t>(c.depth + 1), 2 * c.idx + b}),
                    EdgeKind::Single);
        } else if (c.side == 2) {
            // weld vertex: two cycle edges
            LazyCycle& cyc = cycle_of_pair(c.pair, c.tree);
            const std::uint8_t slot_side = variant_ == Variant::G1 ? c.tree : 0;
            auto [s1, s2] = cyc.neighbors(LazyCycle::Slot{slot_side, c.idx}, rng_);
            auto slot_coord = [&](LazyCycle::Slot s) {
                const std::uint8_t tree = variant_ == Variant::G1 ? s.side : c.tree;
                return Coord{c.pair, tree, 2, static_cast<std::uint8_t>(k_), s.idx};
            };
            ans.neighbors.emplace_back(label_of(slot_coord(s1)), EdgeKind::Single);
            ans.neighbors.emplace_back(label_of(slot_coord(s2)), EdgeKind::Single);
        }
        ans.neighbors.emplace_back(label_of(advice_partner(c)), EdgeKind::Double);
    }
    Rng order = make_rng(seed_, "lazy-order", CoordHash{}(c));
    std::shuffle(ans.neighbors.begin(), ans.neighbors.end(), order);
    return ans;
}

Label LazyEnsembleOracle::random_vertex(Rng& rng) {
    const std::uint64_t tree_size = 2 * (pow2u(k_ + 1) - 2) + 1;
    const std::uint32_t pair = static_cast<std::uint32_t>(uniform_below(rng, pairs_));
    const std::uint8_t tree = static_cast<std::uint8_t>(uniform_below(rng, 2));
    const std::uint64_t local = uniform_below(rng, tree_size);
    Coord c{pair, tree, 0, 0, 0};
    if (local > 0) {
        const std::uint64_t side_size = pow2u(k_ + 1) - 2;
        const std::uint64_t j = (local - 1) % side_size;
        c.side = local - 1 < side_size ? 1 : 2;
        const int d = std::bit_width(j + 2) - 1;
        c.depth = static_cast<std::uint8_t>(d);
        c.idx = j + 2 - pow2u(d);
    }
    return label_of(c);
}

std::optional<Coord> LazyEnsembleOracle::sample_unknown(VertexRole role, Rng& rng, int max_tries) {
    const std::uint64_t positions = pow2u(k_ + 1) - 2;
    for (int tries = 0; tries < max_tries; ++tries) {
        Coord c;
        c.pair = static_cast<std::uint32_t>(uniform_below(rng, pairs_));
        c.tree = static_cast<std::uint8_t>(uniform_below(rng, 2));
        if (role == VertexRole::Root) {
            c.side = 0;
        } else {
            c.side = role == VertexRole::Antenna ? 1 : 2;
            const std::uint64_t j = uniform_below(rng, positions);
            const int d = std::bit_width(j + 2) - 1;
            c.depth = static_cast<std::uint8_t>(d);
            c.idx = j + 2 - pow2u(d);
        }
        if (!coord_to_label_.count(c)) return c;
    }
    return std::nullopt;
}

BodyComponent LazyEnsembleOracle::peek_body_component(Label root) {
    const Coord rc = coord_of(root);
    if (rc.side != 0) throw std::invalid_argument("peek_body_component: label is not a root");

    BodyComponent comp;
    std::unordered_map<Coord, std::uint32_t, CoordHash> index;
    auto intern = [&](const Coord& c) {
        auto it = index.find(c);
        if (it != index.end()) return it->second;
        const auto idx = static_cast<std::uint32_t>(comp.labels.size());
        index.emplace(c, idx);
        comp.labels.push_back(label_of(c));
        comp.adj.emplace_back();
        if (c.side == 0) comp.roots.push_back(idx);
        return idx;
    };
    auto add_edge = [&](const Coord& a, const Coord& b) {
        const std::uint32_t ia = intern(a), ib = intern(b);
        comp.adj[ia].push_back(ib);
        comp.adj[ib].push_back(ia);
    };

    const std::vector<std::uint8_t> trees =
        variant_ == Variant::G1 ? std::vector<std::uint8_t>{0, 1}
                                : std::vector<std::uint8_t>{rc.tree};
    for (std::uint8_t t : trees) {
        const Coord r{rc.pair, t, 0, 0, 0};
        intern(r);
        for (int d = 1; d <= k_; ++d) {
            for (std::uint64_t i = 0; i < pow2u(d); ++i) {
                const Coord c{rc.pair, t, 2, static_cast<std::uint8_t>(d), i};
                add_edge(c, parent_of(c));
            }
        }
    }
    // weld cycle edges: force-complete the pair's cycles
    if (variant_ == Variant::G1) {
        LazyCycle& cyc = cycle_of_pair(rc.pair, 0);
        cyc.complete(rng_);
        cyc.for_each_edge([&](LazyCycle::Slot a, LazyCycle::Slot b) {
            add_edge(Coord{rc.pair, a.side, 2, static_cast<std::uint8_t>(k_), a.idx},
                     Coord{rc.pair, b.side, 2, static_cast<std::uint8_t>(k_), b.idx});
        });
    } else {
        LazyCycle& cyc = cycle_of_pair(rc.pair, rc.tree);
        cyc.complete(rng_);
        cyc.for_each_edge([&](LazyCycle::Slot a, LazyCycle::Slot b) {
            add_edge(Coord{rc.pair, rc.tree, 2, static_cast<std::uint8_t>(k_), a.idx},
                     Coord{rc.pair, rc.tree, 2, static_cast<std::uint8_t>(k_), b.idx});
        });
    }
    return comp;
}

// ---------------------------------------------------------------------------
// LazyGameTree

LazyGameTree::LazyGameTree(Kind kind, int k, std::uint64_t seed)
    : kind_(kind), k_(k), rng_(make_rng(seed, "game-tree")),
      cycle_(kind == Kind::SelfWelded ? LazyCycle(std::uint64_t{1} << k, 0)
                                      : LazyCycle(std::uint64_t{1} << k, std::uint64_t{1} << k)) {
    if (k < 2) throw std::invalid_argument("LazyGameTree: k must be >= 2");
}

Label LazyGameTree::label_of(const TreeCoord& c) {
    auto it = coord_to_label_.find(c);
    if (it != coord_to_label_.end()) return it->second;
    Label l;
    do {
        l = rng_();
    } while (label_to_coord_.count(l));
    coord_to_label_.emplace(c, l);
    label_to_coord_.emplace(l, c);
    return l;
}

const LazyGameTree::TreeCoord& LazyGameTree::coord_of(Label l) const {
    auto it = label_to_coord_.find(l);
    if (it == label_to_coord_.end())
        throw std::invalid_argument("unknown game label " + std::to_string(l));
    return it->second;
}

OracleAnswer LazyGameTree::query(Label label) {
    const TreeCoord c = coord_of(label);
    ++queries_;
    OracleAnswer ans;
    ans.role = VertexRole::Body;
    ans.loop = false;
    if (c.depth == 0) {
        for (std::uint64_t i = 0; i < 2; ++i)
            ans.neighbors.emplace_back(label_of(TreeCoord{c.tree, 1, i}), EdgeKind::Single);
    } else {
        const TreeCoord parent =
            c.depth == 1 ? TreeCoord{c.tree, 0, 0}
                         : TreeCoord{c.tree, static_cast<std::uint8_t>(c.depth - 1), c.idx / 2};
        ans.neighbors.emplace_back(label_of(parent), EdgeKind::Single);
        if (c.depth < k_) {
            for (std::uint64_t b = 0; b < 2; ++b)
                ans.neighbors.emplace_back(
                    label_of(TreeCoord{c.tree, static_cast<std::uint8_t>(c.depth + 1),
                                       2 * c.idx + b}),
                    EdgeKind::Single);
        } else {
            const std::uint8_t slot_side = kind_ == Kind::Welded ? c.tree : 0;
            auto [s1, s2] = cycle_.neighbors(LazyCycle::Slot{slot_side, c.idx}, rng_);
            auto slot_coord = [&](LazyCycle::Slot s) {
                const std::uint8_t tree = kind_ == Kind::Welded ? s.side : c.tree;
                return TreeCoord{tree, static_cast<std::uint8_t>(k_), s.idx};
            };
            ans.neighbors.emplace_back(label_of(slot_coord(s1)), EdgeKind::Single);
            ans.neighbors.emplace_back(label_of(slot_coord(s2)), EdgeKind::Single);
        }
    }
    std::shuffle(ans.neighbors.begin(), ans.neighbors.end(), rng_);
    return ans;
}

Label LazyGameTree::uniform_vertex(Rng& rng) {
    const std::uint64_t tree_size = (std::uint64_t{2} << k_) - 1;
    const std::uint8_t tree =
        kind_ == Kind::Welded ? static_cast<std::uint8_t>(uniform_below(rng, 2)) : 0;
    const std::uint64_t local = uniform_below(rng, tree_size);
    if (local == 0) return label_of(TreeCoord{tree, 0, 0});
    const std::uint64_t j = local - 1;
    const int d = std::bit_width(j + 2) - 1;
    return label_of(TreeCoord{tree, static_cast<std::uint8_t>(d), j + 2 - (std::uint64_t{1} << d)});
}

} // namespace weldlab
