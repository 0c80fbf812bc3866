#include "weldlab/adversary.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace weldlab {

namespace {

std::uint64_t pow2u(int e) { return std::uint64_t{1} << e; }

// ---------------------------------------------------------------------------
// Real backend: the lazy G1/G2 ensemble behind the Action interface, with A3
// and A4 half-antenna reveals.

class RealBackend final : public ActionBackend {
public:
    RealBackend(int k, Variant variant, std::uint64_t seed)
        : oracle_(k, variant, seed), rng_(make_rng(seed, "real-backend")) {}

    int k() const override { return oracle_.k(); }

    std::vector<std::pair<Label, bool>> roots() override {
        std::vector<std::pair<Label, bool>> out;
        for (Label l : oracle_.root_labels())
            out.emplace_back(l, oracle_.root_has_loop(oracle_.coord_of(l)));
        return out;
    }

    bool in_tapped_pair(Label l, const std::unordered_set<std::uint32_t>& tapped) const override {
        return tapped.count(oracle_.coord_of(l).pair) != 0;
    }

    std::optional<std::uint32_t> pair_of(Label l) const override {
        return oracle_.coord_of(l).pair;
    }

    StepReveal act(const AdversaryAction& action, const KnowledgeGraph& kg, Rng& rng) override {
        StepReveal rv;
        rv.action = action;
        Label target = action.target;
        switch (action.type) {
            case ActionType::QueryUnknownBody:
            case ActionType::QueryUnknownAntenna: {
                const VertexRole role = action.type == ActionType::QueryUnknownBody
                                            ? VertexRole::Body
                                            : VertexRole::Antenna;
                auto coord = oracle_.sample_unknown(role, rng);
                if (!coord) throw ExperimentTooLong("unknown-label pool exhausted");
                target = oracle_.label_of(*coord);
                break;
            }
            default:
                break;
        }
        reveal_query(rv, target, kg);
        // A3/A4: any antenna query exposes its entire half-antenna.
        if (oracle_.coord_of(target).side == 1) reveal_half_antenna(rv, target, kg);
        return rv;
    }

private:
    void note_fresh(StepReveal& rv, const KnowledgeGraph& kg, Label l, KnownVia via, bool loop = false) {
        if (kg.knows(l)) return;
        for (const FreshLabel& f : rv.fresh)
            if (f.label == l) return;
        rv.fresh.push_back(FreshLabel{l, oracle_.role_of_label(l), via, loop});
    }

    void reveal_query(StepReveal& rv, Label target, const KnowledgeGraph& kg) {
        rv.queried = target;
        OracleAnswer ans = oracle_.query(target);
        rv.queried_role = ans.role;
        rv.queried_loop = ans.loop;
        note_fresh(rv, kg, target, KnownVia::Queried, ans.loop);
        for (const auto& [nbr, kind] : ans.neighbors) {
            if (nbr == target) continue; // self-loop shows via the loop flag
            const KnownVia via = kind == EdgeKind::Double
                                     ? KnownVia::AdviceEdge
                                     : (ans.role == VertexRole::Root ? KnownVia::FreeRootChild
                                                                     : KnownVia::SingleEdge);
            note_fresh(rv, kg, nbr, via);
            rv.edges.emplace_back(target, nbr, kind);
        }
    }

    void reveal_half_antenna(StepReveal& rv, Label antenna, const KnowledgeGraph& kg) {
        const Coord c = oracle_.coord_of(antenna);
        const std::uint64_t top = c.depth >= 1 ? (c.idx >> (c.depth - 1)) : c.idx;
        for (int d = 1; d <= oracle_.k(); ++d) {
            const std::uint64_t lo = top << (d - 1), hi = (top + 1) << (d - 1);
            for (std::uint64_t i = lo; i < hi; ++i) {
                const Coord cv{c.pair, c.tree, 1, static_cast<std::uint8_t>(d), i};
                const Label lv = oracle_.label_of(cv);
                note_fresh(rv, kg, lv, KnownVia::SingleEdge);
                const Coord parent = d == 1 ? Coord{c.pair, c.tree, 0, 0, 0}
                                            : Coord{c.pair, c.tree, 1,
                                                    static_cast<std::uint8_t>(d - 1), i / 2};
                rv.edges.emplace_back(oracle_.label_of(parent), lv, EdgeKind::Single);
            }
        }
    }

    LazyEnsembleOracle oracle_;
    Rng rng_;
};

// ---------------------------------------------------------------------------
// Simulator G_s: answers every action from label pools and its own partial
// graph memory; never consults an instance.

class SimulatorBackend final : public ActionBackend {
public:
    SimulatorBackend(int k, std::uint64_t seed)
        : k_(k), pairs_(2 * (pow2u(k) - 1)), rng_(make_rng(seed, "gs-backend")) {
        antenna_pool_ = pairs_ * 2 * (pow2u(k + 1) - 2);
        body_pool_ = pairs_ * 2 * (pow2u(k + 1) - 2);
        Rng loops_rng = make_rng(seed, "loop-classes");
        LoopAssignment loops = assign_self_loops(pairs_, k, 1, loops_rng);
        for (std::uint64_t p = 0; p < pairs_; ++p) {
            for (int t = 0; t < 2; ++t) {
                const Label l = fresh_label();
                bool loop = false;
                if (loops.loops_per_pair[p] == 2) loop = true;
                else if (loops.loops_per_pair[p] == 1 && loops.looped_root_of_pair[p] == t)
                    loop = true;
                nodes_[l] = SimNode{VertexRole::Root, loop, {}, true, 0};
                roots_.emplace_back(l, loop);
                antenna_slot_entries_.push_back(l);
                antenna_slot_entries_.push_back(l);
                antenna_slots_free_[l] = 2;
            }
        }
    }

    int k() const override { return k_; }
    std::vector<std::pair<Label, bool>> roots() override { return roots_; }
    bool in_tapped_pair(Label, const std::unordered_set<std::uint32_t>&) const override {
        return false; // the simulator has no hidden pair structure
    }
    std::optional<std::uint32_t> pair_of(Label) const override { return std::nullopt; }

    StepReveal act(const AdversaryAction& action, const KnowledgeGraph& kg, Rng& rng) override {
        StepReveal rv;
        rv.action = action;
        switch (action.type) {
            case ActionType::QueryUnknownBody: {
                const Label q = draw_body();
                rv.queried = q;
                rv.queried_role = VertexRole::Body;
                nodes_[q] = SimNode{VertexRole::Body, false, {}, true, 0};
                rv.fresh.push_back({q, VertexRole::Body, KnownVia::Queried, false});
                attach_fresh_bodies(rv, q, 3);
                attach_fresh_antenna_partner(rv, q);
                break;
            }
            case ActionType::QueryUnknownAntenna: {
                const Label q = draw_antenna();
                rv.queried = q;
                rv.queried_role = VertexRole::Antenna;
                nodes_[q] = SimNode{VertexRole::Antenna, false, {}, true, 1};
                rv.fresh.push_back({q, VertexRole::Antenna, KnownVia::Queried, false});
                reveal_half_antenna(rv, q, rng, /*position_known=*/false);
                attach_fresh_body_partner(rv, q);
                break;
            }
            case ActionType::QueryKnownBody: {
                SimNode& node = nodes_.at(action.target);
                rv.queried = action.target;
                rv.queried_role = VertexRole::Body;
                node.queried = true;
                re_report(rv, action.target);
                const KnownVia via = kg.info(action.target).via;
                int known_singles = 0;
                for (const auto& [nbr, kind] : node.edges)
                    if (kind == EdgeKind::Single) ++known_singles;
                if (via == KnownVia::AdviceEdge) {
                    attach_fresh_bodies(rv, action.target, 3);
                } else {
                    attach_fresh_bodies(rv, action.target, 3 - known_singles);
                    attach_fresh_antenna_partner(rv, action.target);
                }
                break;
            }
            case ActionType::QueryKnownAntenna: {
                SimNode& node = nodes_.at(action.target);
                rv.queried = action.target;
                rv.queried_role = VertexRole::Antenna;
                node.queried = true;
                re_report(rv, action.target);
                if (!node.half_expanded)
                    reveal_half_antenna(rv, action.target, rng,
                                        /*position_known=*/node.depth == 1);
                if (!has_double(action.target)) attach_fresh_body_partner(rv, action.target);
                break;
            }
            case ActionType::QueryRootFree: {
                SimNode& node = nodes_.at(action.target);
                rv.queried = action.target;
                rv.queried_role = VertexRole::Root;
                rv.queried_loop = node.loop;
                node.queried = true;
                re_report(rv, action.target);
                if (!node.half_expanded || node.edges.size() < 4) expand_root(rv, action.target);
                break;
            }
        }
        return rv;
    }

private:
    struct SimNode {
        VertexRole role;
        bool loop = false;
        std::vector<std::pair<Label, EdgeKind>> edges;
        bool queried = false;
        int depth = 0;           // antenna depth within its half (1 = top)
        bool half_expanded = false;
    };

    Label fresh_label() {
        Label l;
        do {
            l = rng_();
        } while (nodes_.count(l));
        return l;
    }

    Label draw_body() {
        if (body_pool_ == 0) throw ExperimentTooLong("body label pool exhausted");
        --body_pool_;
        return fresh_label();
    }
    Label draw_antenna() {
        if (antenna_pool_ == 0) throw ExperimentTooLong("antenna label pool exhausted");
        --antenna_pool_;
        return fresh_label();
    }

    void add_edge_mem(Label a, Label b, EdgeKind kind) {
        nodes_.at(a).edges.emplace_back(b, kind);
        nodes_.at(b).edges.emplace_back(a, kind);
    }

    bool has_double(Label l) const {
        for (const auto& [nbr, kind] : nodes_.at(l).edges)
            if (kind == EdgeKind::Double) return true;
        return false;
    }

    void re_report(StepReveal& rv, Label l) {
        for (const auto& [nbr, kind] : nodes_.at(l).edges)
            rv.edges.emplace_back(l, nbr, kind);
    }

    void attach_fresh_bodies(StepReveal& rv, Label to, int count) {
        for (int i = 0; i < count; ++i) {
            const Label b = draw_body();
            nodes_[b] = SimNode{VertexRole::Body, false, {}, false, 0};
            add_edge_mem(to, b, EdgeKind::Single);
            rv.fresh.push_back({b, VertexRole::Body, KnownVia::SingleEdge, false});
            rv.edges.emplace_back(to, b, EdgeKind::Single);
        }
    }

    void attach_fresh_antenna_partner(StepReveal& rv, Label body) {
        const Label a = draw_antenna();
        nodes_[a] = SimNode{VertexRole::Antenna, false, {}, false, 0};
        add_edge_mem(body, a, EdgeKind::Double);
        rv.fresh.push_back({a, VertexRole::Antenna, KnownVia::AdviceEdge, false});
        rv.edges.emplace_back(body, a, EdgeKind::Double);
    }

    void attach_fresh_body_partner(StepReveal& rv, Label antenna) {
        const Label b = draw_body();
        nodes_[b] = SimNode{VertexRole::Body, false, {}, false, 0};
        add_edge_mem(antenna, b, EdgeKind::Double);
        rv.fresh.push_back({b, VertexRole::Body, KnownVia::AdviceEdge, false});
        rv.edges.emplace_back(antenna, b, EdgeKind::Double);
    }

    // Builds the full half-antenna around `queried` (2^k - 1 labels including
    // it), attaches the top to a uniformly chosen free root slot.
    void reveal_half_antenna(StepReveal& rv, Label queried, Rng& rng, bool position_known) {
        const std::uint64_t size = pow2u(k_) - 1;
        std::uint64_t pos = 0; // heap position within the half (0 = top)
        if (!position_known) pos = uniform_below(rng, size);
        // labels for every slot; reuse the queried label at its position
        std::vector<Label> slot(size);
        for (std::uint64_t i = 0; i < size; ++i) {
            if (i == pos) {
                slot[i] = queried;
                continue;
            }
            if (antenna_pool_ == 0) throw ExperimentTooLong("antenna label pool exhausted");
            --antenna_pool_;
            const Label l = fresh_label();
            nodes_[l] = SimNode{VertexRole::Antenna, false, {}, false, 0};
            slot[i] = l;
        }
        for (std::uint64_t i = 0; i < size; ++i) {
            const int depth = std::bit_width(i + 1); // 1 at the top
            nodes_.at(slot[i]).depth = depth;
            nodes_.at(slot[i]).half_expanded = true;
            if (slot[i] != queried)
                rv.fresh.push_back({slot[i], VertexRole::Antenna, KnownVia::SingleEdge, false});
            if (i > 0) {
                add_edge_mem(slot[(i - 1) / 2], slot[i], EdgeKind::Single);
                rv.edges.emplace_back(slot[(i - 1) / 2], slot[i], EdgeKind::Single);
            }
        }
        // attach the top to a uniformly random free root antenna slot
        const Label root = draw_free_root_slot(rng);
        add_edge_mem(root, slot[0], EdgeKind::Single);
        rv.edges.emplace_back(root, slot[0], EdgeKind::Single);
    }

    Label draw_free_root_slot(Rng& rng) {
        while (!antenna_slot_entries_.empty()) {
            const std::size_t i = uniform_below(rng, antenna_slot_entries_.size());
            const Label root = antenna_slot_entries_[i];
            antenna_slot_entries_[i] = antenna_slot_entries_.back();
            antenna_slot_entries_.pop_back();
            if (antenna_slots_free_[root] > 0) {
                --antenna_slots_free_[root];
                return root;
            }
        }
        throw ExperimentTooLong("root antenna slots exhausted");
    }

    void expand_root(StepReveal& rv, Label root) {
        SimNode& node = nodes_.at(root);
        // antenna children = unexpanded half-antenna tops; consume the root's
        // remaining free antenna slots
        int antenna_children = 0, body_children = 0;
        for (const auto& [nbr, kind] : node.edges) {
            if (kind != EdgeKind::Single) continue;
            if (nodes_.at(nbr).role == VertexRole::Antenna) ++antenna_children;
            else ++body_children;
        }
        for (; antenna_children < 2; ++antenna_children) {
            if (antenna_pool_ == 0) throw ExperimentTooLong("antenna label pool exhausted");
            --antenna_pool_;
            if (antenna_slots_free_[root] > 0) --antenna_slots_free_[root];
            const Label a = fresh_label();
            nodes_[a] = SimNode{VertexRole::Antenna, false, {}, false, 1};
            add_edge_mem(root, a, EdgeKind::Single);
            rv.fresh.push_back({a, VertexRole::Antenna, KnownVia::FreeRootChild, false});
            rv.edges.emplace_back(root, a, EdgeKind::Single);
        }
        for (; body_children < 2; ++body_children) {
            const Label b = draw_body();
            nodes_[b] = SimNode{VertexRole::Body, false, {}, false, 0};
            add_edge_mem(root, b, EdgeKind::Single);
            rv.fresh.push_back({b, VertexRole::Body, KnownVia::FreeRootChild, false});
            rv.edges.emplace_back(root, b, EdgeKind::Single);
        }
        node.half_expanded = true;
    }

    int k_;
    std::uint64_t pairs_;
    Rng rng_;
    std::uint64_t antenna_pool_ = 0, body_pool_ = 0;
    std::vector<std::pair<Label, bool>> roots_;
    std::unordered_map<Label, SimNode> nodes_;
    std::vector<Label> antenna_slot_entries_;
    std::unordered_map<Label, int> antenna_slots_free_;
};

} // namespace

std::unique_ptr<ActionBackend> make_real_backend(int k, Variant variant, std::uint64_t seed) {
    return std::make_unique<RealBackend>(k, variant, seed);
}

std::unique_ptr<ActionBackend> make_simulator_backend(int k, std::uint64_t seed) {
    return std::make_unique<SimulatorBackend>(k, seed);
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

class RandomWalkStrategy final : public Strategy {
public:
    const char* name() const override { return "random-walk"; }

    void begin(const std::vector<std::pair<Label, bool>>&, int, Rng&) override {
        cur_.reset();
        prev_.reset();
        adj_.clear();
    }

    std::optional<AdversaryAction> next(const KnowledgeGraph& kg, Rng& rng) override {
        if (cur_) {
            std::vector<Label> options;
            for (Label nbr : adj_[*cur_]) {
                if (kg.queried(nbr)) continue;
                if (prev_ && nbr == *prev_) continue;
                if (kg.info(nbr).role == VertexRole::Root) continue;
                options.push_back(nbr);
            }
            if (options.empty()) {
                for (Label nbr : adj_[*cur_])
                    if (!kg.queried(nbr) && kg.info(nbr).role != VertexRole::Root)
                        options.push_back(nbr);
            }
            if (!options.empty()) {
                const Label nxt = options[uniform_below(rng, options.size())];
                prev_ = cur_;
                cur_ = nxt;
                return AdversaryAction{kg.info(nxt).role == VertexRole::Antenna
                                           ? ActionType::QueryKnownAntenna
                                           : ActionType::QueryKnownBody,
                                       nxt};
            }
        }
        // land somewhere fresh
        prev_.reset();
        pending_start_ = true;
        return AdversaryAction{ActionType::QueryUnknownBody, 0};
    }

    void observe(const StepReveal& rv) override {
        if (pending_start_) {
            cur_ = rv.queried;
            pending_start_ = false;
        }
        for (const auto& [a, b, kind] : rv.edges) {
            if (kind != EdgeKind::Single) continue;
            adj_[a].push_back(b);
            adj_[b].push_back(a);
        }
    }

private:
    std::optional<Label> cur_, prev_;
    bool pending_start_ = false;
    std::unordered_map<Label, std::vector<Label>> adj_;
};

class BfsStrategy final : public Strategy {
public:
    const char* name() const override { return "bfs"; }

    void begin(const std::vector<std::pair<Label, bool>>&, int, Rng&) override {
        frontier_.clear();
        enqueued_.clear();
    }

    std::optional<AdversaryAction> next(const KnowledgeGraph& kg, Rng&) override {
        while (!frontier_.empty()) {
            const Label l = frontier_.front();
            if (kg.queried(l)) {
                frontier_.pop_front();
                continue;
            }
            frontier_.pop_front();
            const VertexRole role = kg.info(l).role;
            if (role == VertexRole::Root) return AdversaryAction{ActionType::QueryRootFree, l};
            return AdversaryAction{role == VertexRole::Antenna ? ActionType::QueryKnownAntenna
                                                               : ActionType::QueryKnownBody,
                                   l};
        }
        return AdversaryAction{ActionType::QueryUnknownBody, 0};
    }

    void observe(const StepReveal& rv) override {
        for (const FreshLabel& f : rv.fresh)
            if (enqueued_.insert(f.label).second) frontier_.push_back(f.label);
    }

private:
    std::deque<Label> frontier_;
    std::unordered_set<Label> enqueued_;
};

// Reads root loop flags first (free), then explores down from root body
// children looking for parity evidence; the guess still keys on odd cycles
// (loop marginals are identical across the two ensembles).
class ParityProbeStrategy final : public Strategy {
public:
    const char* name() const override { return "parity-probe"; }

    void begin(const std::vector<std::pair<Label, bool>>& roots, int, Rng& rng) override {
        walk_.begin(roots, 0, rng);
        probe_roots_.clear();
        const std::size_t probes = std::min<std::size_t>(roots.size(), 4);
        for (std::size_t i = 0; i < probes; ++i)
            probe_roots_.push_back(roots[i].first);
        probed_ = 0;
    }

    std::optional<AdversaryAction> next(const KnowledgeGraph& kg, Rng& rng) override {
        if (probed_ < probe_roots_.size()) {
            const Label r = probe_roots_[probed_++];
            if (!kg.queried(r)) return AdversaryAction{ActionType::QueryRootFree, r};
        }
        return walk_.next(kg, rng);
    }

    void observe(const StepReveal& rv) override { walk_.observe(rv); }

private:
    RandomWalkStrategy walk_;
    std::vector<Label> probe_roots_;
    std::size_t probed_ = 0;
};

} // namespace

std::unique_ptr<Strategy> make_strategy(const std::string& name) {
    if (name == "random-walk") return std::make_unique<RandomWalkStrategy>();
    if (name == "bfs") return std::make_unique<BfsStrategy>();
    if (name == "parity-probe") return std::make_unique<ParityProbeStrategy>();
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::vector<std::string> reference_strategy_names() {
    return {"random-walk", "bfs", "parity-probe"};
}

// ---------------------------------------------------------------------------
// Harness

Transcript run_against(ActionBackend& backend, Strategy& strategy, std::uint64_t t,
                       std::uint64_t seed) {
    Rng rng = make_rng(seed, "adversary-drive");
    KnowledgeGraph kg;
    Transcript tr;
    std::unordered_set<std::uint32_t> tapped;

    const auto roots = backend.roots();
    for (const auto& [l, loop] : roots) kg.add_vertex(l, VertexRole::Root, KnownVia::InitialRoot, loop);
    strategy.begin(roots, backend.k(), rng);

    const std::uint64_t step_cap = t + 2 * roots.size() + 16;
    std::uint64_t billed = 0;
    for (std::uint64_t step = 0; step < step_cap && billed < t; ++step) {
        auto action = strategy.next(kg, rng);
        if (!action) break;
        // contract: known-label actions must target the knowledge graph
        switch (action->type) {
            case ActionType::QueryKnownBody:
            case ActionType::QueryKnownAntenna:
            case ActionType::QueryRootFree:
                if (!kg.knows(action->target))
                    throw std::logic_error("strategy queried a label outside its knowledge graph");
                if (kg.queried(action->target))
                    throw std::logic_error("strategy re-queried a label");
                break;
            default:
                break;
        }

        StepReveal rv;
        try {
            rv = backend.act(*action, kg, rng);
        } catch (const ExperimentTooLong&) {
            tr.pool_exhausted = true;
            break;
        }
        const bool paid = action->type != ActionType::QueryRootFree;
        if (paid) ++billed;

        // A1/A2 are checked against the tapped set before this step.
        const bool unknown_action = action->type == ActionType::QueryUnknownBody ||
                                    action->type == ActionType::QueryUnknownAntenna;
        if (unknown_action) {
            for (const FreshLabel& f : rv.fresh)
                if (backend.in_tapped_pair(f.label, tapped)) tr.a1 = true;
        } else if (paid && kg.info(action->target).via != KnownVia::AdviceEdge) {
            // A2 concerns the advice edge this query newly reveals; a vertex
            // known through its advice edge points backward to tapped ground
            // by construction, which is no event.
            for (const auto& [a, b, kind] : rv.edges) {
                if (kind != EdgeKind::Double) continue;
                const Label partner = a == rv.queried ? b : a;
                if ((a == rv.queried || b == rv.queried) &&
                    backend.in_tapped_pair(partner, tapped))
                    tr.a2 = true;
            }
        }

        // classification for the reveal histogram
        int subtype = 0;
        switch (action->type) {
            case ActionType::QueryUnknownBody: subtype = 1; break;
            case ActionType::QueryUnknownAntenna: subtype = 2; break;
            case ActionType::QueryKnownBody:
                subtype = kg.info(action->target).via == KnownVia::AdviceEdge ? 31 : 32;
                break;
            case ActionType::QueryKnownAntenna:
                subtype = kg.info(action->target).via == KnownVia::AdviceEdge ? 41 : 42;
                break;
            case ActionType::QueryRootFree: subtype = 5; break;
        }
        int fresh_antenna = 0, fresh_body = 0;
        for (const FreshLabel& f : rv.fresh) {
            if (f.role == VertexRole::Antenna) ++fresh_antenna;
            else if (f.role == VertexRole::Body) ++fresh_body;
        }
        ++tr.histogram[RevealClass{subtype, fresh_antenna, fresh_body}];

        // integrate into the knowledge graph
        for (const FreshLabel& f : rv.fresh) kg.add_vertex(f.label, f.role, f.via, f.loop);
        kg.mark_queried(rv.queried);
        for (const auto& [a, b, kind] : rv.edges) {
            const auto outcome = kg.add_edge(a, b, kind);
            if (outcome.is_new && kind == EdgeKind::Single && paid) {
                const VertexRole ra = kg.info(a).role, rb = kg.info(b).role;
                if ((ra == VertexRole::Root && rb == VertexRole::Body) ||
                    (rb == VertexRole::Root && ra == VertexRole::Body))
                    tr.found_root = true;
            }
        }
        tr.found_cycle = tr.found_cycle || kg.cycle_seen();
        tr.found_odd_cycle = tr.found_odd_cycle || kg.odd_cycle_seen();

        // taps: paid reveals mark every fresh non-root vertex's pair, plus
        // the queried vertex itself
        if (paid) {
            auto tap = [&](Label l) {
                if (kg.info(l).role == VertexRole::Root) return;
                if (auto p = backend.pair_of(l)) tapped.insert(*p);
            };
            tap(rv.queried);
            for (const FreshLabel& f : rv.fresh) tap(f.label);
        }

        strategy.observe(rv);
    }

    tr.queries_used = billed;
    tr.guess_g1 = strategy.guess_g1(kg);
    return tr;
}

// ---------------------------------------------------------------------------
// Games A-D on bare (self-)welded trees

GameResult run_game(const GameSpec& spec, GameStrategyKind strategy, std::uint64_t seed) {
    if (spec.k < 2) throw std::invalid_argument("run_game: k must be >= 2");
    if (spec.t > pow2u(spec.k - 1))
        throw std::invalid_argument("run_game: t must satisfy t <= 2^{k-1}");

    const bool self_welded = spec.game == GameId::A || spec.game == GameId::B;
    const bool random_start = spec.game == GameId::B || spec.game == GameId::D;

    GameResult res;
    res.trials = spec.trials;
    for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
        LazyGameTree tree(self_welded ? LazyGameTree::Kind::SelfWelded
                                      : LazyGameTree::Kind::Welded,
                          spec.k, derive_seed(seed, "game-instance", trial));
        Rng rng = make_rng(seed, "game-drive", trial);
        KnowledgeGraph kg;
        bool win = false;

        const Label start = random_start ? tree.uniform_vertex(rng) : tree.root_label(0);
        kg.add_vertex(start, VertexRole::Body, KnownVia::Start);
        if (random_start && tree.is_root(tree.coord_of(start))) win = true;

        // strategy state
        std::deque<Label> frontier{start};
        std::unordered_set<Label> enqueued{start};
        std::optional<Label> cur = start, prev;
        std::unordered_map<Label, std::vector<Label>> adj;

        for (std::uint64_t q = 0; q < spec.t && !win; ++q) {
            // pick the next known unqueried label
            std::optional<Label> target;
            if (strategy == GameStrategyKind::Bfs) {
                while (!frontier.empty() && kg.queried(frontier.front())) frontier.pop_front();
                if (!frontier.empty()) {
                    target = frontier.front();
                    frontier.pop_front();
                }
            } else {
                if (cur) {
                    std::vector<Label> options;
                    for (Label nbr : adj[*cur]) {
                        if (kg.queried(nbr)) continue;
                        if (prev && nbr == *prev) continue;
                        options.push_back(nbr);
                    }
                    if (options.empty())
                        for (Label nbr : adj[*cur])
                            if (!kg.queried(nbr)) options.push_back(nbr);
                    if (!options.empty()) {
                        target = options[uniform_below(rng, options.size())];
                        prev = cur;
                        cur = target;
                    } else if (!kg.queried(*cur)) {
                        target = cur;
                    }
                }
            }
            if (!target) break; // nothing left to query

            OracleAnswer ans = tree.query(*target);
            kg.mark_queried(*target);
            for (const auto& [nbr, kind] : ans.neighbors) {
                if (!kg.knows(nbr)) kg.add_vertex(nbr, VertexRole::Body, KnownVia::SingleEdge);
                kg.add_edge(*target, nbr, kind);
                adj[*target].push_back(nbr);
                adj[nbr].push_back(*target);
                if (enqueued.insert(nbr).second) frontier.push_back(nbr);
                const auto& c = tree.coord_of(nbr);
                if (tree.is_root(c)) {
                    switch (spec.game) {
                        case GameId::A: break; // cycle only
                        case GameId::B: win = true; break;
                        case GameId::C:
                            if (c.tree == 1) win = true; // the other root
                            break;
                        case GameId::D: win = true; break;
                    }
                }
            }
            if (kg.cycle_seen()) win = true;
        }
        if (win) ++res.wins;
    }
    res.win_probability = static_cast<double>(res.wins) / static_cast<double>(res.trials);
    res.wilson = wilson_interval(res.wins, res.trials);
    res.stderr_estimate =
        std::sqrt(res.win_probability * (1.0 - res.win_probability) /
                  static_cast<double>(res.trials));
    return res;
}

// ---------------------------------------------------------------------------

DistinguishResult distinguishing_experiment(int k, std::uint64_t t, const std::string& strategy,
                                            std::uint64_t trials, std::uint64_t seed) {
    DistinguishResult res;
    res.trials = trials;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        for (int world = 0; world < 3; ++world) {
            std::unique_ptr<ActionBackend> backend;
            const char* tag = world == 0 ? "g1" : (world == 1 ? "g2" : "sim");
            if (world == 0) backend = make_real_backend(k, Variant::G1, derive_seed(seed, "inst-g1", trial));
            else if (world == 1) backend = make_real_backend(k, Variant::G2, derive_seed(seed, "inst-g2", trial));
            else backend = make_simulator_backend(k, derive_seed(seed, "inst-sim", trial));

            auto strat = make_strategy(strategy);
            Transcript tr = run_against(*backend, *strat, t, derive_seed(seed, tag, trial));
            const bool events =
                tr.a1 || tr.a2 || tr.found_cycle || tr.found_root || tr.pool_exhausted;
            if (world == 0) {
                if (tr.guess_g1) ++res.g1_guesses_on_g1;
                if (events) ++res.event_trials_g1;
                else for (const auto& [key, count] : tr.histogram) res.hist_g1[key] += count;
            } else if (world == 1) {
                if (tr.guess_g1) ++res.g1_guesses_on_g2;
                if (events) ++res.event_trials_g2;
                else for (const auto& [key, count] : tr.histogram) res.hist_g2[key] += count;
            } else if (!events) {
                for (const auto& [key, count] : tr.histogram) res.hist_sim[key] += count;
            }
        }
    }
    const double p1 = static_cast<double>(res.g1_guesses_on_g1) / static_cast<double>(trials);
    const double p2 = static_cast<double>(res.g1_guesses_on_g2) / static_cast<double>(trials);
    res.advantage = std::fabs(p1 - p2);
    res.wilson_g1 = wilson_interval(res.g1_guesses_on_g1, trials);
    res.wilson_g2 = wilson_interval(res.g1_guesses_on_g2, trials);
    return res;
}

FidelityResult simulator_fidelity(int k, Variant variant, std::uint64_t t,
                                  const std::string& strategy, std::uint64_t trials,
                                  std::uint64_t seed) {
    FidelityResult res;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        auto real = make_real_backend(k, variant, derive_seed(seed, "fid-real", trial));
        auto strat1 = make_strategy(strategy);
        Transcript tr = run_against(*real, *strat1, t, derive_seed(seed, "fid-real-drive", trial));
        if (!(tr.a1 || tr.a2 || tr.found_cycle || tr.found_root || tr.pool_exhausted)) {
            ++res.kept_real;
            for (const auto& [key, count] : tr.histogram) res.hist_real[key] += count;
        }
        auto sim = make_simulator_backend(k, derive_seed(seed, "fid-sim", trial));
        auto strat2 = make_strategy(strategy);
        Transcript ts = run_against(*sim, *strat2, t, derive_seed(seed, "fid-sim-drive", trial));
        if (!(ts.found_cycle || ts.pool_exhausted)) {
            ++res.kept_sim;
            for (const auto& [key, count] : ts.histogram) res.hist_sim[key] += count;
        }
    }
    res.chi2 = chi2_two_sample(res.hist_real, res.hist_sim);
    return res;
}

} // namespace weldlab
