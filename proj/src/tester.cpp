#include "weldlab/tester.hpp"

#include <algorithm>
#include <cmath>

namespace weldlab {

const char* reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::None: return "none";
        case RejectReason::BannedDegree: return "banned_degree";
        case RejectReason::SingleDegreeOverflow: return "single_degree_overflow";
        case RejectReason::MultipleRoots: return "multiple_roots";
        case RejectReason::LeafNotFound: return "leaf_not_found";
        case RejectReason::LengthMismatch: return "length_mismatch";
        case RejectReason::RootSkip: return "root_skip";
        case RejectReason::RootNotFound: return "root_not_found";
        case RejectReason::PathTooLong: return "path_too_long";
        case RejectReason::MarkedNonLeaf: return "marked_non_leaf";
        case RejectReason::MarkedOnPath: return "marked_on_path";
        case RejectReason::MarkedPathShort: return "marked_path_short";
        case RejectReason::PathDisagreement: return "path_disagreement";
        case RejectReason::EarlyTermination: return "early_termination";
        case RejectReason::MarkedHit: return "marked_hit";
        case RejectReason::WeldNeighborCount: return "weld_neighbor_count";
        case RejectReason::WeldPairMismatch: return "weld_pair_mismatch";
        case RejectReason::BadEndpointCount: return "bad_endpoint_count";
        case RejectReason::EndpointNotMarked: return "endpoint_not_marked";
        case RejectReason::NonDegree3Interior: return "non_degree3_interior";
        case RejectReason::IncompleteTree: return "incomplete_tree";
        case RejectReason::AdviceStructure: return "advice_structure";
        case RejectReason::BranchTypeMismatch: return "branch_type_mismatch";
        case RejectReason::AdviceParityMismatch: return "advice_parity_mismatch";
        case RejectReason::VertexCountNotMultiple: return "vertex_count_not_multiple";
    }
    return "?";
}

TestContext::TestContext(AdjacencyOracle& oracle, AdviceSource advice, TesterParams params)
    : oracle_(oracle), advice_source_(std::move(advice)), params_(params),
      rng_(make_rng(params.seed, "tester")) {
    if (params_.k < 1) throw std::invalid_argument("TestContext: k must be >= 1");
    if (params_.eps <= 0.0 || params_.eps >= 1.0)
        throw std::invalid_argument("TestContext: eps must lie in (0,1)");
}

const TestContext::VertexInfo& TestContext::info(Label v) {
    auto it = vertex_cache_.find(v);
    if (it == vertex_cache_.end()) {
        OracleAnswer ans = oracle_.query(v);
        VertexInfo vi;
        vi.loop = ans.loop;
        vi.role = ans.role;
        for (const auto& [nbr, kind] : ans.neighbors)
            if (kind == EdgeKind::Single && nbr != v) vi.singles.push_back(nbr);
        vi.raw = std::move(ans.neighbors);
        it = vertex_cache_.emplace(v, std::move(vi)).first;
    }
    // More than 4 single-edge neighbors (self-loops excluded) rejects the
    // graph outright whenever such a vertex is encountered.
    if (it->second.singles.size() > 4) throw RejectSignal{RejectReason::SingleDegreeOverflow};
    return it->second;
}

int TestContext::advice_bit(Label v) {
    auto it = advice_cache_.find(v);
    if (it != advice_cache_.end()) return it->second;
    ++advice_queries_;
    const int bit = advice_source_(v) ? 1 : 0;
    advice_cache_.emplace(v, bit);
    return bit;
}

void TestContext::filtered_adj(Label v, bool marked_filter, std::vector<Label>& out) {
    const VertexInfo& vi = info(v);
    out.clear();
    if (!marked_filter) {
        out = vi.singles;
        return;
    }
    const bool vm = marked(v);
    for (Label u : vi.singles) {
        if (vm && marked(u)) continue;
        out.push_back(u);
    }
}

int TestContext::filtered_deg(Label v, bool marked_filter) {
    const VertexInfo& vi = info(v);
    if (!marked_filter) return static_cast<int>(vi.singles.size());
    if (!marked(v)) return static_cast<int>(vi.singles.size());
    int d = 0;
    for (Label u : vi.singles)
        if (!marked(u)) ++d;
    return d;
}

namespace {
// Uniform choice among `opts` minus one occurrence of `prev`.
template <class RngT>
std::optional<std::uint64_t> step_choice(const std::vector<std::uint64_t>& opts,
                                         std::uint64_t prev, RngT& rng) {
    std::size_t skip = opts.size();
    for (std::size_t i = 0; i < opts.size(); ++i)
        if (opts[i] == prev) { skip = i; break; }
    const std::size_t m = skip < opts.size() ? opts.size() - 1 : opts.size();
    if (m == 0) return std::nullopt;
    std::size_t r = static_cast<std::size_t>(uniform_below(rng, m));
    if (skip < opts.size() && r >= skip) ++r;
    return opts[r];
}
} // namespace

std::optional<Label> TestContext::find_parent(Label v) {
    const int k = params_.k;
    std::vector<Label> adj;
    filtered_adj(v, true, adj);
    const int dv = static_cast<int>(adj.size());
    if (dv == 4) return std::nullopt; // only the root has degree 4
    if (dv != 1 && dv != 3) throw RejectSignal{RejectReason::BannedDegree};

    std::optional<Label> root_candidate;
    struct Direction {
        Label first;
        int len;
        std::vector<Label> path;
    };
    std::vector<Direction> dirs;
    dirs.reserve(adj.size());
    std::vector<Label> opts;

    for (Label w : adj) {
        Direction dir;
        dir.first = w;
        dir.path.reserve(static_cast<std::size_t>(2 * k) + 1);
        dir.path.push_back(v);
        dir.path.push_back(w);
        dir.len = 2 * k;
        for (int t = 1; t <= 2 * k - 1; ++t) {
            const Label cur = dir.path[static_cast<std::size_t>(t)];
            const int dcur = filtered_deg(cur, true);
            if (dcur == 1) {
                dir.len = t; // a leaf ends the walk
                break;
            }
            if (dcur == 4) {
                if (!root_candidate) root_candidate = cur;
                else throw RejectSignal{RejectReason::MultipleRoots};
            }
            filtered_adj(cur, true, opts);
            auto next = step_choice(opts, dir.path[static_cast<std::size_t>(t) - 1], rng_);
            if (!next) throw RejectSignal{RejectReason::LeafNotFound};
            dir.path.push_back(*next);
        }
        if (dir.len == 2 * k &&
            filtered_deg(dir.path[static_cast<std::size_t>(2 * k)], true) > 1)
            throw RejectSignal{RejectReason::LeafNotFound};
        dirs.push_back(std::move(dir));
    }

    // Longest walk goes through the parent; ties break to the smallest label.
    std::size_t best = 0;
    for (std::size_t i = 1; i < dirs.size(); ++i) {
        if (dirs[i].len > dirs[best].len ||
            (dirs[i].len == dirs[best].len && dirs[i].first < dirs[best].first))
            best = i;
    }
    int other_len = -1;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        if (i == best) continue;
        if (other_len == -1) other_len = dirs[i].len;
        else if (dirs[i].len != other_len) throw RejectSignal{RejectReason::LengthMismatch};
    }
    if (root_candidate) {
        const auto& p = dirs[best].path;
        bool on_path = false;
        for (std::size_t i = 1; i <= static_cast<std::size_t>(dirs[best].len) && i < p.size(); ++i)
            if (p[i] == *root_candidate) { on_path = true; break; }
        if (!on_path) throw RejectSignal{RejectReason::RootSkip};
    }
    return dirs[best].first;
}

std::vector<Label> TestContext::find_root_path(Label v) {
    std::vector<Label> path{v};
    for (int t = 1; t <= params_.k; ++t) {
        auto parent = find_parent(path.back());
        if (!parent) return path; // back() is the root
        path.push_back(*parent);
    }
    if (filtered_deg(path.back(), true) != 4) throw RejectSignal{RejectReason::RootNotFound};
    return path;
}

std::vector<Label> TestContext::root_walk(Label from, Label first, int steps, RejectReason early) {
    std::vector<Label> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    path.push_back(from);
    path.push_back(first);
    std::vector<Label> opts;
    for (int t = 1; t < steps; ++t) {
        const Label cur = path[static_cast<std::size_t>(t)];
        filtered_adj(cur, false, opts);
        auto next = step_choice(opts, path[static_cast<std::size_t>(t) - 1], rng_);
        if (!next) throw RejectSignal{early};
        path.push_back(*next);
    }
    return path;
}

const TestContext::ConsistencyOutcome& TestContext::consistency(Label v) {
    if (auto it = consistency_memo_.find(v); it != consistency_memo_.end()) {
        if (!it->second.accepted) throw RejectSignal{it->second.reason};
        return it->second;
    }
    ConsistencyOutcome out;
    try {
        if (marked(v) && filtered_deg(v, true) > 1)
            throw RejectSignal{RejectReason::MarkedNonLeaf};
        std::vector<Label> first_path;
        for (int rep = 0; rep < params_.consistency_reps; ++rep) {
            std::vector<Label> path = find_root_path(v);
            if (static_cast<int>(path.size()) - 1 > params_.k)
                throw RejectSignal{RejectReason::PathTooLong};
            for (std::size_t i = 1; i < path.size(); ++i)
                if (marked(path[i])) throw RejectSignal{RejectReason::MarkedOnPath};
            if (marked(v) && static_cast<int>(path.size()) - 1 < params_.k)
                throw RejectSignal{RejectReason::MarkedPathShort};
            if (rep == 0) first_path = std::move(path);
            else if (path != first_path) throw RejectSignal{RejectReason::PathDisagreement};
        }
        out.accepted = true;
        out.path = std::move(first_path);
    } catch (const RejectSignal& rs) {
        out.accepted = false;
        out.reason = rs.reason;
        consistency_memo_.emplace(v, std::move(out));
        throw;
    }
    return consistency_memo_.emplace(v, std::move(out)).first->second;
}

TestContext::RootSideResult TestContext::root_side_walks(Label r, bool enforce_completeness_shape) {
    std::vector<Label> radj;
    filtered_adj(r, false, radj);
    if (radj.size() != 4) throw RejectSignal{RejectReason::BannedDegree};
    RootSideResult res;
    const RejectReason early = enforce_completeness_shape ? RejectReason::IncompleteTree
                                                          : RejectReason::EarlyTermination;
    for (Label first : radj) {
        std::vector<Label> walk = root_walk(r, first, params_.k, early);
        if (enforce_completeness_shape) {
            for (std::size_t t = 1; t + 1 < walk.size(); ++t) {
                const int d = filtered_deg(walk[t], false);
                if (d == 1) throw RejectSignal{RejectReason::IncompleteTree};
                if (d != 3) throw RejectSignal{RejectReason::NonDegree3Interior};
            }
            const Label end = walk.back();
            const bool leaf = filtered_deg(end, false) == 1;
            bool weldlike = false;
            if (marked(end)) {
                std::vector<Label> eadj;
                filtered_adj(end, false, eadj);
                int mc = 0;
                for (Label u : eadj)
                    if (marked(u)) ++mc;
                weldlike = mc == 2;
            }
            if (!leaf && !weldlike) throw RejectSignal{RejectReason::IncompleteTree};
        }
        if (marked(walk.back())) res.marked_endpoints.push_back(walk.back());
        res.first_steps.push_back(first);
        res.walk_paths.push_back(std::move(walk));
    }
    return res;
}

const TestContext::WeldOutcome& TestContext::weld_consistency(Label v) {
    if (auto it = weld_memo_.find(v); it != weld_memo_.end()) {
        if (!it->second.accepted) throw RejectSignal{it->second.reason};
        return it->second;
    }
    WeldOutcome out;
    try {
        const ConsistencyOutcome& cons = consistency(v);
        out.path = cons.path;
        const int len = static_cast<int>(cons.path.size()) - 1;
        if (len < params_.k) {
            out.accepted = true; // not a leaf-level vertex
        } else {
            const Label r = cons.path.back();
            const Label e_dir = cons.path[cons.path.size() - 2];
            if (!marked(v)) {
                for (int rep = 0; rep < params_.consistency_reps; ++rep) {
                    std::vector<Label> walk =
                        root_walk(r, e_dir, params_.k, RejectReason::EarlyTermination);
                    for (Label u : walk)
                        if (marked(u)) throw RejectSignal{RejectReason::MarkedHit};
                }
            } else {
                std::vector<Label> adj;
                filtered_adj(v, false, adj);
                std::vector<Label> marked_nbrs;
                for (Label u : adj)
                    if (marked(u)) marked_nbrs.push_back(u);
                if (marked_nbrs.size() != 2) throw RejectSignal{RejectReason::WeldNeighborCount};
                const Label r1 = consistency(marked_nbrs[0]).path.back();
                const Label r2 = consistency(marked_nbrs[1]).path.back();
                if (r1 != r2 || r1 == r) throw RejectSignal{RejectReason::WeldPairMismatch};
                out.root_pair = r1;
                for (int rep = 0; rep < params_.consistency_reps; ++rep) {
                    RootSideResult side = root_side_walks(r, false);
                    if (side.marked_endpoints.size() != 2)
                        throw RejectSignal{RejectReason::BadEndpointCount};
                    for (std::size_t i = 0; i < side.first_steps.size(); ++i)
                        if (side.first_steps[i] == e_dir && !marked(side.walk_paths[i].back()))
                            throw RejectSignal{RejectReason::EndpointNotMarked};
                    for (Label w : side.marked_endpoints) {
                        std::vector<Label> wadj;
                        filtered_adj(w, false, wadj);
                        std::vector<Label> wm;
                        for (Label u : wadj)
                            if (marked(u)) wm.push_back(u);
                        if (wm.size() != 2) throw RejectSignal{RejectReason::WeldNeighborCount};
                        const Label pick = wm[uniform_below(rng_, wm.size())];
                        if (consistency(pick).path.back() != r1)
                            throw RejectSignal{RejectReason::WeldPairMismatch};
                    }
                }
            }
            out.accepted = true;
        }
    } catch (const RejectSignal& rs) {
        out.accepted = false;
        out.reason = rs.reason;
        weld_memo_.emplace(v, std::move(out));
        throw;
    }
    return weld_memo_.emplace(v, std::move(out)).first->second;
}

void TestContext::weld_check_sampled(const std::vector<Label>& path) {
    for (Label u : path) weld_consistency(u);
}

const TestContext::CompletenessOutcome& TestContext::completeness(Label v) {
    if (auto it = completeness_memo_.find(v); it != completeness_memo_.end()) {
        if (!it->second.accepted) throw RejectSignal{it->second.reason};
        return it->second;
    }
    CompletenessOutcome out;
    try {
        const WeldOutcome& wc = weld_consistency(v);
        out.path = wc.path;
        const Label r = wc.path.back();
        const std::optional<Label> e_dir =
            wc.path.size() >= 2 ? std::optional<Label>(wc.path[wc.path.size() - 2]) : std::nullopt;

        const int reps =
            static_cast<int>(std::ceil(params_.c1 * params_.k / params_.eps));
        for (int rep = 0; rep < reps; ++rep) {
            RootSideResult side = root_side_walks(r, true);
            if (side.marked_endpoints.size() != 2)
                throw RejectSignal{RejectReason::BadEndpointCount};
            if (e_dir && !out.branch_marked) {
                for (std::size_t i = 0; i < side.first_steps.size(); ++i)
                    if (side.first_steps[i] == *e_dir)
                        out.branch_marked = marked(side.walk_paths[i].back());
            }
            // Traverse a marked-marked edge from a random marked endpoint and
            // find the partner root.
            const Label w = side.marked_endpoints[uniform_below(rng_, side.marked_endpoints.size())];
            std::vector<Label> wadj;
            filtered_adj(w, false, wadj);
            std::vector<Label> wm;
            for (Label u : wadj)
                if (marked(u)) wm.push_back(u);
            if (wm.empty()) throw RejectSignal{RejectReason::WeldNeighborCount};
            const Label w2 = wm[uniform_below(rng_, wm.size())];
            std::vector<Label> partner_path = find_root_path(w2);
            const Label r_pair = partner_path.back();
            if (!out.root_pair) out.root_pair = r_pair;

            for (const auto& walk : side.walk_paths) weld_check_sampled(walk);
            weld_check_sampled(partner_path);

            // Mirrored test at the partner root, without the final traversal.
            RootSideResult mirror = root_side_walks(r_pair, true);
            if (mirror.marked_endpoints.size() != 2)
                throw RejectSignal{RejectReason::BadEndpointCount};
            for (const auto& walk : mirror.walk_paths) weld_check_sampled(walk);
        }
        out.accepted = true;
    } catch (const RejectSignal& rs) {
        out.accepted = false;
        out.reason = rs.reason;
        completeness_memo_.emplace(v, std::move(out));
        throw;
    }
    return completeness_memo_.emplace(v, std::move(out)).first->second;
}

void TestContext::advice_check(Label v) {
    const CompletenessOutcome& comp_v = completeness(v);

    const VertexInfo& vi = info(v);
    std::vector<Label> doubles;
    for (const auto& [u, kind] : vi.raw)
        if (kind == EdgeKind::Double) doubles.push_back(u);

    if (doubles.empty()) {
        // Root shape: 4 single-edge neighbors with the potential addition of
        // a self-loop. No double edge, so there is no parity to check.
        if (vi.singles.size() != 4) throw RejectSignal{RejectReason::AdviceStructure};
        return;
    }
    if (doubles.size() != 1) throw RejectSignal{RejectReason::AdviceStructure};

    const Label u = doubles[0];
    const CompletenessOutcome& comp_u = completeness(u);
    if (!comp_v.branch_marked || !comp_u.branch_marked)
        throw RejectSignal{RejectReason::BranchTypeMismatch};
    const bool v_in_marked_branch = *comp_v.branch_marked;
    const bool u_in_marked_branch = *comp_u.branch_marked;
    if (v_in_marked_branch == u_in_marked_branch)
        throw RejectSignal{RejectReason::BranchTypeMismatch};

    const Label a = v_in_marked_branch ? u : v; // the one in the non-marked branch
    const Label b = v_in_marked_branch ? v : u;
    const CompletenessOutcome& comp_a = v_in_marked_branch ? comp_u : comp_v;
    if (!comp_a.root_pair) throw RejectSignal{RejectReason::BranchTypeMismatch};
    (void)a;
    const Label ra = comp_a.path.back();
    const bool parity_odd = info(ra).loop != info(*comp_a.root_pair).loop;
    const bool expect_marked =
        params_.advice == AdviceConvention::Sec6 ? parity_odd : !parity_odd;
    if ((marked(b) != 0) != expect_marked)
        throw RejectSignal{RejectReason::AdviceParityMismatch};
}

void TestContext::begin_invocation() {
    vertex_cache_.clear();
    advice_cache_.clear();
    consistency_memo_.clear();
    weld_memo_.clear();
    completeness_memo_.clear();
}

Verdict TestContext::run_wrapped(const std::function<void()>& body) {
    if (depth_ == 0) begin_invocation();
    ++depth_;
    const std::uint64_t q0 = oracle_.query_count();
    const std::uint64_t a0 = advice_queries_;
    Verdict verdict;
    try {
        body();
        verdict.accept = true;
    } catch (const RejectSignal& rs) {
        verdict.accept = false;
        verdict.reason = rs.reason;
    }
    --depth_;
    verdict.oracle_queries = oracle_.query_count() - q0;
    verdict.advice_queries = advice_queries_ - a0;
    return verdict;
}

Verdict TestContext::consistency_test(Label v) {
    return run_wrapped([&] { consistency(v); });
}

Verdict TestContext::weld_consistency_test(Label v) {
    return run_wrapped([&] { weld_consistency(v); });
}

Verdict TestContext::completeness_test(Label v) {
    return run_wrapped([&] { completeness(v); });
}

Verdict TestContext::advice_test(Label v) {
    return run_wrapped([&] { advice_check(v); });
}

Verdict TestContext::final_test() {
    return run_wrapped([&] {
        const std::uint64_t block =
            2 * ((std::uint64_t{1} << params_.k) - 1) * candy_vertex_count(params_.k);
        if (oracle_.vertex_count() % block != 0)
            throw RejectSignal{RejectReason::VertexCountNotMultiple};
        const int reps = static_cast<int>(std::ceil(params_.c2 / params_.eps));
        for (int rep = 0; rep < reps; ++rep) {
            const Label v = oracle_.random_vertex(rng_);
            advice_check(v);
        }
    });
}

} // namespace weldlab
