// tester.hpp - the poly(k)-query classical tester with advice: FindParent /
// FindRootPath non-backtracking tree probes and the consistency,
// weld-consistency, completeness, advice and final tests layered on top.
//
// All tree probing ignores double edges and self-loops; the consistency
// machinery additionally ignores edges between marked vertices. Queries and
// advice reads are cached for the duration of one top-level test invocation
// (answers are pure functions of the instance, so re-queries carry no new
// information); each distinct oracle query and advice evaluation is billed
// once to its own counter.
#pragma once

#include "weldlab/generator.hpp"
#include "weldlab/oracle.hpp"
#include "weldlab/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace weldlab {

enum class RejectReason {
    None = 0,
    BannedDegree,          // FindParent: filtered degree not in {1,3,4}
    SingleDegreeOverflow,  // more than 4 single-edge neighbors (loops excluded)
    MultipleRoots,         // FindParent: second degree-4 vertex on the walks
    LeafNotFound,          // FindParent: walk did not end at a leaf
    LengthMismatch,        // FindParent: non-parent walk lengths disagree
    RootSkip,              // FindParent: root candidate missing from parent walk
    RootNotFound,          // FindRootPath: k steps without reaching a degree-4 vertex
    PathTooLong,           // consistency: root-path longer than k
    MarkedNonLeaf,         // consistency: marked vertex with filtered degree > 1
    MarkedOnPath,          // consistency: marked vertex on the root-path
    MarkedPathShort,       // consistency: marked vertex with root-path shorter than k
    PathDisagreement,      // consistency: repetitions found different paths
    EarlyTermination,      // root-launched walk stopped before k steps
    MarkedHit,             // weld-consistency: marked vertex on an unmarked-branch walk
    WeldNeighborCount,     // marked vertex without exactly 2 marked neighbors
    WeldPairMismatch,      // partner roots disagree, or partner root equals own root
    BadEndpointCount,      // not exactly 2 marked among the 4 root-walk endpoints
    EndpointNotMarked,     // the walk along v's branch edge ended unmarked
    NonDegree3Interior,    // completeness: interior walk vertex of wrong degree
    IncompleteTree,        // completeness: walk found neither leaf nor weld endpoint
    AdviceStructure,       // advice test: double-edge / root shape check failed
    BranchTypeMismatch,    // advice test: branch classification inconsistent
    AdviceParityMismatch,  // advice test: loop parity does not match the marking
    VertexCountNotMultiple // final test: vertex count not a multiple of the candy total
};

const char* reject_reason_name(RejectReason r);

struct Verdict {
    bool accept = false;
    RejectReason reason = RejectReason::None;
    std::uint64_t oracle_queries = 0; // consumed by this invocation
    std::uint64_t advice_queries = 0; // advice bits billed by this invocation
};

using AdviceSource = std::function<int(Label)>;

struct TesterParams {
    int k = 3;
    double eps = 0.1;
    int c1 = 10;            // completeness repetitions: ceil(c1 * k / eps)
    int c2 = 10;            // final-test advice repetitions: ceil(c2 / eps)
    int consistency_reps = 100;
    AdviceConvention advice = AdviceConvention::Sec6;
    std::uint64_t seed = 0;
};

class TestContext {
public:
    TestContext(AdjacencyOracle& oracle, AdviceSource advice, TesterParams params);

    Verdict consistency_test(Label v);
    Verdict weld_consistency_test(Label v);
    Verdict completeness_test(Label v);
    Verdict advice_test(Label v);
    Verdict final_test();

    const TesterParams& params() const { return params_; }
    std::uint64_t advice_queries() const { return advice_queries_; }

private:
    struct RejectSignal {
        RejectReason reason;
    };

    struct VertexInfo {
        bool loop = false;
        VertexRole role = VertexRole::Body;
        std::vector<Label> singles;          // non-loop single-edge neighbors, with multiplicity
        std::vector<std::pair<Label, EdgeKind>> raw;
    };

    struct ConsistencyOutcome {
        bool accepted = false;
        RejectReason reason = RejectReason::None;
        std::vector<Label> path; // root-path including v and the root
    };

    struct WeldOutcome {
        bool accepted = false;
        RejectReason reason = RejectReason::None;
        std::vector<Label> path;
        std::optional<Label> root_pair; // partner root (marked branch only)
    };

    struct RootSideResult {
        std::vector<Label> marked_endpoints;
        std::vector<std::vector<Label>> walk_paths; // one per root edge
        std::vector<Label> first_steps;             // direction of each walk
    };

    struct CompletenessOutcome {
        bool accepted = false;
        RejectReason reason = RejectReason::None;
        std::vector<Label> path;
        std::optional<Label> root_pair;
        // true if the walk along v's branch direction ended at a marked vertex
        std::optional<bool> branch_marked;
    };

    // Cached, billed access.
    const VertexInfo& info(Label v);
    int advice_bit(Label v);
    bool marked(Label v) { return advice_bit(v) != 0; }

    // Filtered adjacency for tree probing: doubles and loops always dropped;
    // marked_filter additionally drops edges between two marked vertices.
    void filtered_adj(Label v, bool marked_filter, std::vector<Label>& out);
    int filtered_deg(Label v, bool marked_filter);

    // Algorithm 1. Returns the parent, or nullopt when v is a root.
    std::optional<Label> find_parent(Label v);
    // Algorithm 2. Returns the root-path (v first, root last).
    std::vector<Label> find_root_path(Label v);

    // Non-backtracking walk of exactly `steps` steps from `from`, first step
    // to `first`, no marked filter. Throws `early` reason when it stops short.
    std::vector<Label> root_walk(Label from, Label first, int steps, RejectReason early);

    const ConsistencyOutcome& consistency(Label v);
    const WeldOutcome& weld_consistency(Label v);
    const CompletenessOutcome& completeness(Label v);
    void advice_check(Label v);

    RootSideResult root_side_walks(Label r, bool enforce_completeness_shape);
    void weld_check_sampled(const std::vector<Label>& path);

    Verdict run_wrapped(const std::function<void()>& body);
    void begin_invocation();

    AdjacencyOracle& oracle_;
    AdviceSource advice_source_;
    TesterParams params_;
    Rng rng_;

    std::unordered_map<Label, VertexInfo> vertex_cache_;
    std::unordered_map<Label, int> advice_cache_;
    std::unordered_map<Label, ConsistencyOutcome> consistency_memo_;
    std::unordered_map<Label, WeldOutcome> weld_memo_;
    std::unordered_map<Label, CompletenessOutcome> completeness_memo_;
    std::uint64_t advice_queries_ = 0;
    int depth_ = 0;
};

} // namespace weldlab
