// adversary.hpp - the classical hardness laboratory: the Action I-IV query
// interface over G1/G2 ensembles, the fixed simulator G_s that answers from
// label pools alone, reference strategies, games A-D on bare (self-)welded
// trees, and the distinguishing experiment.
#pragma once

#include "weldlab/knowledge.hpp"
#include "weldlab/lazy_instance.hpp"
#include "weldlab/stats.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace weldlab {

enum class ActionType : std::uint8_t {
    QueryUnknownBody,
    QueryUnknownAntenna,
    QueryKnownBody,
    QueryKnownAntenna,
    QueryRootFree // free root queries are not billed against t
};

struct AdversaryAction {
    ActionType type;
    Label target = 0; // for known-label and root queries
};

// Everything one action revealed.
struct FreshLabel {
    Label label;
    VertexRole role;
    KnownVia via;
    bool loop = false;
};

struct StepReveal {
    AdversaryAction action;
    Label queried = 0;
    VertexRole queried_role = VertexRole::Body;
    bool queried_loop = false;
    // labels entering the knowledge graph this step
    std::vector<FreshLabel> fresh;
    // all edges reported this step (fresh or re-reported)
    std::vector<std::tuple<Label, Label, EdgeKind>> edges;
};

// Raised when a backend's label pool runs dry (t exceeded the design envelope).
struct ExperimentTooLong : std::runtime_error {
    explicit ExperimentTooLong(const std::string& what) : std::runtime_error(what) {}
};

// Backend shared by the real lazy ensembles and the simulator G_s.
class ActionBackend {
public:
    virtual ~ActionBackend() = default;
    virtual int k() const = 0;
    virtual std::vector<std::pair<Label, bool>> roots() = 0; // labels + loop flags
    virtual StepReveal act(const AdversaryAction& action, const KnowledgeGraph& kg, Rng& rng) = 0;
    // Ground-truth hooks; the simulator answers neutrally.
    virtual bool in_tapped_pair(Label l, const std::unordered_set<std::uint32_t>& tapped) const = 0;
    virtual std::optional<std::uint32_t> pair_of(Label l) const = 0;
};

std::unique_ptr<ActionBackend> make_real_backend(int k, Variant variant, std::uint64_t seed);
std::unique_ptr<ActionBackend> make_simulator_backend(int k, std::uint64_t seed);

// ---------------------------------------------------------------------------

class Strategy {
public:
    virtual ~Strategy() = default;
    virtual const char* name() const = 0;
    virtual void begin(const std::vector<std::pair<Label, bool>>& roots, int k, Rng& rng) = 0;
    virtual std::optional<AdversaryAction> next(const KnowledgeGraph& kg, Rng& rng) = 0;
    virtual void observe(const StepReveal& reveal) {}
    // G1 guess: no odd cycle found reads as consistent with bipartite welds.
    virtual bool guess_g1(const KnowledgeGraph& kg) const { return !kg.odd_cycle_seen(); }
};

// "random-walk", "bfs", "parity-probe"
std::unique_ptr<Strategy> make_strategy(const std::string& name);
std::vector<std::string> reference_strategy_names();

// Histogram key for simulator-fidelity checks: action subtype x fresh label
// counts. Subtypes: 1=I, 2=II, 31=III(a), 32=III(b), 41=IV(a), 42=IV(b),
// 5=free root.
struct RevealClass {
    int subtype;
    int fresh_antenna;
    int fresh_body;
    auto operator<=>(const RevealClass&) const = default;
};
using RevealHistogram = std::map<RevealClass, std::uint64_t>;

struct Transcript {
    std::uint64_t queries_used = 0;
    bool a1 = false;            // Action I/II revealed a vertex of a tapped pair
    bool a2 = false;            // Action III/IV target advice-connected to a tapped pair
    bool found_cycle = false;   // single-edge cycle closed in the knowledge graph
    bool found_odd_cycle = false;
    bool found_root = false;    // traversal reached a root through a body edge
    bool pool_exhausted = false;
    bool guess_g1 = true;
    RevealHistogram histogram;
};

// Drives `strategy` for at most t billed queries against `backend`.
Transcript run_against(ActionBackend& backend, Strategy& strategy, std::uint64_t t,
                       std::uint64_t seed);

// ---------------------------------------------------------------------------

enum class GameId { A, B, C, D };

struct GameSpec {
    GameId game = GameId::A;
    int k = 8;
    std::uint64_t t = 16; // must satisfy t <= 2^{k-1}
    std::uint64_t trials = 1000;
};

enum class GameStrategyKind { RandomWalk, Bfs };

struct GameResult {
    std::uint64_t wins = 0;
    std::uint64_t trials = 0;
    double win_probability = 0.0;
    double stderr_estimate = 0.0;
    WilsonInterval wilson;
};

GameResult run_game(const GameSpec& spec, GameStrategyKind strategy, std::uint64_t seed);

struct DistinguishResult {
    std::uint64_t trials = 0;
    std::uint64_t g1_guesses_on_g1 = 0;
    std::uint64_t g1_guesses_on_g2 = 0;
    double advantage = 0.0;
    WilsonInterval wilson_g1, wilson_g2;
    std::uint64_t event_trials_g1 = 0; // trials with any A1/A2/cycle/root event
    std::uint64_t event_trials_g2 = 0;
    RevealHistogram hist_g1, hist_g2, hist_sim; // event-free trials only
};

DistinguishResult distinguishing_experiment(int k, std::uint64_t t, const std::string& strategy,
                                            std::uint64_t trials, std::uint64_t seed);

// Simulator fidelity: histograms of G_s vs a real ensemble under the same
// strategy, conditioned on event-free trials.
struct FidelityResult {
    RevealHistogram hist_real, hist_sim;
    Chi2Result chi2;
    std::uint64_t kept_real = 0, kept_sim = 0;
};

FidelityResult simulator_fidelity(int k, Variant variant, std::uint64_t t,
                                  const std::string& strategy, std::uint64_t trials,
                                  std::uint64_t seed);

} // namespace weldlab
