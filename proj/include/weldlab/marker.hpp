// marker.hpp - weld marking via the exactly simulated continuous-time
// quantum walk.
//
// For a vertex v of a P_k instance: a leaf scan along single edges settles
// whether v is a body non-root vertex; if so, the double edge is crossed to
// an antenna vertex, FindRootPath (double edges ignored) finds that candy's
// root, and a simulated walk on the reduced body component finds the partner
// root. The self-loop parity of the two roots decides the bit, with
// certainty on P_k instances.
//
// The quantum execution model is replaced by exact state-vector simulation:
// the walk runs on the reduced component (via the oracle's uncounted
// simulation backdoor) and its cost enters an analytic model instead.
// find_exit charges ceil(t_hit) * ceil(1/sqrt(p_hit)) for the amplified walk
// plus its 4k probe queries, where t_hit is the first sweep time at which
// the exit probability clears 1/(2k).
#pragma once

#include "weldlab/column_walk.hpp"
#include "weldlab/generator.hpp"
#include "weldlab/oracle.hpp"
#include "weldlab/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace weldlab {

struct WalkCostModel {
    int k = 0;
    double t_star = 0.0; // argmax of the exit probability over the sweep grid
    double p_star = 0.0;
    double t_hit = 0.0;  // first grid time with exit probability >= 1/(2k)
    double p_hit = 0.0;
    std::uint64_t walk_charge() const {
        return static_cast<std::uint64_t>(std::ceil(t_hit)) *
               static_cast<std::uint64_t>(std::ceil(1.0 / std::sqrt(p_hit)));
    }
};

// Sweeps the column walk (cached per k).
const WalkCostModel& walk_cost_model(int k);

struct AdviceMap {
    std::unordered_map<Label, int> bits;
    std::uint64_t modeled_quantum_queries = 0;
    // Set when a non-P_k structure was encountered (output arbitrary there).
    bool malformed_seen = false;
};

enum class LeafScanResult { NotInW, BodyNonRoot };

class QuantumMarker {
public:
    QuantumMarker(AdjacencyOracle& oracle, int k, std::uint64_t seed,
                  AdviceConvention convention = AdviceConvention::Sec6);

    // Lemma-Mark bit for v; memoized. On malformed (non-P_k) structure the
    // bit is 0 and the diagnostic flag is set.
    int classify(Label v);

    // Walk + oracle cost consumed by the most recent non-memoized classify.
    std::uint64_t last_classify_cost() const { return last_cost_; }

    LeafScanResult leaf_scan(Label v);
    // Partner root of `root` via the simulated walk. Throws MalformedInstance
    // when the reduced component does not hold exactly two roots.
    Label find_exit(Label root);

    const AdviceMap& advice() const { return advice_; }
    AdviceMap& advice() { return advice_; }

    struct MalformedInstance : std::runtime_error {
        explicit MalformedInstance(const std::string& what) : std::runtime_error(what) {}
    };

private:
    struct VertexView {
        VertexRole role;
        bool loop;
        std::vector<Label> singles; // non-loop single-edge neighbors
        std::vector<Label> doubles;
        int multiplicity_degree;
    };

    const VertexView& view(Label v);
    std::optional<Label> tree_parent(Label v); // FindParent, doubles ignored
    std::vector<Label> tree_root_path(Label v);

    AdjacencyOracle& oracle_;
    int k_;
    AdviceConvention convention_;
    Rng rng_;
    AdviceMap advice_;
    std::unordered_map<Label, VertexView> cache_;
    std::unordered_map<Label, Label> exit_memo_; // root -> partner root
    std::uint64_t walk_charges_ = 0;
    std::uint64_t last_cost_ = 0;
};

} // namespace weldlab
