#pragma once

#include "slbi/optim.hpp"

namespace slbi {

struct ForwardPolicy {
    double threshold = 0.8;              // expansion fires when ratio >= threshold
    std::size_t filters_per_expansion = 2;
    std::size_t max_filters = 64;
    std::size_t cooldown = 1;            // epochs to wait after an expansion
};

struct ImportanceWeights {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    bool normalized = true;  // min-max normalize M and E per layer before weighting
};

struct ExpansionEvent {
    int epoch = 0;
    std::size_t layer_index = 0;
    std::size_t old_filters = 0, new_filters = 0;
    double ratio = 0.0;
};

/// Fraction of groups with nonzero Gamma (equivalently nonzero W-tilde
/// group). GroupLasso layers only.
double selection_ratio(const SlbiLayerState& state);

/// Tracks the per-layer cooldown between expansions.
struct ExpansionState {
    std::vector<int> last_expansion_epoch;  // per penalized GroupLasso state; 0 = never

    static ExpansionState init(const std::vector<SlbiLayerState>& states) {
        ExpansionState es;
        es.last_expansion_epoch.assign(states.size(), 0);
        return es;
    }
};

/// If a GroupLasso layer's selection ratio is >= threshold and the layer is
/// not cooling down, grows it by m filters (Z/Gamma extended with exact
/// zeros; downstream penalized state extended likewise). Returns true if
/// any layer expanded. Declines silently at max_filters.
bool maybe_expand(Network& net, std::vector<SlbiLayerState>& states,
                  const ForwardPolicy& policy, int epoch, Rng& rng,
                  ExpansionState& es, std::vector<ExpansionEvent>& log);

struct GroupImportance {
    std::size_t layer_index = 0;
    std::size_t group = 0;
    double magnitude = 0.0;   // L2 norm of the group's final dense weights
    double first_entry = 0.0; // 1-based epoch; total_epochs+1 if never selected
    double score = 0.0;       // lambda1*M - lambda2*E (normalized per layer by default)
};

/// Sc ranking inputs per group, for every penalized layer. Sorted per layer
/// by descending score; ties broken by smaller E then smaller group index.
std::vector<GroupImportance> compute_importance(const SolutionPath& path, const Network& net,
                                                const std::vector<SlbiLayerState>& states,
                                                const ImportanceWeights& weights);

/// Zeroes the lowest floor(rate*G) groups per layer (global=false) or the
/// lowest floor(rate*G_total) across layers by score (global=true).
/// Conv groups zero the whole filter plus downstream input slices; Lasso
/// groups zero single weights. No retraining.
Network prune_by_rank(const Network& net, const std::vector<SlbiLayerState>& states,
                      const std::vector<GroupImportance>& importance, double removal_rate,
                      bool global = false);

struct PruneReport {
    std::vector<GroupImportance> ranking;
    struct CurvePoint {
        double rate = 0.0;
        double accuracy = 0.0;
        std::string criterion;
    };
    std::vector<CurvePoint> curve;
};

/// Accuracy at each removal rate, each evaluated on a fresh pruned copy.
PruneReport prune_curve(const Network& net, const std::vector<SlbiLayerState>& states,
                        const std::vector<GroupImportance>& importance,
                        const std::vector<double>& rates, const Dataset& test_set,
                        const std::string& criterion, bool global = false);

/// CSV writers for the two PruneReport tables.
void write_rank_csv(const std::vector<GroupImportance>& ranking, std::ostream& out);
void write_curve_csv(const std::vector<PruneReport::CurvePoint>& curve, std::ostream& out);
void write_expansion_log(const std::vector<ExpansionEvent>& events, std::ostream& out);

}  // namespace slbi
