#include "slbi/selection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "slbi/io_util.hpp"

namespace slbi {

double selection_ratio(const SlbiLayerState& state) {
    if (state.spec.kind != PenaltyKind::GroupLasso)
        throw std::invalid_argument("selection_ratio: only defined for GroupLasso layers");
    const std::size_t g = state.spec.groups.size();
    const Tensor norms = group_l2_norm(state.gamma, state.spec.groups);
    std::size_t active = 0;
    for (std::size_t i = 0; i < g; ++i) active += norms[i] > 0.0;
    return static_cast<double>(active) / static_cast<double>(g);
}

namespace {

// Rebuild a coupled tensor after its weight grew: per-row copy of the old
// columns, exact zeros for the new ones.
Tensor grow_rows_cols(const Tensor& old, const Shape& new_shape) {
    Tensor out(new_shape);
    const std::size_t old_rows = old.dim(0), old_cols = old.dim(1);
    const std::size_t new_cols = new_shape[1];
    for (std::size_t r = 0; r < old_rows; ++r)
        for (std::size_t c = 0; c < old_cols; ++c) out[r * new_cols + c] = old[r * old_cols + c];
    return out;
}

SlbiLayerState* state_for_layer(std::vector<SlbiLayerState>& states, std::size_t layer) {
    for (auto& st : states)
        if (st.layer_index == layer) return &st;
    return nullptr;
}

std::size_t next_param_layer_of(const Network& net, std::size_t layer) {
    for (std::size_t l = layer + 1; l < net.layers().size(); ++l)
        if (net.slot_of_layer(l)) return l;
    return net.layers().size();
}

}  // namespace

bool maybe_expand(Network& net, std::vector<SlbiLayerState>& states,
                  const ForwardPolicy& policy, int epoch, Rng& rng,
                  ExpansionState& es, std::vector<ExpansionEvent>& log) {
    if (!(policy.threshold > 0.0 && policy.threshold <= 1.0) || policy.filters_per_expansion == 0)
        throw std::invalid_argument("maybe_expand: invalid policy");
    bool expanded = false;
    for (std::size_t si = 0; si < states.size(); ++si) {
        SlbiLayerState& st = states[si];
        if (st.spec.kind != PenaltyKind::GroupLasso) continue;
        const int last = es.last_expansion_epoch[si];
        if (last > 0 && epoch <= last + static_cast<int>(policy.cooldown)) continue;
        const double ratio = selection_ratio(st);
        if (ratio < policy.threshold) continue;
        const std::size_t old_g = st.spec.groups.size();
        const std::size_t new_g = old_g + policy.filters_per_expansion;
        if (new_g > policy.max_filters) continue;  // declined, not an error

        net.resize_conv(st.layer_index, new_g, rng);
        const Tensor& w = net.weight(*net.slot_of_layer(st.layer_index));
        st.z = grow_rows_cols(st.z, w.shape());
        st.gamma = grow_rows_cols(st.gamma, w.shape());
        st.spec = PenaltySpec::group_lasso(net.filter_groups(st.layer_index));

        // a penalized downstream layer gains zero Z/Gamma columns too
        const std::size_t np = next_param_layer_of(net, st.layer_index);
        if (np < net.layers().size()) {
            if (SlbiLayerState* down = state_for_layer(states, np)) {
                const Tensor& wn = net.weight(*net.slot_of_layer(np));
                down->z = grow_rows_cols(down->z, wn.shape());
                down->gamma = grow_rows_cols(down->gamma, wn.shape());
                down->spec = down->spec.kind == PenaltyKind::GroupLasso
                                 ? PenaltySpec::group_lasso(net.filter_groups(np))
                                 : PenaltySpec::lasso(wn.numel());
            }
        }

        es.last_expansion_epoch[si] = epoch;
        log.push_back({epoch, st.layer_index, old_g, new_g, ratio});
        expanded = true;
    }
    return expanded;
}

namespace {

std::vector<double> group_magnitudes(const Tensor& w, const PenaltySpec& spec) {
    std::vector<double> out;
    if (spec.kind == PenaltyKind::Lasso) {
        out.resize(w.numel());
        for (std::size_t i = 0; i < w.numel(); ++i) out[i] = std::abs(w[i]);
    } else {
        const Tensor norms = group_l2_norm(w, spec.groups);
        out.assign(norms.data(), norms.data() + norms.numel());
    }
    return out;
}

void minmax_normalize(std::vector<double>& v) {
    if (v.empty()) return;
    double lo = v[0], hi = v[0];
    for (double x : v) { lo = std::min(lo, x); hi = std::max(hi, x); }
    const double span = hi - lo;
    for (double& x : v) x = span > 0.0 ? (x - lo) / span : 0.0;
}

bool worse_than(const GroupImportance& a, const GroupImportance& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.first_entry != b.first_entry) return a.first_entry > b.first_entry;
    return a.group > b.group;
}

}  // namespace

std::vector<GroupImportance> compute_importance(const SolutionPath& path, const Network& net,
                                                const std::vector<SlbiLayerState>& states,
                                                const ImportanceWeights& weights) {
    if (path.empty()) throw std::logic_error("compute_importance: empty solution path");
    if (weights.lambda1 < 0 || weights.lambda2 < 0 || (weights.lambda1 == 0 && weights.lambda2 == 0))
        throw std::invalid_argument("compute_importance: lambdas must be >= 0, not both zero");
    const int total_epochs = path.epochs.back();

    std::vector<GroupImportance> out;
    for (const auto& st : states) {
        const Tensor& w = net.weight(*net.slot_of_layer(st.layer_index));
        std::vector<double> mags = group_magnitudes(w, st.spec);
        const SolutionPath::LayerPath* lp = nullptr;
        for (const auto& cand : path.layers)
            if (cand.layer_index == st.layer_index) { lp = &cand; break; }

        std::vector<double> entries(mags.size());
        for (std::size_t g = 0; g < mags.size(); ++g) {
            int e = (lp && g < lp->first_entry.size()) ? lp->first_entry[g] : -1;
            entries[g] = e > 0 ? static_cast<double>(e) : static_cast<double>(total_epochs + 1);
        }

        std::vector<double> mn = mags, en = entries;
        if (weights.normalized) {
            minmax_normalize(mn);
            minmax_normalize(en);
        }

        std::vector<GroupImportance> layer_rank(mags.size());
        for (std::size_t g = 0; g < mags.size(); ++g) {
            layer_rank[g] = {st.layer_index, g, mags[g], entries[g],
                             weights.lambda1 * mn[g] - weights.lambda2 * en[g]};
        }
        std::sort(layer_rank.begin(), layer_rank.end(),
                  [](const GroupImportance& a, const GroupImportance& b) { return worse_than(b, a); });
        out.insert(out.end(), layer_rank.begin(), layer_rank.end());
    }
    return out;
}

namespace {

void zero_group(Network& net, const std::vector<SlbiLayerState>& states,
                std::size_t layer, std::size_t group) {
    for (const auto& st : states) {
        if (st.layer_index != layer) continue;
        if (st.spec.kind == PenaltyKind::GroupLasso) {
            net.zero_filter(layer, group);
        } else {
            net.weight(*net.slot_of_layer(layer))[group] = 0.0;
        }
        return;
    }
    throw std::invalid_argument("zero_group: no penalized state for layer " + std::to_string(layer));
}

}  // namespace

Network prune_by_rank(const Network& net, const std::vector<SlbiLayerState>& states,
                      const std::vector<GroupImportance>& importance, double removal_rate,
                      bool global) {
    if (!(removal_rate >= 0.0 && removal_rate < 1.0))
        throw std::invalid_argument("prune_by_rank: removal_rate must be in [0,1)");
    Network pruned = net;
    if (global) {
        std::vector<GroupImportance> all = importance;
        std::sort(all.begin(), all.end(), worse_than);
        const std::size_t kill = static_cast<std::size_t>(removal_rate * static_cast<double>(all.size()));
        for (std::size_t i = 0; i < kill; ++i) zero_group(pruned, states, all[i].layer_index, all[i].group);
        return pruned;
    }
    for (const auto& st : states) {
        std::vector<GroupImportance> layer;
        for (const auto& gi : importance)
            if (gi.layer_index == st.layer_index) layer.push_back(gi);
        std::sort(layer.begin(), layer.end(), worse_than);
        const std::size_t kill = static_cast<std::size_t>(removal_rate * static_cast<double>(layer.size()));
        for (std::size_t i = 0; i < kill; ++i) zero_group(pruned, states, layer[i].layer_index, layer[i].group);
    }
    return pruned;
}

PruneReport prune_curve(const Network& net, const std::vector<SlbiLayerState>& states,
                        const std::vector<GroupImportance>& importance,
                        const std::vector<double>& rates, const Dataset& test_set,
                        const std::string& criterion, bool global) {
    PruneReport report;
    report.ranking = importance;
    for (double rate : rates) {
        Network pruned = prune_by_rank(net, states, importance, rate, global);
        const double acc = accuracy(pruned, test_set.images, test_set.labels);
        report.curve.push_back({rate, acc, criterion});
    }
    return report;
}

void write_rank_csv(const std::vector<GroupImportance>& ranking, std::ostream& out) {
    out << "layer,group,M,E,Sc,rank\n";
    std::size_t rank = 0;
    std::size_t prev_layer = ranking.empty() ? 0 : ranking.front().layer_index;
    for (const auto& gi : ranking) {
        if (gi.layer_index != prev_layer) { rank = 0; prev_layer = gi.layer_index; }
        out << gi.layer_index << ',' << gi.group << ',' << format_double(gi.magnitude) << ','
            << format_double(gi.first_entry) << ',' << format_double(gi.score) << ',' << rank++ << '\n';
    }
}

void write_curve_csv(const std::vector<PruneReport::CurvePoint>& curve, std::ostream& out) {
    out << "rate,accuracy,criterion\n";
    for (const auto& p : curve)
        out << format_double(p.rate) << ',' << format_double(p.accuracy) << ',' << p.criterion << '\n';
}

void write_expansion_log(const std::vector<ExpansionEvent>& events, std::ostream& out) {
    for (const auto& e : events)
        out << "{\"epoch\": " << e.epoch << ", \"layer\": " << e.layer_index
            << ", \"old_filters\": " << e.old_filters << ", \"new_filters\": " << e.new_filters
            << ", \"ratio\": " << format_double(e.ratio) << "}\n";
}

}  // namespace slbi
