#include "slbi/baselines.hpp"

#include <cmath>

namespace slbi {

namespace {

Gradients checked_backward(Network& net, const Batch& batch) {
    net.forward(batch);
    Gradients g = net.backward(batch);
    if (!g.all_finite()) throw DivergenceError("non-finite gradient", 0);
    return g;
}

}  // namespace

void sgd_step(Network& net, const Batch& batch, double lr) {
    const Gradients g = checked_backward(net, batch);
    for (std::size_t slot = 0; slot < net.param_slot_count(); ++slot) {
        Tensor& w = net.weight(slot);
        for (std::size_t i = 0; i < w.numel(); ++i) w[i] -= lr * g.weights[slot][i];
        if (net.use_bias()) {
            Tensor& b = net.bias(slot);
            for (std::size_t i = 0; i < b.numel(); ++i) b[i] -= lr * g.biases[slot][i];
        }
    }
}

void penalized_sgd_step(Network& net, const Batch& batch, const BaselineSpec& spec) {
    const Gradients g = checked_backward(net, batch);
    const double thr = spec.lr * spec.coef;
    for (std::size_t slot = 0; slot < net.param_slot_count(); ++slot) {
        Tensor& w = net.weight(slot);
        const std::size_t layer = net.layer_of_slot(slot);
        const PenaltyKind* kind = nullptr;
        for (const auto& [pl, pk] : spec.penalized)
            if (pl == layer) { kind = &pk; break; }

        if (kind && spec.kind == BaselineSpec::Kind::SGD_L2) {
            // combined gradient of L + (coef/2)||W||^2 at the pre-step W
            for (std::size_t i = 0; i < w.numel(); ++i)
                w[i] -= spec.lr * (g.weights[slot][i] + spec.coef * w[i]);
        } else {
            for (std::size_t i = 0; i < w.numel(); ++i) w[i] -= spec.lr * g.weights[slot][i];
        }
        if (net.use_bias()) {
            Tensor& b = net.bias(slot);
            for (std::size_t i = 0; i < b.numel(); ++i) b[i] -= spec.lr * g.biases[slot][i];
        }
        if (!kind || spec.kind == BaselineSpec::Kind::SGD || spec.kind == BaselineSpec::Kind::SGD_L2)
            continue;

        if (spec.kind == BaselineSpec::Kind::SGD_L1Prox) {
            for (std::size_t i = 0; i < w.numel(); ++i) {
                const double a = std::abs(w[i]);
                w[i] = a > thr ? (w[i] > 0 ? a - thr : thr - a) : 0.0;
            }
        } else if (spec.kind == BaselineSpec::Kind::SGD_GroupLassoProx) {
            const GroupIndex groups = net.filter_groups(layer);
            for (const auto& idx : groups.groups) {
                double sq = 0.0;
                for (std::size_t i : idx) sq += w[i] * w[i];
                const double norm = std::sqrt(sq);
                if (norm <= thr) {
                    for (std::size_t i : idx) w[i] = 0.0;
                } else {
                    const double scale = 1.0 - thr / norm;
                    for (std::size_t i : idx) w[i] *= scale;
                }
            }
        }
    }
}

void fs_eps_step(Network& net, const Batch& batch, double epsilon,
                 const std::vector<std::size_t>& penalized_layers) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("fs_eps_step: epsilon must be in (0,1)");
    const Gradients g = checked_backward(net, batch);
    double best = 0.0;
    std::size_t best_slot = 0, best_idx = 0;
    bool found = false;
    for (std::size_t layer : penalized_layers) {
        const auto slot = net.slot_of_layer(layer);
        if (!slot) throw std::invalid_argument("fs_eps_step: layer has no parameters");
        const Tensor& gw = g.weights[*slot];
        for (std::size_t i = 0; i < gw.numel(); ++i) {
            const double a = std::abs(gw[i]);
            if (a > best) {  // strict: ties keep the lowest (layer, flat index)
                best = a;
                best_slot = *slot;
                best_idx = i;
                found = true;
            }
        }
    }
    if (!found || best == 0.0) return;
    const double gv = g.weights[best_slot][best_idx];
    net.weight(best_slot)[best_idx] -= epsilon * (gv > 0 ? 1.0 : -1.0);
}

Network random_prune(const Network& net, const std::vector<SlbiLayerState>& states,
                     double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0))
        throw std::invalid_argument("random_prune: rate must be in [0,1)");
    Network pruned = net;
    for (const auto& st : states) {
        const std::size_t g = st.spec.group_count(net.weight(*net.slot_of_layer(st.layer_index)).numel());
        std::vector<std::size_t> idx(g);
        for (std::size_t i = 0; i < g; ++i) idx[i] = i;
        rng.shuffle(idx);
        const std::size_t kill = static_cast<std::size_t>(rate * static_cast<double>(g));
        for (std::size_t i = 0; i < kill; ++i) {
            if (st.spec.kind == PenaltyKind::GroupLasso)
                pruned.zero_filter(st.layer_index, idx[i]);
            else
                pruned.weight(*pruned.slot_of_layer(st.layer_index))[idx[i]] = 0.0;
        }
    }
    return pruned;
}

}  // namespace slbi
