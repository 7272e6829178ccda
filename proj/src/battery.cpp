#include "slbi/battery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slbi::battery {

double prox_objective(const Tensor& gamma, const Tensor& z, const PenaltySpec& spec) {
    double quad = 0.0;
    for (std::size_t i = 0; i < gamma.numel(); ++i) {
        double d = gamma[i] - z[i];
        quad += d * d;
    }
    return 0.5 * quad + omega(gamma, spec);
}

namespace {

// phi(r) = 0.5*(r - n)^2 + r for the group with ||z|| = n, minimized over
// r in [0, n] by ternary search. The minimizing point itself must be
// r * z / ||z||: any other point on the radius-r sphere is farther from z.
double best_radius(double norm) {
    if (norm == 0.0) return 0.0;
    auto phi = [norm](double r) {
        double d = r - norm;
        return 0.5 * d * d + r;
    };
    double lo = 0.0, hi = norm;
    for (int it = 0; it < 100; ++it) {
        double a = lo + (hi - lo) / 3.0;
        double b = hi - (hi - lo) / 3.0;
        if (phi(a) < phi(b))
            hi = b;
        else
            lo = a;
    }
    // Ternary search stalls once phi differences fall below rounding noise,
    // so finish with one symmetric parabolic-interpolation step; phi is
    // smooth along the ray, making the fitted vertex near machine-exact.
    double r = 0.5 * (lo + hi);
    const double h = std::max(1e-3, 1e-3 * norm);
    const double fp = phi(r + h), fm = phi(r - h), f0 = phi(r);
    const double denom = fp - 2.0 * f0 + fm;
    if (denom > 0.0) r -= h * (fp - fm) / (2.0 * denom);
    if (r <= 0.0) return 0.0;
    return std::min(r, norm);
}

std::vector<std::vector<std::size_t>> effective_groups(const Tensor& z,
                                                       const PenaltySpec& spec) {
    if (spec.kind == PenaltyKind::Lasso) return GroupIndex::singletons(z.numel()).groups;
    return spec.groups.groups;
}

}  // namespace

Tensor prox_bruteforce(const Tensor& z, double kappa, const PenaltySpec& spec) {
    if (kappa <= 0.0) throw std::invalid_argument("prox_bruteforce: kappa must be positive");
    Tensor out(z.shape());
    for (const auto& g : effective_groups(z, spec)) {
        double norm = 0.0;
        for (std::size_t i : g) norm += z[i] * z[i];
        norm = std::sqrt(norm);
        double r = best_radius(norm);
        if (r == 0.0 || norm == 0.0) continue;
        double scale = kappa * r / norm;
        for (std::size_t i : g) out[i] = scale * z[i];
    }
    return out;
}

ProxOracleResult run_prox_oracle(std::size_t cases, std::uint64_t seed, double tol) {
    Rng rng(seed);
    ProxOracleResult res;
    res.cases = cases;
    for (std::size_t c = 0; c < cases; ++c) {
        std::size_t numel = 1 + rng.below(64);
        bool lasso = rng.below(2) == 0;
        PenaltySpec spec;
        if (lasso) {
            spec = PenaltySpec::lasso(numel);
        } else {
            std::size_t g = 1 + rng.below(numel);
            numel -= numel % g;  // contiguous groups need equal sizes
            if (numel == 0) numel = g;
            spec = PenaltySpec::group_lasso(GroupIndex::contiguous(numel, g));
        }
        double kappa = std::exp(rng.uniform() * std::log(100.0)) / 10.0;  // ~[0.1, 10]
        // mix magnitudes so some groups land inside and some outside the
        // unit shrinkage threshold
        double scale = std::exp((rng.uniform() - 0.5) * 6.0);
        Tensor z({numel});
        for (std::size_t i = 0; i < numel; ++i) z[i] = scale * rng.gaussian();

        Tensor closed = prox(z, kappa, spec);
        Tensor brute = prox_bruteforce(z, kappa, spec);
        double err = 0.0;
        for (std::size_t i = 0; i < numel; ++i)
            err = std::max(err, std::abs(closed[i] - brute[i]));
        res.max_abs_err = std::max(res.max_abs_err, err);
        if (err > tol) ++res.prox_failures;
        if (!moreau_check(z, closed, kappa, spec, 1e-10)) ++res.moreau_failures;
    }
    return res;
}

double split_lbi_reference_gap(std::uint64_t seed, std::size_t steps) {
    const std::size_t n = 40, p = 8;
    Rng rng(seed);
    SynthLinearTask task = gen_synth(n, p, 3, 1.5, 0.05, rng);
    Dataset data = task.as_dataset();

    Rng net_rng(seed + 1);
    Network net({Flatten{}, Dense{0, 1}}, {p, 1, 1}, LossKind::SquaredError, net_rng,
                /*use_bias=*/false);
    std::size_t slot = *net.slot_of_layer(1);
    std::size_t layer = 1;

    std::vector<SlbiLayerState> states;
    states.push_back(SlbiLayerState::for_layer(net, layer, PenaltyKind::Lasso));
    SlbiHyper hyper;
    hyper.kappa = 2.0;
    hyper.nu = 5.0;
    hyper.alpha = 0.05;
    hyper.batch_size = n;

    // flat-vector reference with its own gradient code
    std::vector<double> w(p), zv(p, 0.0), gv(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) w[j] = net.weight(slot)[j];

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    Batch batch = make_batch(data, all);

    double gap = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        // reference step: grad_j = (1/n) * sum_i x_ij * (x_i.w - y_i)
        std::vector<double> resid(n);
        for (std::size_t i = 0; i < n; ++i) {
            double pred = 0.0;
            for (std::size_t j = 0; j < p; ++j) pred += task.x[i * p + j] * w[j];
            resid[i] = pred - task.y[i];
        }
        std::vector<double> grad(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += task.x[i * p + j] * resid[i];
            grad[j] = s / static_cast<double>(n);
        }
        double a = hyper.resolved_alpha();
        for (std::size_t j = 0; j < p; ++j) {
            double split = (w[j] - gv[j]) / hyper.nu;
            zv[j] += a * split;
            w[j] -= hyper.kappa * a * (grad[j] + split);
        }
        for (std::size_t j = 0; j < p; ++j) {
            double mag = std::abs(zv[j]) - 1.0;
            gv[j] = mag > 0.0 ? hyper.kappa * (zv[j] > 0 ? mag : -mag) : 0.0;
        }

        slbi_step(net, batch, states, hyper, t);

        for (std::size_t j = 0; j < p; ++j) {
            gap = std::max(gap, std::abs(w[j] - net.weight(slot)[j]));
            gap = std::max(gap, std::abs(zv[j] - states[0].z[j]));
            gap = std::max(gap, std::abs(gv[j] - states[0].gamma[j]));
        }
    }
    return gap;
}

double finite_diff_max_rel_err(Network& net, const Batch& batch, double eps) {
    net.forward(batch);
    const Gradients g = net.backward(batch);

    double max_err = 0.0;
    auto probe = [&](Tensor& param, const Tensor& analytic) {
        for (std::size_t i = 0; i < param.numel(); ++i) {
            const double saved = param[i];
            param[i] = saved + eps;
            const double up = net.forward(batch).loss;
            param[i] = saved - eps;
            const double down = net.forward(batch).loss;
            param[i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double denom = std::max(1.0, std::abs(analytic[i]) + std::abs(numeric));
            max_err = std::max(max_err, std::abs(analytic[i] - numeric) / denom);
        }
    };
    for (std::size_t slot = 0; slot < net.param_slot_count(); ++slot) {
        probe(net.weight(slot), g.weights[slot]);
        if (net.use_bias()) probe(net.bias(slot), g.biases[slot]);
    }
    return max_err;
}

double entry_order_auc(const std::vector<double>& entry_epochs,
                       const std::vector<std::size_t>& true_support) {
    std::vector<bool> is_true(entry_epochs.size(), false);
    for (std::size_t i : true_support) is_true[i] = true;
    double score = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < entry_epochs.size(); ++i) {
        if (!is_true[i]) continue;
        for (std::size_t j = 0; j < entry_epochs.size(); ++j) {
            if (is_true[j]) continue;
            ++pairs;
            if (entry_epochs[i] < entry_epochs[j])
                score += 1.0;
            else if (entry_epochs[i] == entry_epochs[j])
                score += 0.5;
        }
    }
    return pairs == 0 ? 1.0 : score / static_cast<double>(pairs);
}

SupportRecoveryResult run_support_recovery(std::size_t seeds, std::size_t epochs) {
    SupportRecoveryResult res;
    std::size_t monotone_ok = 0, monotone_total = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
        std::uint64_t seed = 1000 + 17 * s;
        Rng rng(seed);
        SynthLinearTask task = gen_synth(200, 50, 5, 2.0, 0.1, rng);
        Dataset data = task.as_dataset();

        Rng net_rng(seed + 1);
        Network net({Flatten{}, Dense{0, 1}}, {50, 1, 1}, LossKind::SquaredError, net_rng,
                    /*use_bias=*/false);
        std::vector<SlbiLayerState> states;
        states.push_back(SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso));

        SlbiHyper hyper;
        hyper.batch_size = 200;  // full batch: one step per epoch
        hyper.epochs = epochs;
        Rng train_rng(seed + 2);
        TrainResult tr = run_training(net, data, nullptr, states, hyper, train_rng);

        const auto& lp = tr.path.layers.at(0);
        std::vector<double> entry(50);
        for (std::size_t j = 0; j < 50; ++j)
            entry[j] = lp.first_entry[j] < 0 ? static_cast<double>(epochs + 1)
                                             : static_cast<double>(lp.first_entry[j]);
        res.aucs.push_back(entry_order_auc(entry, task.support));

        for (std::size_t e = 1; e < lp.gamma_norm.size(); ++e) {
            std::size_t prev = 0, cur = 0;
            for (double v : lp.gamma_norm[e - 1]) prev += v > 0.0;
            for (double v : lp.gamma_norm[e]) cur += v > 0.0;
            ++monotone_total;
            if (cur >= prev) ++monotone_ok;
        }
    }
    res.mean_auc = std::accumulate(res.aucs.begin(), res.aucs.end(), 0.0) /
                   static_cast<double>(res.aucs.size());
    res.monotone_fraction =
        monotone_total == 0 ? 1.0
                            : static_cast<double>(monotone_ok) / static_cast<double>(monotone_total);
    return res;
}

}  // namespace slbi::battery
