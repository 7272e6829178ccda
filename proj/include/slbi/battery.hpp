#pragma once

#include "slbi/optim.hpp"

namespace slbi::battery {

/// 0.5*||gamma - z||^2 + Omega(gamma), the objective the prox minimizes
/// (before the kappa scaling).
double prox_objective(const Tensor& gamma, const Tensor& z, const PenaltySpec& spec);

/// Numeric minimizer of the prox objective, independent of the closed
/// form: per group the optimum lies on the segment towards z (closest
/// point on a sphere), so the radius is found by long ternary search.
/// Scaled by kappa like the production prox.
Tensor prox_bruteforce(const Tensor& z, double kappa, const PenaltySpec& spec);

struct ProxOracleResult {
    std::size_t cases = 0;
    std::size_t prox_failures = 0;    // closed form vs brute force > tol
    std::size_t moreau_failures = 0;  // moreau_check false
    double max_abs_err = 0.0;
};

/// Random (z, kappa, penalty) cases; compares closed-form prox against the
/// brute-force minimizer (tol) and runs moreau_check (1e-10).
ProxOracleResult run_prox_oracle(std::size_t cases, std::uint64_t seed, double tol = 1e-8);

/// Full-batch squared-loss single linear layer: runs the production
/// iteration and a directly coded flat-vector reference side by side and
/// returns the max abs W/Z/Gamma gap over `steps` steps.
double split_lbi_reference_gap(std::uint64_t seed, std::size_t steps);

struct SupportRecoveryResult {
    std::vector<double> aucs;      // one per seed
    double mean_auc = 0.0;
    double monotone_fraction = 0.0;  // consecutive epochs with non-shrinking support
};

/// Synthetic sparse regression (n=200, p=50, s=5, b=2, sigma=0.1): AUC of
/// the first-entry ordering against the true support, over several seeds.
SupportRecoveryResult run_support_recovery(std::size_t seeds, std::size_t epochs = 1200);

/// Max relative error between analytic gradients and central finite
/// differences, over every weight and bias of the net.
double finite_diff_max_rel_err(Network& net, const Batch& batch, double eps = 1e-5);

/// Mann-Whitney AUC of "true-support coordinates have smaller E".
double entry_order_auc(const std::vector<double>& entry_epochs,
                       const std::vector<std::size_t>& true_support);

}  // namespace slbi::battery
