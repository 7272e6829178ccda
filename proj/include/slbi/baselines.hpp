#pragma once

#include "slbi/optim.hpp"

namespace slbi {

struct BaselineSpec {
    enum class Kind { SGD, SGD_L2, SGD_L1Prox, SGD_GroupLassoProx, FSeps };
    Kind kind = Kind::SGD;
    double coef = 0.0;     // L2 / L1 / group-lasso coefficient
    double epsilon = 0.0;  // FSeps step, in (0,1)
    double lr = 0.01;
    std::size_t batch_size = 64;
    std::size_t epochs = 20;
    // layers the penalty / steepest-coordinate update applies to
    std::vector<std::pair<std::size_t, PenaltyKind>> penalized;
};

/// Plain mini-batch SGD: every parameter moves by -lr * grad.
void sgd_step(Network& net, const Batch& batch, double lr);

/// SGD followed by the penalty's correction: L2 weight decay, or a
/// proximal shrink with threshold lr*coef (exact zeros) on the
/// penalized layers.
void penalized_sgd_step(Network& net, const Batch& batch, const BaselineSpec& spec);

/// Steepest l1 coordinate descent: only the single largest-|gradient|
/// coordinate across the penalized layers moves, by epsilon against the
/// gradient sign. All-zero gradient is a no-op. Ties go to the lowest
/// (layer, flat index).
void fs_eps_step(Network& net, const Batch& batch, double epsilon,
                 const std::vector<std::size_t>& penalized_layers);

/// Uniformly random groups zeroed (filters for GroupLasso layers,
/// individual weights for Lasso layers); seeded and reproducible.
Network random_prune(const Network& net, const std::vector<SlbiLayerState>& states,
                     double rate, Rng& rng);

}  // namespace slbi
