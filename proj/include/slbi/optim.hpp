#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>

#include "slbi/data.hpp"
#include "slbi/network.hpp"
#include "slbi/penalty.hpp"

namespace slbi {

struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_index(step) {}
    std::size_t step_index;
};

struct SlbiHyper {
    double kappa = 1.0;   // damping; scales the prox and the W step
    double nu = 10.0;     // splitting strength
    double alpha = 0.0;   // step size; <= 0 means the default 0.01/kappa
    std::size_t batch_size = 64;
    std::size_t epochs = 20;
    std::size_t patience = 10;  // early-stopping epochs without val improvement

    double resolved_alpha() const { return alpha > 0.0 ? alpha : 0.01 / kappa; }
};

/// Coupled state (Z, Gamma) for one penalized layer. W itself lives in the
/// network. Z and Gamma start at exactly zero (the null model).
struct SlbiLayerState {
    std::size_t layer_index = 0;
    Tensor z;
    Tensor gamma;
    PenaltySpec spec;

    static SlbiLayerState for_layer(const Network& net, std::size_t layer_index,
                                    PenaltyKind kind);
    /// W restricted to Gamma's support (computed on demand).
    Tensor w_tilde(const Network& net) const;
};

/// Per-epoch record of group magnitudes and support, plus first-entry epochs.
struct SolutionPath {
    struct LayerPath {
        std::size_t layer_index = 0;
        // rows indexed like `epochs`; group count may grow across epochs
        std::vector<std::vector<double>> gamma_norm;
        std::vector<std::vector<double>> w_norm;
        std::vector<int> first_entry;  // 1-based epoch, -1 if never
    };
    std::vector<int> epochs;  // recorded (1-based) epoch numbers
    std::vector<LayerPath> layers;

    bool empty() const { return epochs.empty(); }
};

/// Eq-4-style objective: plain loss plus (1/2nu)*||Gamma - W||^2 summed over
/// penalized layers.
double split_loss(Network& net, const Batch& batch, const std::vector<SlbiLayerState>& states,
                  const SlbiHyper& hyper);

/// One coupled iteration over a mini-batch. All gradients are evaluated at
/// the pre-update iterate, then:
///   unpenalized params:  p -= alpha * dL
///   penalized W:         W -= kappa*alpha * (dL + (W - Gamma)/nu)
///   Z += alpha * (W_old - Gamma)/nu
///   Gamma = kappa * prox(Z)
/// Throws DivergenceError on non-finite gradients.
void slbi_step(Network& net, const Batch& batch, std::vector<SlbiLayerState>& states,
               const SlbiHyper& hyper, std::size_t step_index = 0);

/// Appends one epoch row per penalized layer; sets first_entry on first
/// activation of a group.
void record_path(const Network& net, const std::vector<SlbiLayerState>& states,
                 int epoch, SolutionPath& path);

struct TrainHooks {
    /// Runs after each epoch's path record; may mutate net/states (expansion).
    std::function<void(int epoch)> after_epoch;
};

struct TrainResult {
    SolutionPath path;
    std::size_t epochs_run = 0;
    double best_val_accuracy = 0.0;
    int best_epoch = -1;          // 1-based; -1 if no validation used
    double final_train_loss = 0.0;
    // snapshot at the best validation epoch (null when no validation set)
    std::shared_ptr<Network> best_net;
    std::vector<SlbiLayerState> best_states;
};

/// Shuffled mini-batch training with per-epoch path recording, early
/// stopping on validation accuracy, and a divergence guard (loss above 10x
/// its initial value for 3 consecutive epochs aborts).
TrainResult run_training(Network& net, const Dataset& train, const Dataset* val,
                         std::vector<SlbiLayerState>& states, const SlbiHyper& hyper,
                         Rng& rng, const TrainHooks& hooks = {});

/// CSV: epoch,layer,group,gamma_norm,w_norm,support,first_entry_epoch
void write_path_csv(const SolutionPath& path, std::ostream& out);
SolutionPath read_path_csv(std::istream& in);

}  // namespace slbi
