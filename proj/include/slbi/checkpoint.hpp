#pragma once

#include <map>
#include <string>

#include "slbi/optim.hpp"

namespace slbi {

struct CheckpointMeta {
    int epoch = 0;
    std::uint64_t seed = 0;
    SlbiHyper hyper;
};

/// Everything needed to resume evaluation or prune without retraining.
struct Checkpoint {
    std::vector<LayerSpec> arch;
    Shape input_shape;
    LossKind loss = LossKind::SoftmaxCrossEntropy;
    bool use_bias = true;
    std::vector<Tensor> weights, biases;
    // optional optimizer state per penalized layer
    std::vector<SlbiLayerState> states;
    // per penalized layer: first-entry epoch per group (-1 never)
    std::map<std::size_t, std::vector<int>> first_entry;
    int epochs_run = 0;
    CheckpointMeta meta;

    bool has_slbi_state() const { return !states.empty(); }

    static Checkpoint capture(const Network& net, const std::vector<SlbiLayerState>& states,
                              const SolutionPath& path, const CheckpointMeta& meta);
    /// Rebuild the network (weights restored exactly; full-precision JSON).
    Network restore_network() const;
    /// Synthesizes a SolutionPath carrying only the final first-entry data,
    /// enough for importance scoring.
    SolutionPath restore_path() const;
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace slbi
