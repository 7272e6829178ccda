#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "slbi/tensor.hpp"

namespace slbi {

struct Conv {
    std::size_t out_channels = 1;
    std::size_t kh = 3, kw = 3;
    std::size_t stride = 1;
    std::size_t pad = 0;
};
struct MaxPool {
    std::size_t window = 2;
    std::size_t stride = 2;
};
struct Dense {
    std::size_t in_dim = 0;  // 0: inferred from the incoming shape
    std::size_t out_dim = 1;
};
struct Relu {};
struct Flatten {};

using LayerSpec = std::variant<Conv, MaxPool, Relu, Flatten, Dense>;

enum class LossKind { SoftmaxCrossEntropy, SquaredError };

/// One mini-batch. Classification fills `labels`; regression fills
/// `targets` (N x K). Inputs are (N,C,H,W), already in [0,1] for images.
struct Batch {
    Tensor inputs;
    std::vector<int> labels;
    Tensor targets;

    std::size_t size() const { return inputs.numel() == 0 ? 0 : inputs.dim(0); }
};

/// One Tensor per parametric layer, same shapes as the weights/biases.
struct Gradients {
    std::vector<Tensor> weights;
    std::vector<Tensor> biases;

    bool all_finite() const;
};

struct ForwardResult {
    Tensor logits;  // (N,K)
    double loss = 0.0;
};

/// Feed-forward net with exact hand-written backprop.
///
/// Conv weights are stored (out_channels, in_channels*kh*kw) so one output
/// filter is one contiguous row; Dense weights are (out_dim, in_dim).
/// Biases exist per conv/dense layer (switchable off) and are never
/// penalized by the optimizers.
class Network {
public:
    Network(std::vector<LayerSpec> layers, Shape input_chw, LossKind loss,
            Rng& rng, bool use_bias = true);

    const std::vector<LayerSpec>& layers() const { return layers_; }
    LossKind loss_kind() const { return loss_; }
    bool use_bias() const { return use_bias_; }
    const Shape& input_shape() const { return input_shape_; }

    /// Shape (without the batch dim) entering layer l; index layer_count()
    /// is the output shape.
    const std::vector<Shape>& boundary_shapes() const { return shapes_; }

    std::size_t param_slot_count() const { return weights_.size(); }
    /// Slot of a parametric (conv/dense) layer, or nullopt.
    std::optional<std::size_t> slot_of_layer(std::size_t layer_index) const;
    std::size_t layer_of_slot(std::size_t slot) const { return slot_layer_[slot]; }

    Tensor& weight(std::size_t slot) { return weights_[slot]; }
    const Tensor& weight(std::size_t slot) const { return weights_[slot]; }
    Tensor& bias(std::size_t slot) { return biases_[slot]; }
    const Tensor& bias(std::size_t slot) const { return biases_[slot]; }

    std::size_t param_count() const;
    std::size_t nonzero_param_count() const;

    ForwardResult forward(const Batch& batch);
    /// Exact gradient of the loss w.r.t. every parameter. Requires a prior
    /// forward on the same batch.
    Gradients backward(const Batch& batch);

    /// Grow a conv layer to new_out_channels, preserving existing filters
    /// exactly and He-initializing the new ones plus the matching new input
    /// slices of the next parametric layer.
    void resize_conv(std::size_t layer_index, std::size_t new_out_channels, Rng& rng);

    /// Zero output filter g of a conv layer together with the downstream
    /// consumer's input slice for that channel.
    void zero_filter(std::size_t layer_index, std::size_t g);

    /// Flat weight indices of the downstream input slice fed by channel g
    /// of the given conv layer (indices into the next parametric layer's
    /// weight tensor).
    std::vector<std::size_t> downstream_slice(std::size_t layer_index, std::size_t g) const;

    /// Groups of a conv layer's weight tensor: one group per output filter.
    GroupIndex filter_groups(std::size_t layer_index) const;

private:
    void infer_shapes();
    std::size_t conv_in_channels(std::size_t layer_index) const;
    std::size_t next_param_layer(std::size_t layer_index) const;

    std::vector<LayerSpec> layers_;
    Shape input_shape_;
    LossKind loss_;
    bool use_bias_;

    std::vector<Tensor> weights_, biases_;
    std::vector<std::size_t> slot_layer_;  // slot -> layer index

    std::vector<Shape> shapes_;  // layer_count()+1 boundaries

    // forward caches
    bool forward_done_ = false;
    std::size_t cached_batch_ = 0;
    std::vector<Tensor> acts_;                          // per boundary, (N, numel)
    std::vector<std::vector<double>> im2col_cache_;     // per layer
    std::vector<std::vector<std::uint32_t>> pool_argmax_;  // per layer
    Tensor dlogits_;
};

/// Argmax-of-logits match rate over a labeled set; batches internally.
double accuracy(Network& net, const Tensor& images, const std::vector<int>& labels,
                std::size_t batch_size = 256);

}  // namespace slbi
