#pragma once

#include <map>
#include <string>
#include <vector>

#include "slbi/network.hpp"
#include "slbi/penalty.hpp"

namespace slbi {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Architecture mini-language: tokens joined by '-', e.g.
///   conv:5x5x5-relu-pool:2-flatten-fc:10
///   conv:6x5x5p2-relu-pool:2-conv:16x5x5-...
/// conv:OUTxKHxKW with optional pP padding suffix; pool:N is an NxN/stride-N
/// max pool; fc:OUT infers its input width.
std::vector<LayerSpec> parse_arch(const std::string& arch);

/// Names parametric layers conv1, conv2, ..., fc1, fc2, ... in order;
/// returns name -> layer index.
std::map<std::string, std::size_t> layer_names(const std::vector<LayerSpec>& layers);

/// Flat key=value experiment configuration. Unknown keys are rejected;
/// parse(print(c)) == c.
struct RunConfig {
    std::string arch = "conv:5x5x5-relu-pool:2-flatten-fc:10";
    std::string input = "1x28x28";
    std::string loss = "softmax_ce";
    bool use_bias = true;

    std::string penalized = "conv1:group";  // name:kind comma list; empty = none

    double kappa = 1.0;
    double nu = 10.0;
    double alpha = 0.0;  // 0 = default 0.01/kappa
    std::size_t batch_size = 64;
    std::size_t epochs = 20;
    std::size_t patience = 10;
    std::uint64_t seed = 1;

    std::string data = "mnist";  // mnist | cifar10 | synth
    std::string data_dir = "data";
    std::size_t limit = 0;  // 0 = all samples
    double val_fraction = 0.2;

    bool forward_selection = false;
    double threshold = 0.8;
    std::size_t expand_m = 2;
    std::size_t max_filters = 64;
    std::size_t cooldown = 1;

    double lambda1 = 1.0;
    double lambda2 = 1.0;
    bool normalized_importance = true;
    bool global_rank = false;
    std::string rates = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::string criteria = "sc";  // sc | magnitude | entry | random comma list

    std::size_t synth_n = 200, synth_p = 50, synth_s = 5;
    double synth_b = 2.0, synth_sigma = 0.1;

    std::string out_dir = "out";

    static RunConfig parse_file(const std::string& path);
    void apply_override(const std::string& key_value);  // "key=value"
    std::string print() const;                          // canonical form

    Shape input_shape() const;
    std::vector<std::pair<std::size_t, PenaltyKind>> penalized_layers(
        const std::vector<LayerSpec>& layers) const;
    std::vector<double> rate_list() const;
    std::vector<std::string> criteria_list() const;
};

}  // namespace slbi
