#pragma once

#include <string>
#include <vector>

#include "slbi/network.hpp"
#include "slbi/tensor.hpp"

namespace slbi {

struct FormatError : std::runtime_error {
    FormatError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

/// Images (N,C,H,W) scaled to [0,1] plus integer labels. `targets` is
/// filled instead of labels for regression tasks.
struct Dataset {
    Tensor images;
    std::vector<int> labels;
    Tensor targets;
    std::string split;

    std::size_t size() const { return labels.empty() ? (targets.numel() ? targets.dim(0) : 0) : labels.size(); }
};

/// Parses the big-endian IDX pair (images magic 0x803, labels 0x801).
/// Returns {train, test}; shapes 1x28x28, pixels divided by 255.
std::pair<Dataset, Dataset> load_mnist(const std::string& dir);

/// Parses data_batch_1..5.bin + test_batch.bin of 3073-byte records
/// (1 label byte + 3072 channel-major pixels).
std::pair<Dataset, Dataset> load_cifar10(const std::string& dir);

/// Seeded shuffle then split; the two parts are disjoint and exhaustive.
std::pair<Dataset, Dataset> split_validation(const Dataset& train, double fraction, Rng& rng);

/// Keep only the first n samples (no-op if n == 0 or n >= size).
Dataset limit_dataset(const Dataset& d, std::size_t n);

/// Sparse linear regression with known ground truth: X ~ N(0,1) i.i.d.,
/// beta has s nonzeros of magnitude b, y = X beta + sigma * noise.
struct SynthLinearTask {
    Tensor x;       // (n, p)
    Tensor y;       // (n, 1)
    Tensor beta;    // (p)
    std::vector<std::size_t> support;

    /// View as a Dataset with images (n,p,1,1) and regression targets.
    Dataset as_dataset() const;
};

SynthLinearTask gen_synth(std::size_t n, std::size_t p, std::size_t s, double b,
                          double sigma, Rng& rng);

/// Batch of the rows picked by `indices`.
Batch make_batch(const Dataset& d, const std::vector<std::size_t>& indices);

}  // namespace slbi
