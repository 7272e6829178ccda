#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slbi {

using Shape = std::vector<std::size_t>;

/// Dense row-major tensor of doubles. The single numeric carrier for
/// weights, gradients and optimizer state. Reductions always run in a
/// fixed left-to-right order so results are bit-reproducible.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    static Tensor from(Shape shape, std::vector<double> values);

    const Shape& shape() const { return shape_; }
    std::size_t ndim() const { return shape_.size(); }
    std::size_t numel() const { return data_.size(); }
    std::size_t dim(std::size_t i) const { return shape_.at(i); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool all_finite() const;

    void fill(double v);
    Tensor reshaped(Shape s) const;

    double l2_norm() const;
    double squared_l2() const;

private:
    Shape shape_;
    std::vector<double> data_;
};

std::size_t shape_numel(const Shape& s);
std::string shape_str(const Shape& s);

/// a: (m,k), b: (k,n) -> (m,n). Inner sum runs k ascending.
Tensor matmul(const Tensor& a, const Tensor& b);
/// a: (m,k), b: (n,k) -> (m,n) == a * b^T.
Tensor matmul_nt(const Tensor& a, const Tensor& b);
/// a: (k,m), b: (k,n) -> (m,n) == a^T * b.
Tensor matmul_tn(const Tensor& a, const Tensor& b);

/// Disjoint flat-index groups covering a tensor exactly once.
struct GroupIndex {
    std::vector<std::vector<std::size_t>> groups;

    static GroupIndex contiguous(std::size_t numel, std::size_t group_count);
    static GroupIndex singletons(std::size_t numel);

    std::size_t size() const { return groups.size(); }
    void validate_partition(std::size_t numel) const;
};

/// Per-group Euclidean norms; result shape (G).
Tensor group_l2_norm(const Tensor& t, const GroupIndex& groups);

/// SplitMix64: tiny counter-based generator with published test vectors.
/// Same seed gives the same sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in (0,1).
    double uniform();
    /// Standard normal via Box-Muller (two uniforms per call).
    double gaussian();
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// He-style init: i.i.d. N(0, 2/fan_in).
Tensor gaussian_init(Rng& rng, Shape shape, std::size_t fan_in);

}  // namespace slbi
