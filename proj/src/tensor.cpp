#include "slbi/tensor.hpp"

#include <cmath>
#include <numeric>

namespace slbi {

std::size_t shape_numel(const Shape& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
}

std::string shape_str(const Shape& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
    for (std::size_t d : shape_)
        if (d == 0) throw std::invalid_argument("Tensor: zero dimension in " + shape_str(shape_));
    data_.assign(shape_numel(shape_), fill);
}

Tensor Tensor::from(Shape shape, std::vector<double> values) {
    if (shape_numel(shape) != values.size())
        throw std::invalid_argument("Tensor::from: " + std::to_string(values.size()) +
                                    " values for shape " + shape_str(shape));
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = std::move(values);
    return t;
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Tensor::fill(double v) { data_.assign(data_.size(), v); }

Tensor Tensor::reshaped(Shape s) const {
    if (shape_numel(s) != numel())
        throw std::invalid_argument("reshape: element count mismatch " + shape_str(shape_) +
                                    " -> " + shape_str(s));
    Tensor t = *this;
    t.shape_ = std::move(s);
    return t;
}

double Tensor::squared_l2() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
}

double Tensor::l2_norm() const { return std::sqrt(squared_l2()); }

static void require_matrix(const Tensor& t, const char* who) {
    if (t.ndim() != 2) throw std::invalid_argument(std::string(who) + ": expected 2-d tensor, got " + shape_str(t.shape()));
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_matrix(a, "matmul");
    require_matrix(b, "matmul");
    const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    if (b.dim(0) != k)
        throw std::invalid_argument("matmul: inner dims " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
    Tensor c({m, n});
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = pc + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double aik = pa[i * k + kk];
            if (aik == 0.0) continue;
            const double* brow = pb + kk * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    require_matrix(a, "matmul_nt");
    require_matrix(b, "matmul_nt");
    const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(0);
    if (b.dim(1) != k)
        throw std::invalid_argument("matmul_nt: inner dims " + shape_str(a.shape()) + " x " + shape_str(b.shape()) + "^T");
    Tensor c({m, n});
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = pa + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = pb + j * k;
            double s = 0.0;
            for (std::size_t kk = 0; kk < k; ++kk) s += arow[kk] * brow[kk];
            pc[i * n + j] = s;
        }
    }
    return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    require_matrix(a, "matmul_tn");
    require_matrix(b, "matmul_tn");
    const std::size_t k = a.dim(0), m = a.dim(1), n = b.dim(1);
    if (b.dim(0) != k)
        throw std::invalid_argument("matmul_tn: inner dims " + shape_str(a.shape()) + "^T x " + shape_str(b.shape()));
    Tensor c({m, n});
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    for (std::size_t kk = 0; kk < k; ++kk) {
        const double* arow = pa + kk * m;
        const double* brow = pb + kk * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double aik = arow[i];
            if (aik == 0.0) continue;
            double* crow = pc + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

GroupIndex GroupIndex::contiguous(std::size_t numel, std::size_t group_count) {
    if (group_count == 0 || numel % group_count != 0)
        throw std::invalid_argument("GroupIndex::contiguous: " + std::to_string(numel) +
                                    " elements not divisible into " + std::to_string(group_count) + " groups");
    GroupIndex gi;
    const std::size_t per = numel / group_count;
    gi.groups.resize(group_count);
    for (std::size_t g = 0; g < group_count; ++g) {
        gi.groups[g].resize(per);
        std::iota(gi.groups[g].begin(), gi.groups[g].end(), g * per);
    }
    return gi;
}

GroupIndex GroupIndex::singletons(std::size_t numel) {
    GroupIndex gi;
    gi.groups.resize(numel);
    for (std::size_t i = 0; i < numel; ++i) gi.groups[i] = {i};
    return gi;
}

void GroupIndex::validate_partition(std::size_t numel) const {
    std::vector<char> seen(numel, 0);
    std::size_t total = 0;
    for (const auto& g : groups) {
        for (std::size_t idx : g) {
            if (idx >= numel) throw std::out_of_range("GroupIndex: index " + std::to_string(idx) + " out of range");
            if (seen[idx]) throw std::invalid_argument("GroupIndex: index " + std::to_string(idx) + " owned twice");
            seen[idx] = 1;
            ++total;
        }
    }
    if (total != numel) throw std::invalid_argument("GroupIndex: groups do not cover the tensor");
}

Tensor group_l2_norm(const Tensor& t, const GroupIndex& groups) {
    Tensor out({groups.size() == 0 ? 1 : groups.size()});
    if (groups.size() == 0) throw std::invalid_argument("group_l2_norm: empty GroupIndex");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double s = 0.0;
        for (std::size_t idx : groups.groups[g]) {
            if (idx >= t.numel()) throw std::out_of_range("group_l2_norm: index out of range");
            s += t[idx] * t[idx];
        }
        out[g] = std::sqrt(s);
    }
    return out;
}

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    // (0,1): 53-bit mantissa offset by half an ulp, never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

Tensor gaussian_init(Rng& rng, Shape shape, std::size_t fan_in) {
    if (fan_in == 0) throw std::invalid_argument("gaussian_init: fan_in must be positive");
    Tensor t(std::move(shape));
    const double sd = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = sd * rng.gaussian();
    return t;
}

}  // namespace slbi
