#include "slbi/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace slbi {

namespace {

// C(m,n) += A(m,k) * B(k,n), inner sum k ascending.
void gemm_acc(double* c, const double* a, const double* b,
              std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double aik = a[i * k + kk];
            if (aik == 0.0) continue;
            const double* brow = b + kk * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

// C(m,n) += A(m,p) * B(n,p)^T, inner sum p ascending.
void gemm_nt_acc(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t p, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * p;
        double* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = b + j * p;
            double s = 0.0;
            for (std::size_t pp = 0; pp < p; ++pp) s += arow[pp] * brow[pp];
            crow[j] += s;
        }
    }
}

}  // namespace

bool Gradients::all_finite() const {
    for (const auto& t : weights)
        if (!t.all_finite()) return false;
    for (const auto& t : biases)
        if (!t.all_finite()) return false;
    return true;
}

Network::Network(std::vector<LayerSpec> layers, Shape input_chw, LossKind loss,
                 Rng& rng, bool use_bias)
    : layers_(std::move(layers)), input_shape_(std::move(input_chw)),
      loss_(loss), use_bias_(use_bias) {
    if (input_shape_.size() != 3)
        throw std::invalid_argument("Network: input shape must be (C,H,W)");
    infer_shapes();
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        if (const Conv* cv = std::get_if<Conv>(&layers_[l])) {
            const std::size_t in_c = shapes_[l][0];
            const std::size_t k = in_c * cv->kh * cv->kw;
            weights_.push_back(gaussian_init(rng, {cv->out_channels, k}, k));
            biases_.push_back(Tensor({cv->out_channels}));
            slot_layer_.push_back(l);
        } else if (const Dense* d = std::get_if<Dense>(&layers_[l])) {
            weights_.push_back(gaussian_init(rng, {d->out_dim, d->in_dim}, d->in_dim));
            biases_.push_back(Tensor({d->out_dim}));
            slot_layer_.push_back(l);
        }
    }
    im2col_cache_.resize(layers_.size());
    pool_argmax_.resize(layers_.size());
}

void Network::infer_shapes() {
    shapes_.assign(1, input_shape_);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Shape& in = shapes_.back();
        Shape out;
        if (Conv* cv = std::get_if<Conv>(&layers_[l])) {
            if (in.size() != 3)
                throw std::invalid_argument("conv layer " + std::to_string(l) + ": needs (C,H,W) input, got " + shape_str(in));
            if (in[1] + 2 * cv->pad < cv->kh || in[2] + 2 * cv->pad < cv->kw)
                throw std::invalid_argument("conv layer " + std::to_string(l) + ": kernel larger than padded input");
            out = {cv->out_channels,
                   (in[1] + 2 * cv->pad - cv->kh) / cv->stride + 1,
                   (in[2] + 2 * cv->pad - cv->kw) / cv->stride + 1};
        } else if (MaxPool* mp = std::get_if<MaxPool>(&layers_[l])) {
            if (in.size() != 3 || in[1] < mp->window || in[2] < mp->window)
                throw std::invalid_argument("maxpool layer " + std::to_string(l) + ": bad input " + shape_str(in));
            out = {in[0], (in[1] - mp->window) / mp->stride + 1,
                   (in[2] - mp->window) / mp->stride + 1};
        } else if (std::holds_alternative<Relu>(layers_[l])) {
            out = in;
        } else if (std::holds_alternative<Flatten>(layers_[l])) {
            out = {shape_numel(in)};
        } else {
            Dense& d = std::get<Dense>(layers_[l]);
            if (in.size() != 1)
                throw std::invalid_argument("dense layer " + std::to_string(l) + ": needs flat input, got " + shape_str(in) + " (missing flatten?)");
            if (d.in_dim == 0) d.in_dim = in[0];
            if (d.in_dim != in[0])
                throw std::invalid_argument("dense layer " + std::to_string(l) + ": in_dim " + std::to_string(d.in_dim) + " vs incoming " + std::to_string(in[0]));
            out = {d.out_dim};
        }
        shapes_.push_back(std::move(out));
    }
}

std::optional<std::size_t> Network::slot_of_layer(std::size_t layer_index) const {
    for (std::size_t s = 0; s < slot_layer_.size(); ++s)
        if (slot_layer_[s] == layer_index) return s;
    return std::nullopt;
}

std::size_t Network::param_count() const {
    std::size_t n = 0;
    for (const auto& w : weights_) n += w.numel();
    if (use_bias_)
        for (const auto& b : biases_) n += b.numel();
    return n;
}

std::size_t Network::nonzero_param_count() const {
    std::size_t n = 0;
    for (const auto& w : weights_)
        for (std::size_t i = 0; i < w.numel(); ++i) n += w[i] != 0.0;
    if (use_bias_)
        for (const auto& b : biases_)
            for (std::size_t i = 0; i < b.numel(); ++i) n += b[i] != 0.0;
    return n;
}

ForwardResult Network::forward(const Batch& batch) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("forward: empty batch");
    if (batch.inputs.ndim() != 4 || batch.inputs.dim(1) != input_shape_[0] ||
        batch.inputs.dim(2) != input_shape_[1] || batch.inputs.dim(3) != input_shape_[2])
        throw std::invalid_argument("forward: batch shape " + shape_str(batch.inputs.shape()) +
                                    " does not match input " + shape_str(input_shape_));

    acts_.assign(layers_.size() + 1, Tensor());
    acts_[0] = batch.inputs.reshaped({n, shape_numel(input_shape_)});

    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Tensor& x = acts_[l];
        const Shape& ins = shapes_[l];
        const Shape& outs = shapes_[l + 1];
        if (const Conv* cv = std::get_if<Conv>(&layers_[l])) {
            const std::size_t in_c = ins[0], h = ins[1], w = ins[2];
            const std::size_t oc = outs[0], oh = outs[1], ow = outs[2];
            const std::size_t k = in_c * cv->kh * cv->kw, p = oh * ow;
            const std::size_t slot = *slot_of_layer(l);
            const Tensor& wt = weights_[slot];
            Tensor y({n, oc * p});
            auto& cols = im2col_cache_[l];
            cols.assign(n * k * p, 0.0);
            for (std::size_t s = 0; s < n; ++s) {
                const double* xs = x.data() + s * in_c * h * w;
                double* col = cols.data() + s * k * p;
                for (std::size_t c = 0; c < in_c; ++c) {
                    const double* plane = xs + c * h * w;
                    for (std::size_t ki = 0; ki < cv->kh; ++ki)
                        for (std::size_t kj = 0; kj < cv->kw; ++kj) {
                            double* crow = col + ((c * cv->kh + ki) * cv->kw + kj) * p;
                            for (std::size_t oy = 0; oy < oh; ++oy) {
                                const long iy = static_cast<long>(oy * cv->stride + ki) - static_cast<long>(cv->pad);
                                if (iy < 0 || iy >= static_cast<long>(h)) continue;
                                for (std::size_t ox = 0; ox < ow; ++ox) {
                                    const long ix = static_cast<long>(ox * cv->stride + kj) - static_cast<long>(cv->pad);
                                    if (ix < 0 || ix >= static_cast<long>(w)) continue;
                                    crow[oy * ow + ox] = plane[iy * w + ix];
                                }
                            }
                        }
                }
                double* ys = y.data() + s * oc * p;
                gemm_acc(ys, wt.data(), col, oc, k, p);
                if (use_bias_) {
                    const Tensor& b = biases_[slot];
                    for (std::size_t o = 0; o < oc; ++o)
                        for (std::size_t q = 0; q < p; ++q) ys[o * p + q] += b[o];
                }
            }
            acts_[l + 1] = std::move(y);
        } else if (const MaxPool* mp = std::get_if<MaxPool>(&layers_[l])) {
            const std::size_t c = ins[0], h = ins[1], w = ins[2];
            const std::size_t ph = outs[1], pw = outs[2];
            Tensor y({n, c * ph * pw});
            auto& amax = pool_argmax_[l];
            amax.assign(n * c * ph * pw, 0);
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t ch = 0; ch < c; ++ch) {
                    const double* plane = x.data() + (s * c + ch) * h * w;
                    double* yrow = y.data() + s * c * ph * pw + ch * ph * pw;
                    std::uint32_t* arow = amax.data() + (s * c + ch) * ph * pw;
                    for (std::size_t oy = 0; oy < ph; ++oy)
                        for (std::size_t ox = 0; ox < pw; ++ox) {
                            // ties go to the lowest flat index
                            std::size_t best = (oy * mp->stride) * w + ox * mp->stride;
                            double bv = plane[best];
                            for (std::size_t ki = 0; ki < mp->window; ++ki)
                                for (std::size_t kj = 0; kj < mp->window; ++kj) {
                                    const std::size_t idx = (oy * mp->stride + ki) * w + ox * mp->stride + kj;
                                    if (plane[idx] > bv) { bv = plane[idx]; best = idx; }
                                }
                            yrow[oy * pw + ox] = bv;
                            arow[oy * pw + ox] = static_cast<std::uint32_t>(best);
                        }
                }
            acts_[l + 1] = std::move(y);
        } else if (std::holds_alternative<Relu>(layers_[l])) {
            Tensor y = x;
            for (std::size_t i = 0; i < y.numel(); ++i)
                if (y[i] < 0.0) y[i] = 0.0;
            acts_[l + 1] = std::move(y);
        } else if (std::holds_alternative<Flatten>(layers_[l])) {
            acts_[l + 1] = x;  // layout already row-major flat
        } else {
            const std::size_t slot = *slot_of_layer(l);
            Tensor y = matmul_nt(x, weights_[slot]);
            if (use_bias_) {
                const Tensor& b = biases_[slot];
                const std::size_t od = b.numel();
                for (std::size_t s = 0; s < n; ++s)
                    for (std::size_t j = 0; j < od; ++j) y[s * od + j] += b[j];
            }
            acts_[l + 1] = std::move(y);
        }
    }

    const Tensor& out = acts_.back();
    if (shapes_.back().size() != 1)
        throw std::invalid_argument("forward: network output must be flat, got " + shape_str(shapes_.back()));
    const std::size_t kdim = shapes_.back()[0];
    ForwardResult res;
    res.logits = out.reshaped({n, kdim});
    dlogits_ = Tensor({n, kdim});
    double loss = 0.0;
    if (loss_ == LossKind::SoftmaxCrossEntropy) {
        if (batch.labels.size() != n)
            throw std::invalid_argument("forward: labels/batch size mismatch");
        for (std::size_t s = 0; s < n; ++s) {
            const int y = batch.labels[s];
            if (y < 0 || static_cast<std::size_t>(y) >= kdim)
                throw std::invalid_argument("forward: label " + std::to_string(y) + " out of range");
            const double* row = out.data() + s * kdim;
            double mx = row[0];
            for (std::size_t j = 1; j < kdim; ++j) mx = std::max(mx, row[j]);
            double sum = 0.0;
            for (std::size_t j = 0; j < kdim; ++j) sum += std::exp(row[j] - mx);
            loss += mx + std::log(sum) - row[y];
            double* drow = dlogits_.data() + s * kdim;
            for (std::size_t j = 0; j < kdim; ++j)
                drow[j] = std::exp(row[j] - mx) / sum / static_cast<double>(n);
            drow[y] -= 1.0 / static_cast<double>(n);
        }
    } else {
        if (batch.targets.ndim() != 2 || batch.targets.dim(0) != n || batch.targets.dim(1) != kdim)
            throw std::invalid_argument("forward: targets shape mismatch");
        for (std::size_t i = 0; i < n * kdim; ++i) {
            const double d = out[i] - batch.targets[i];
            loss += 0.5 * d * d;
            dlogits_[i] = d / static_cast<double>(n);
        }
    }
    res.loss = loss / static_cast<double>(n);
    forward_done_ = true;
    cached_batch_ = n;
    return res;
}

Gradients Network::backward(const Batch& batch) {
    const std::size_t n = batch.size();
    if (!forward_done_ || cached_batch_ != n)
        throw std::logic_error("backward: forward must run first on this batch");

    Gradients g;
    g.weights.reserve(weights_.size());
    g.biases.reserve(biases_.size());
    for (const auto& w : weights_) g.weights.emplace_back(w.shape());
    for (const auto& b : biases_) g.biases.emplace_back(b.shape());

    Tensor delta = dlogits_;  // (N, K) flattened per sample
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const Shape& ins = shapes_[li];
        const Shape& outs = shapes_[li + 1];
        const Tensor& x = acts_[li];
        if (const Conv* cv = std::get_if<Conv>(&layers_[li])) {
            const std::size_t in_c = ins[0], h = ins[1], w = ins[2];
            const std::size_t oc = outs[0], oh = outs[1], ow = outs[2];
            const std::size_t k = in_c * cv->kh * cv->kw, p = oh * ow;
            const std::size_t slot = *slot_of_layer(li);
            const Tensor& wt = weights_[slot];
            Tensor& dw = g.weights[slot];
            Tensor& db = g.biases[slot];
            Tensor dx({n, in_c * h * w});
            std::vector<double> dcol(k * p);
            for (std::size_t s = 0; s < n; ++s) {
                const double* dy = delta.data() + s * oc * p;
                const double* col = im2col_cache_[li].data() + s * k * p;
                gemm_nt_acc(dw.data(), dy, col, oc, p, k);
                for (std::size_t o = 0; o < oc; ++o) {
                    double acc = 0.0;
                    for (std::size_t q = 0; q < p; ++q) acc += dy[o * p + q];
                    db[o] += acc;
                }
                // dcol = W^T dy
                std::fill(dcol.begin(), dcol.end(), 0.0);
                for (std::size_t o = 0; o < oc; ++o) {
                    const double* wrow = wt.data() + o * k;
                    const double* dyrow = dy + o * p;
                    for (std::size_t kk = 0; kk < k; ++kk) {
                        const double wv = wrow[kk];
                        if (wv == 0.0) continue;
                        double* drow = dcol.data() + kk * p;
                        for (std::size_t q = 0; q < p; ++q) drow[q] += wv * dyrow[q];
                    }
                }
                // col2im scatter-add
                double* dxs = dx.data() + s * in_c * h * w;
                for (std::size_t c = 0; c < in_c; ++c) {
                    double* plane = dxs + c * h * w;
                    for (std::size_t ki = 0; ki < cv->kh; ++ki)
                        for (std::size_t kj = 0; kj < cv->kw; ++kj) {
                            const double* drow = dcol.data() + ((c * cv->kh + ki) * cv->kw + kj) * p;
                            for (std::size_t oy = 0; oy < oh; ++oy) {
                                const long iy = static_cast<long>(oy * cv->stride + ki) - static_cast<long>(cv->pad);
                                if (iy < 0 || iy >= static_cast<long>(h)) continue;
                                for (std::size_t ox = 0; ox < ow; ++ox) {
                                    const long ix = static_cast<long>(ox * cv->stride + kj) - static_cast<long>(cv->pad);
                                    if (ix < 0 || ix >= static_cast<long>(w)) continue;
                                    plane[iy * w + ix] += drow[oy * ow + ox];
                                }
                            }
                        }
                }
            }
            delta = std::move(dx);
        } else if (std::get_if<MaxPool>(&layers_[li])) {
            const std::size_t c = ins[0], h = ins[1], w = ins[2];
            const std::size_t ph = outs[1], pw = outs[2];
            Tensor dx({n, c * h * w});
            const auto& amax = pool_argmax_[li];
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t ch = 0; ch < c; ++ch) {
                    const double* drow = delta.data() + (s * c + ch) * ph * pw;
                    double* plane = dx.data() + (s * c + ch) * h * w;
                    const std::uint32_t* arow = amax.data() + (s * c + ch) * ph * pw;
                    for (std::size_t q = 0; q < ph * pw; ++q) plane[arow[q]] += drow[q];
                }
            delta = std::move(dx);
        } else if (std::holds_alternative<Relu>(layers_[li])) {
            const Tensor& y = acts_[li + 1];
            for (std::size_t i = 0; i < delta.numel(); ++i)
                if (y[i] <= 0.0) delta[i] = 0.0;
        } else if (std::holds_alternative<Flatten>(layers_[li])) {
            // layout unchanged
        } else {
            const std::size_t slot = *slot_of_layer(li);
            const std::size_t od = std::get<Dense>(layers_[li]).out_dim;
            Tensor dmat = delta.reshaped({n, od});
            g.weights[slot] = matmul_tn(dmat, x);
            Tensor& db = g.biases[slot];
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t j = 0; j < od; ++j) db[j] += dmat[s * od + j];
            delta = matmul(dmat, weights_[slot]);
        }
    }
    return g;
}

std::size_t Network::conv_in_channels(std::size_t layer_index) const {
    return shapes_[layer_index][0];
}

std::size_t Network::next_param_layer(std::size_t layer_index) const {
    for (std::size_t l = layer_index + 1; l < layers_.size(); ++l)
        if (std::holds_alternative<Conv>(layers_[l]) || std::holds_alternative<Dense>(layers_[l]))
            return l;
    return layers_.size();
}

void Network::resize_conv(std::size_t layer_index, std::size_t new_out_channels, Rng& rng) {
    Conv* cv = layer_index < layers_.size() ? std::get_if<Conv>(&layers_[layer_index]) : nullptr;
    if (!cv) throw std::invalid_argument("resize_conv: layer " + std::to_string(layer_index) + " is not conv");
    const std::size_t old_g = cv->out_channels;
    if (new_out_channels <= old_g)
        throw std::invalid_argument("resize_conv: cannot shrink (use pruning instead)");
    const std::size_t m = new_out_channels - old_g;

    const std::size_t slot = *slot_of_layer(layer_index);
    const std::size_t k = weights_[slot].dim(1);
    {
        Tensor grown({new_out_channels, k});
        std::memcpy(grown.data(), weights_[slot].data(), old_g * k * sizeof(double));
        const Tensor fresh = gaussian_init(rng, {m, k}, k);
        std::memcpy(grown.data() + old_g * k, fresh.data(), m * k * sizeof(double));
        weights_[slot] = std::move(grown);
        Tensor b({new_out_channels});
        std::memcpy(b.data(), biases_[slot].data(), old_g * sizeof(double));
        biases_[slot] = std::move(b);
    }

    const std::size_t np = next_param_layer(layer_index);
    if (np < layers_.size()) {
        const std::size_t nslot = *slot_of_layer(np);
        Tensor& wn = weights_[nslot];
        if (Dense* d = std::get_if<Dense>(&layers_[np])) {
            // per-channel block of the flattened conv output
            const std::size_t hw = d->in_dim / old_g;
            if (hw * old_g != d->in_dim)
                throw std::logic_error("resize_conv: downstream dense in_dim not channel-divisible");
            const std::size_t new_in = new_out_channels * hw;
            Tensor grown({d->out_dim, new_in});
            const Tensor fresh = gaussian_init(rng, {d->out_dim, m * hw}, new_in);
            for (std::size_t r = 0; r < d->out_dim; ++r) {
                std::memcpy(grown.data() + r * new_in, wn.data() + r * d->in_dim,
                            d->in_dim * sizeof(double));
                std::memcpy(grown.data() + r * new_in + d->in_dim,
                            fresh.data() + r * m * hw, m * hw * sizeof(double));
            }
            wn = std::move(grown);
            d->in_dim = new_in;
        } else {
            const Conv& nc = std::get<Conv>(layers_[np]);
            const std::size_t kk = nc.kh * nc.kw;
            const std::size_t old_k = wn.dim(1);
            const std::size_t new_k = old_k + m * kk;
            Tensor grown({nc.out_channels, new_k});
            const Tensor fresh = gaussian_init(rng, {nc.out_channels, m * kk}, new_k);
            for (std::size_t r = 0; r < nc.out_channels; ++r) {
                std::memcpy(grown.data() + r * new_k, wn.data() + r * old_k, old_k * sizeof(double));
                std::memcpy(grown.data() + r * new_k + old_k, fresh.data() + r * m * kk,
                            m * kk * sizeof(double));
            }
            wn = std::move(grown);
        }
    }

    cv->out_channels = new_out_channels;
    infer_shapes();
    forward_done_ = false;
}

std::vector<std::size_t> Network::downstream_slice(std::size_t layer_index, std::size_t g) const {
    std::vector<std::size_t> out;
    const std::size_t np = next_param_layer(layer_index);
    if (np >= layers_.size()) return out;
    const std::size_t nslot = *slot_of_layer(np);
    const Tensor& wn = weights_[nslot];
    const std::size_t conv_g = std::get<Conv>(layers_[layer_index]).out_channels;
    if (const Dense* d = std::get_if<Dense>(&layers_[np])) {
        const std::size_t hw = d->in_dim / conv_g;
        for (std::size_t r = 0; r < d->out_dim; ++r)
            for (std::size_t q = 0; q < hw; ++q) out.push_back(r * d->in_dim + g * hw + q);
    } else {
        const Conv& nc = std::get<Conv>(layers_[np]);
        const std::size_t kk = nc.kh * nc.kw;
        const std::size_t krow = wn.dim(1);
        for (std::size_t r = 0; r < nc.out_channels; ++r)
            for (std::size_t q = 0; q < kk; ++q) out.push_back(r * krow + g * kk + q);
    }
    return out;
}

void Network::zero_filter(std::size_t layer_index, std::size_t g) {
    const Conv* cv = layer_index < layers_.size() ? std::get_if<Conv>(&layers_[layer_index]) : nullptr;
    if (!cv) throw std::invalid_argument("zero_filter: layer is not conv");
    if (g >= cv->out_channels) throw std::out_of_range("zero_filter: filter index");
    const std::size_t slot = *slot_of_layer(layer_index);
    Tensor& w = weights_[slot];
    const std::size_t k = w.dim(1);
    for (std::size_t i = 0; i < k; ++i) w[g * k + i] = 0.0;
    biases_[slot][g] = 0.0;
    const std::size_t np = next_param_layer(layer_index);
    if (np < layers_.size()) {
        Tensor& wn = weights_[*slot_of_layer(np)];
        for (std::size_t idx : downstream_slice(layer_index, g)) wn[idx] = 0.0;
    }
    forward_done_ = false;
}

GroupIndex Network::filter_groups(std::size_t layer_index) const {
    const Conv* cv = layer_index < layers_.size() ? std::get_if<Conv>(&layers_[layer_index]) : nullptr;
    if (!cv) throw std::invalid_argument("filter_groups: layer is not conv");
    const Tensor& w = weights_[*slot_of_layer(layer_index)];
    return GroupIndex::contiguous(w.numel(), cv->out_channels);
}

double accuracy(Network& net, const Tensor& images, const std::vector<int>& labels,
                std::size_t batch_size) {
    const std::size_t n = labels.size();
    if (n == 0 || images.numel() == 0 || images.dim(0) != n)
        throw std::invalid_argument("accuracy: empty or inconsistent dataset");
    const std::size_t c = images.dim(1), h = images.dim(2), w = images.dim(3);
    const std::size_t img = c * h * w;
    std::size_t hits = 0;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t bn = std::min(batch_size, n - start);
        Batch b;
        b.inputs = Tensor({bn, c, h, w});
        std::memcpy(b.inputs.data(), images.data() + start * img, bn * img * sizeof(double));
        b.labels.assign(labels.begin() + start, labels.begin() + start + bn);
        const ForwardResult fr = net.forward(b);
        const std::size_t kdim = fr.logits.dim(1);
        for (std::size_t s = 0; s < bn; ++s) {
            const double* row = fr.logits.data() + s * kdim;
            std::size_t best = 0;
            for (std::size_t j = 1; j < kdim; ++j)
                if (row[j] > row[best]) best = j;
            hits += static_cast<int>(best) == b.labels[s];
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace slbi
