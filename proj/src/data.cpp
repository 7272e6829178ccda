#include "slbi/data.hpp"

#include <cstring>
#include <fstream>

namespace slbi {

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

std::uint32_t be32(const std::vector<unsigned char>& buf, std::size_t off) {
    if (off + 4 > buf.size()) throw FormatError("truncated header", off);
    return (std::uint32_t(buf[off]) << 24) | (std::uint32_t(buf[off + 1]) << 16) |
           (std::uint32_t(buf[off + 2]) << 8) | std::uint32_t(buf[off + 3]);
}

Dataset load_idx_pair(const std::string& images_path, const std::string& labels_path,
                      const std::string& split) {
    const auto img = read_file(images_path);
    if (be32(img, 0) != 0x00000803u) throw FormatError("bad IDX image magic in " + images_path, 0);
    const std::size_t n = be32(img, 4), h = be32(img, 8), w = be32(img, 12);
    if (img.size() != 16 + n * h * w)
        throw FormatError("truncated IDX image file " + images_path, img.size());

    const auto lab = read_file(labels_path);
    if (be32(lab, 0) != 0x00000801u) throw FormatError("bad IDX label magic in " + labels_path, 0);
    if (be32(lab, 4) != n) throw FormatError("label count mismatch in " + labels_path, 4);
    if (lab.size() != 8 + n) throw FormatError("truncated IDX label file " + labels_path, lab.size());

    Dataset d;
    d.split = split;
    d.images = Tensor({n, 1, h, w});
    for (std::size_t i = 0; i < n * h * w; ++i)
        d.images[i] = static_cast<double>(img[16 + i]) / 255.0;
    d.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.labels[i] = lab[8 + i];
    return d;
}

}  // namespace

std::pair<Dataset, Dataset> load_mnist(const std::string& dir) {
    Dataset train = load_idx_pair(dir + "/train-images-idx3-ubyte",
                                  dir + "/train-labels-idx1-ubyte", "train");
    Dataset test = load_idx_pair(dir + "/t10k-images-idx3-ubyte",
                                 dir + "/t10k-labels-idx1-ubyte", "test");
    return {std::move(train), std::move(test)};
}

namespace {

constexpr std::size_t kCifarRecord = 3073;  // 1 label + 3*32*32 pixels

void append_cifar_file(const std::string& path, std::vector<double>& pixels,
                       std::vector<int>& labels) {
    const auto buf = read_file(path);
    if (buf.size() % kCifarRecord != 0)
        throw FormatError("record-length mismatch in " + path, buf.size() - buf.size() % kCifarRecord);
    const std::size_t n = buf.size() / kCifarRecord;
    for (std::size_t r = 0; r < n; ++r) {
        const unsigned char* rec = buf.data() + r * kCifarRecord;
        if (rec[0] > 9) throw FormatError("label out of range in " + path, r * kCifarRecord);
        labels.push_back(rec[0]);
        for (std::size_t i = 0; i < kCifarRecord - 1; ++i)
            pixels.push_back(static_cast<double>(rec[1 + i]) / 255.0);
    }
}

Dataset cifar_dataset(std::vector<double> pixels, std::vector<int> labels, const std::string& split) {
    Dataset d;
    d.split = split;
    d.labels = std::move(labels);
    d.images = Tensor::from({d.labels.size(), 3, 32, 32}, std::move(pixels));
    return d;
}

}  // namespace

std::pair<Dataset, Dataset> load_cifar10(const std::string& dir) {
    std::vector<double> px;
    std::vector<int> lab;
    for (int b = 1; b <= 5; ++b)
        append_cifar_file(dir + "/data_batch_" + std::to_string(b) + ".bin", px, lab);
    Dataset train = cifar_dataset(std::move(px), std::move(lab), "train");
    std::vector<double> tpx;
    std::vector<int> tlab;
    append_cifar_file(dir + "/test_batch.bin", tpx, tlab);
    Dataset test = cifar_dataset(std::move(tpx), std::move(tlab), "test");
    return {std::move(train), std::move(test)};
}

namespace {

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows, const std::string& split) {
    Dataset out;
    out.split = split;
    const std::size_t img = d.images.numel() / d.images.dim(0);
    Shape s = d.images.shape();
    s[0] = rows.size();
    out.images = Tensor(std::move(s));
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::memcpy(out.images.data() + i * img, d.images.data() + rows[i] * img,
                    img * sizeof(double));
    if (!d.labels.empty()) {
        out.labels.reserve(rows.size());
        for (std::size_t r : rows) out.labels.push_back(d.labels[r]);
    }
    if (d.targets.numel()) {
        const std::size_t td = d.targets.numel() / d.targets.dim(0);
        out.targets = Tensor({rows.size(), td});
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::memcpy(out.targets.data() + i * td, d.targets.data() + rows[i] * td,
                        td * sizeof(double));
    }
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split_validation(const Dataset& train, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split_validation: fraction must be in (0,1)");
    const std::size_t n = train.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    rng.shuffle(idx);
    const std::size_t nval = static_cast<std::size_t>(fraction * static_cast<double>(n));
    const std::vector<std::size_t> val_rows(idx.begin(), idx.begin() + nval);
    const std::vector<std::size_t> train_rows(idx.begin() + nval, idx.end());
    return {take_rows(train, train_rows, "train"), take_rows(train, val_rows, "val")};
}

Dataset limit_dataset(const Dataset& d, std::size_t n) {
    if (n == 0 || n >= d.size()) return d;
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    return take_rows(d, rows, d.split);
}

Dataset SynthLinearTask::as_dataset() const {
    Dataset d;
    d.split = "train";
    const std::size_t n = x.dim(0), p = x.dim(1);
    d.images = x.reshaped({n, p, 1, 1});
    d.targets = y;
    return d;
}

SynthLinearTask gen_synth(std::size_t n, std::size_t p, std::size_t s, double b,
                          double sigma, Rng& rng) {
    if (s > p) throw std::invalid_argument("gen_synth: s > p");
    SynthLinearTask t;
    t.x = Tensor({n, p});
    for (std::size_t i = 0; i < n * p; ++i) t.x[i] = rng.gaussian();
    t.beta = Tensor({p});
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    rng.shuffle(idx);
    t.support.assign(idx.begin(), idx.begin() + s);
    std::sort(t.support.begin(), t.support.end());
    for (std::size_t i : t.support) t.beta[i] = b;
    t.y = matmul(t.x, t.beta.reshaped({p, 1}));
    for (std::size_t i = 0; i < n; ++i) t.y[i] += sigma * rng.gaussian();
    return t;
}

Batch make_batch(const Dataset& d, const std::vector<std::size_t>& indices) {
    Batch b;
    Shape s = d.images.shape();
    s[0] = indices.size();
    const std::size_t img = d.images.numel() / d.images.dim(0);
    b.inputs = Tensor(std::move(s));
    for (std::size_t i = 0; i < indices.size(); ++i)
        std::memcpy(b.inputs.data() + i * img, d.images.data() + indices[i] * img,
                    img * sizeof(double));
    if (!d.labels.empty()) {
        b.labels.reserve(indices.size());
        for (std::size_t r : indices) b.labels.push_back(d.labels[r]);
    }
    if (d.targets.numel()) {
        const std::size_t td = d.targets.numel() / d.targets.dim(0);
        b.targets = Tensor({indices.size(), td});
        for (std::size_t i = 0; i < indices.size(); ++i)
            std::memcpy(b.targets.data() + i * td, d.targets.data() + indices[i] * td,
                        td * sizeof(double));
    }
    return b;
}

}  // namespace slbi
