#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "slbi/data.hpp"

using namespace slbi;
namespace fs = std::filesystem;

namespace {

void put_u32be(std::ofstream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(b, 4);
}

/// Writes an IDX image/label pair of n 28x28 images with pixel value
/// (i + r*28 + c) % 256 and label i % 10.
void write_idx_pair(const fs::path& dir, const std::string& stem, std::size_t n,
                    std::uint32_t image_magic = 0x803, std::uint32_t label_magic = 0x801,
                    bool truncate_images = false) {
    {
        std::ofstream out(dir / (stem + "-images-idx3-ubyte"), std::ios::binary);
        put_u32be(out, image_magic);
        put_u32be(out, static_cast<std::uint32_t>(n));
        put_u32be(out, 28);
        put_u32be(out, 28);
        const std::size_t total = truncate_images ? n * 784 - 10 : n * 784;
        for (std::size_t i = 0; i < total; ++i) {
            char px = static_cast<char>((i / 784 + i % 784) % 256);
            out.write(&px, 1);
        }
    }
    {
        std::ofstream out(dir / (stem + "-labels-idx1-ubyte"), std::ios::binary);
        put_u32be(out, label_magic);
        put_u32be(out, static_cast<std::uint32_t>(n));
        for (std::size_t i = 0; i < n; ++i) {
            char l = static_cast<char>(i % 10);
            out.write(&l, 1);
        }
    }
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_cifar_file(const fs::path& path, std::size_t records, bool truncate = false) {
    std::ofstream out(path, std::ios::binary);
    for (std::size_t r = 0; r < records; ++r) {
        char label = static_cast<char>(r % 10);
        out.write(&label, 1);
        for (std::size_t i = 0; i < 3072; ++i) {
            char px = static_cast<char>((r + i) % 256);
            out.write(&px, 1);
        }
    }
    if (truncate) {
        out.flush();
        fs::resize_file(path, fs::file_size(path) - 5);
    }
}

}  // namespace

TEST_CASE("idx pair parses with scaled pixels and labels") {
    fs::path dir = fresh_dir("slbi_idx_ok");
    write_idx_pair(dir, "train", 6);
    write_idx_pair(dir, "t10k", 4);
    auto [train, test] = load_mnist(dir.string());
    CHECK(train.size() == 6);
    CHECK(test.size() == 4);
    CHECK(train.images.shape() == Shape{6, 1, 28, 28});
    CHECK(train.labels[3] == 3);
    CHECK(train.images[0] == 0.0);
    CHECK(train.images[1] == doctest::Approx(1.0 / 255.0));
    for (std::size_t i = 0; i < train.images.numel(); ++i) {
        CHECK(train.images[i] >= 0.0);
        CHECK(train.images[i] <= 1.0);
    }
}

TEST_CASE("idx bad magic and truncation are format errors with offsets") {
    fs::path dir = fresh_dir("slbi_idx_magic");
    write_idx_pair(dir, "train", 2, 0x804);
    write_idx_pair(dir, "t10k", 2);
    CHECK_THROWS_AS(load_mnist(dir.string()), FormatError);

    dir = fresh_dir("slbi_idx_trunc");
    write_idx_pair(dir, "train", 2, 0x803, 0x801, /*truncate_images=*/true);
    write_idx_pair(dir, "t10k", 2);
    CHECK_THROWS_AS(load_mnist(dir.string()), FormatError);

    dir = fresh_dir("slbi_idx_mismatch");
    write_idx_pair(dir, "train", 2);
    write_idx_pair(dir, "t10k", 2);
    {  // label count disagrees with image count
        std::ofstream out(dir / "train-labels-idx1-ubyte", std::ios::binary);
        put_u32be(out, 0x801);
        put_u32be(out, 3);
        out.write("\0\1\2", 3);
    }
    CHECK_THROWS_AS(load_mnist(dir.string()), FormatError);
}

TEST_CASE("cifar batches parse channel-major records") {
    fs::path dir = fresh_dir("slbi_cifar_ok");
    for (int i = 1; i <= 5; ++i)
        write_cifar_file(dir / ("data_batch_" + std::to_string(i) + ".bin"), 3);
    write_cifar_file(dir / "test_batch.bin", 2);
    auto [train, test] = load_cifar10(dir.string());
    CHECK(train.size() == 15);
    CHECK(test.size() == 2);
    CHECK(train.images.shape() == Shape{15, 3, 32, 32});
    CHECK(train.labels[1] == 1);
    CHECK(train.images[0] == 0.0);  // record 0, pixel 0 -> (0+0)%256
    CHECK(train.images[1] == doctest::Approx(1.0 / 255.0));
    // record 1 starts at image 1: first pixel (1+0)%256 = 1
    CHECK(train.images[3072] == doctest::Approx(1.0 / 255.0));
}

TEST_CASE("cifar truncated record is a format error") {
    fs::path dir = fresh_dir("slbi_cifar_trunc");
    for (int i = 1; i <= 5; ++i)
        write_cifar_file(dir / ("data_batch_" + std::to_string(i) + ".bin"), 2);
    write_cifar_file(dir / "test_batch.bin", 2, /*truncate=*/true);
    CHECK_THROWS_AS(load_cifar10(dir.string()), FormatError);
}

TEST_CASE("validation split is disjoint, exhaustive, and seeded") {
    fs::path dir = fresh_dir("slbi_idx_split");
    write_idx_pair(dir, "train", 10);
    write_idx_pair(dir, "t10k", 2);
    auto [train, test] = load_mnist(dir.string());

    Rng rng(5);
    auto [a, b] = split_validation(train, 0.3, rng);
    CHECK(a.size() == 7);
    CHECK(b.size() == 3);
    std::vector<int> counts(10, 0);
    for (int l : a.labels) ++counts[l];
    for (int l : b.labels) ++counts[l];
    for (int c : counts) CHECK(c == 1);  // each original sample exactly once

    Rng rng2(5);
    auto [a2, b2] = split_validation(train, 0.3, rng2);
    CHECK(a.labels == a2.labels);
}

TEST_CASE("limit keeps a prefix") {
    fs::path dir = fresh_dir("slbi_idx_limit");
    write_idx_pair(dir, "train", 8);
    write_idx_pair(dir, "t10k", 2);
    auto [train, test] = load_mnist(dir.string());
    Dataset l = limit_dataset(train, 3);
    CHECK(l.size() == 3);
    CHECK(l.labels == std::vector<int>{0, 1, 2});
    CHECK(limit_dataset(train, 0).size() == 8);
    CHECK(limit_dataset(train, 99).size() == 8);
}

TEST_CASE("synthetic task ground truth") {
    Rng rng(7);
    SynthLinearTask noiseless = gen_synth(30, 10, 3, 2.0, 0.0, rng);
    CHECK(noiseless.support.size() == 3);
    for (std::size_t i = 0; i < 30; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < 10; ++j) pred += noiseless.x[i * 10 + j] * noiseless.beta[j];
        CHECK(noiseless.y[i] == doctest::Approx(pred).epsilon(1e-12));
    }

    Rng r1(9), r2(9);
    SynthLinearTask t1 = gen_synth(20, 8, 2, 1.0, 0.1, r1);
    SynthLinearTask t2 = gen_synth(20, 8, 2, 1.0, 0.1, r2);
    CHECK(t1.support == t2.support);
    for (std::size_t i = 0; i < t1.y.numel(); ++i) CHECK(t1.y[i] == t2.y[i]);

    Dataset d = t1.as_dataset();
    CHECK(d.images.shape() == Shape{20, 8, 1, 1});
    CHECK(d.targets.shape() == Shape{20, 1});
    CHECK_THROWS(gen_synth(10, 4, 5, 1.0, 0.1, rng));  // s > p
}

TEST_CASE("real mnist golden values when the corpus is present") {
    const char* env = std::getenv("SLBI_MNIST_DIR");
    std::string dir = env ? env : "/root/data/mnist";
    if (!fs::exists(fs::path(dir) / "train-images-idx3-ubyte")) {
        MESSAGE("real MNIST not found; skipping");
        return;
    }
    auto [train, test] = load_mnist(dir);
    CHECK(train.size() == 60000);
    CHECK(test.size() == 10000);
    CHECK(std::vector<int>(train.labels.begin(), train.labels.begin() + 10) ==
          std::vector<int>{5, 0, 4, 1, 9, 2, 1, 3, 1, 4});
    CHECK(std::vector<int>(test.labels.begin(), test.labels.begin() + 10) ==
          std::vector<int>{7, 2, 1, 0, 4, 1, 4, 9, 5, 9});
}
