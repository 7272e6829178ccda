#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "slbi/optim.hpp"

using namespace slbi;

namespace {

Batch zero_batch(std::size_t n, std::size_t p) {
    Batch b;
    b.inputs = Tensor({n, p, 1, 1});
    b.targets = Tensor({n, 1});
    return b;
}

std::pair<Network, Dataset> linear_setup(std::uint64_t seed, std::size_t n = 60,
                                         std::size_t p = 12) {
    Rng rng(seed);
    SynthLinearTask task = gen_synth(n, p, 3, 1.5, 0.1, rng);
    Rng net_rng(seed + 1);
    Network net({Flatten{}, Dense{0, 1}}, {p, 1, 1}, LossKind::SquaredError, net_rng,
                /*use_bias=*/false);
    return {std::move(net), task.as_dataset()};
}

}  // namespace

TEST_CASE("hyper defaults and the step-size rule") {
    SlbiHyper h;
    CHECK(h.kappa == 1.0);
    CHECK(h.nu == 10.0);
    CHECK(h.resolved_alpha() == doctest::Approx(0.01));
    h.kappa = 4.0;
    CHECK(h.resolved_alpha() == doctest::Approx(0.0025));
    h.alpha = 0.2;
    CHECK(h.resolved_alpha() == 0.2);
}

TEST_CASE("state starts at the null model") {
    auto [net, data] = linear_setup(1);
    SlbiLayerState st = SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso);
    CHECK(st.z.l2_norm() == 0.0);
    CHECK(st.gamma.l2_norm() == 0.0);
    CHECK(st.w_tilde(net).l2_norm() == 0.0);  // projection onto empty support
    CHECK_THROWS(SlbiLayerState::for_layer(net, 0, PenaltyKind::Lasso));  // flatten
}

TEST_CASE("all-zero state with zero gradient is a fixed point") {
    auto [net, data] = linear_setup(2);
    net.weight(0).fill(0.0);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    Batch b = zero_batch(4, 12);
    SlbiHyper hyper;
    slbi_step(net, b, states, hyper);
    CHECK(net.weight(0).l2_norm() == 0.0);
    CHECK(states[0].z.l2_norm() == 0.0);
    CHECK(states[0].gamma.l2_norm() == 0.0);
}

TEST_CASE("one step grows z by alpha*w/nu and the prox dead zone holds") {
    auto [net, data] = linear_setup(3);
    const Tensor w0 = net.weight(0);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    Batch b = zero_batch(4, 12);  // zero inputs/targets: loss gradient vanishes
    SlbiHyper hyper;
    slbi_step(net, b, states, hyper);
    for (std::size_t i = 0; i < w0.numel(); ++i) {
        CHECK(states[0].z[i] == doctest::Approx(0.01 * w0[i] / 10.0).epsilon(1e-12));
        CHECK(states[0].gamma[i] == 0.0);  // |z| far below 1
    }
}

TEST_CASE("split loss adds the quadratic gap") {
    auto [net, data] = linear_setup(4);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    std::vector<std::size_t> idx{0, 1, 2, 3};
    Batch b = make_batch(data, idx);
    const double plain = net.forward(b).loss;

    SlbiHyper hyper;
    states[0].gamma = net.weight(0);  // zero gap
    CHECK(split_loss(net, b, states, hyper) == doctest::Approx(plain));

    states[0].gamma.fill(0.0);
    hyper.nu = 1.0;
    const double w2 = net.weight(0).squared_l2();
    CHECK(split_loss(net, b, states, hyper) == doctest::Approx(plain + w2 / 2.0));
}

TEST_CASE("doubling kappa at fixed kappa*alpha leaves the W update unchanged") {
    auto [net1, data] = linear_setup(5);
    Network net2 = net1;
    std::vector<SlbiLayerState> s1{SlbiLayerState::for_layer(net1, 1, PenaltyKind::Lasso)};
    std::vector<SlbiLayerState> s2{SlbiLayerState::for_layer(net2, 1, PenaltyKind::Lasso)};
    std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5};
    Batch b = make_batch(data, idx);

    SlbiHyper h1{1.0, 10.0, 0.01};
    SlbiHyper h2{2.0, 10.0, 0.005};
    slbi_step(net1, b, s1, h1);
    slbi_step(net2, b, s2, h2);
    for (std::size_t i = 0; i < net1.weight(0).numel(); ++i)
        CHECK(net1.weight(0)[i] == doctest::Approx(net2.weight(0)[i]).epsilon(1e-14));
}

TEST_CASE("moreau consistency holds after every step") {
    auto [net, data] = linear_setup(6);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    SlbiHyper hyper;
    hyper.alpha = 0.1;
    hyper.nu = 1.0;  // aggressive so gamma actually activates
    std::vector<std::size_t> idx(60);
    for (std::size_t i = 0; i < 60; ++i) idx[i] = i;
    Batch b = make_batch(data, idx);
    for (std::size_t t = 0; t < 300; ++t) {
        slbi_step(net, b, states, hyper, t);
        CHECK(moreau_check(states[0].z, states[0].gamma, hyper.kappa, states[0].spec, 1e-8));
    }
    CHECK(states[0].gamma.l2_norm() > 0.0);  // signal entered the support
}

TEST_CASE("first entry records the first activation only") {
    auto [net, data] = linear_setup(7);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    SolutionPath path;
    record_path(net, states, 1, path);
    CHECK(path.layers[0].first_entry[0] == -1);

    states[0].gamma[0] = 0.5;
    record_path(net, states, 7, path);
    states[0].gamma[0] = 0.0;
    record_path(net, states, 9, path);
    states[0].gamma[0] = 0.3;
    record_path(net, states, 12, path);
    CHECK(path.layers[0].first_entry[0] == 7);
    CHECK(path.layers[0].gamma_norm[2][0] == 0.0);
    CHECK(path.layers[0].gamma_norm[3][0] == doctest::Approx(0.3));
}

TEST_CASE("zero epochs trains nothing") {
    auto [net, data] = linear_setup(8);
    const Tensor w0 = net.weight(0);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    SlbiHyper hyper;
    hyper.epochs = 0;
    Rng rng(1);
    TrainResult tr = run_training(net, data, nullptr, states, hyper, rng);
    CHECK(tr.path.empty());
    CHECK(tr.epochs_run == 0);
    for (std::size_t i = 0; i < w0.numel(); ++i) CHECK(net.weight(0)[i] == w0[i]);
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    auto run = [] {
        auto [net, data] = linear_setup(9);
        std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
        SlbiHyper hyper;
        hyper.batch_size = 16;
        hyper.epochs = 30;
        Rng rng(4);
        TrainResult tr = run_training(net, data, nullptr, states, hyper, rng);
        std::ostringstream csv;
        write_path_csv(tr.path, csv);
        return std::make_pair(csv.str(), net.weight(0));
    };
    auto [csv1, w1] = run();
    auto [csv2, w2] = run();
    CHECK(csv1 == csv2);
    for (std::size_t i = 0; i < w1.numel(); ++i) CHECK(w1[i] == w2[i]);
}

TEST_CASE("path csv round-trips") {
    auto [net, data] = linear_setup(10);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    SlbiHyper hyper;
    hyper.batch_size = 20;
    hyper.epochs = 40;
    hyper.alpha = 0.05;
    hyper.nu = 2.0;
    Rng rng(4);
    TrainResult tr = run_training(net, data, nullptr, states, hyper, rng);

    std::ostringstream out;
    write_path_csv(tr.path, out);
    std::istringstream in(out.str());
    SolutionPath back = read_path_csv(in);
    REQUIRE(back.epochs == tr.path.epochs);
    REQUIRE(back.layers.size() == tr.path.layers.size());
    const auto& a = tr.path.layers[0];
    const auto& b = back.layers[0];
    CHECK(a.first_entry == b.first_entry);
    for (std::size_t e = 0; e < a.gamma_norm.size(); ++e) {
        CHECK(a.gamma_norm[e] == b.gamma_norm[e]);  // exact: shortest round-trip decimals
        CHECK(a.w_norm[e] == b.w_norm[e]);
    }

    std::istringstream bad("not,a,header\n");
    CHECK_THROWS(read_path_csv(bad));
}

TEST_CASE("divergent steps raise a numeric error") {
    auto [net, data] = linear_setup(11);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 1, PenaltyKind::Lasso)};
    SlbiHyper hyper;
    hyper.alpha = 50.0;  // way past stability for this quadratic
    hyper.epochs = 50;
    Rng rng(4);
    CHECK_THROWS_AS(run_training(net, data, nullptr, states, hyper, rng), DivergenceError);
}
