// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// fail. Heavy MNIST criteria expect the real corpus (SLBI_MNIST_DIR, default
// /root/data/mnist); missing data fails the affected criteria honestly.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "slbi/baselines.hpp"
#include "slbi/battery.hpp"
#include "slbi/config.hpp"
#include "slbi/selection.hpp"

using namespace slbi;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int n, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::cout << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << " — " << name << " ("
              << detail << "; " << std::fixed << std::setprecision(1) << seconds << "s)\n"
              << std::defaultfloat;
    if (!pass) ++g_failures;
}

std::string mnist_dir() {
    const char* env = std::getenv("SLBI_MNIST_DIR");
    return env ? env : "/root/data/mnist";
}

bool have_mnist() {
    return fs::exists(fs::path(mnist_dir()) / "train-images-idx3-ubyte");
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

// ---------------------------------------------------------------- 1: prox
void criterion_1() {
    auto t0 = Clock::now();
    battery::ProxOracleResult res = battery::run_prox_oracle(1000, 1);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = res.prox_failures == 0 && res.moreau_failures == 0 &&
                res.max_abs_err < 1e-8 && secs < 10.0;
    report(1, "prox matches brute-force minimizer and Moreau identity", pass,
           "1000 cases, max err " + fmt(res.max_abs_err) + ", " +
               std::to_string(res.moreau_failures) + " Moreau failures",
           secs);
}

// ------------------------------------------------------------ 2: gradients
void criterion_2() {
    auto t0 = Clock::now();
    double worst = 0.0;
    // A finite difference straddling a ReLU/pool kink is invalid, so each
    // net gets a few independent random points and keeps the best; a wrong
    // analytic gradient fails at every generic point.
    auto probe = [&](std::vector<LayerSpec> layers, Shape chw, LossKind loss, bool bias) {
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t seed : {11UL, 12UL, 13UL}) {
            Rng rng(seed);
            Network net(layers, chw, loss, rng, bias);
            Batch b;
            Shape s = {3};
            s.insert(s.end(), chw.begin(), chw.end());
            b.inputs = Tensor(s);
            for (std::size_t i = 0; i < b.inputs.numel(); ++i) b.inputs[i] = rng.uniform();
            if (loss == LossKind::SquaredError) {
                b.targets = Tensor({3, net.boundary_shapes().back()[0]});
                for (std::size_t i = 0; i < b.targets.numel(); ++i) b.targets[i] = rng.gaussian();
            } else {
                for (int i = 0; i < 3; ++i)
                    b.labels.push_back(
                        static_cast<int>(rng.below(net.boundary_shapes().back()[0])));
            }
            best = std::min(best, battery::finite_diff_max_rel_err(net, b));
            if (best < 1e-6) break;
        }
        worst = std::max(worst, best);
    };
    std::string per_probe;
    auto run_probe = [&](auto... a) {
        probe(a...);
        per_probe += (per_probe.empty() ? "" : "/") + fmt(worst);
    };
    run_probe(std::vector<LayerSpec>{Flatten{}, Dense{0, 5}}, Shape{1, 4, 4},
              LossKind::SoftmaxCrossEntropy, true);
    run_probe(std::vector<LayerSpec>{Conv{2, 3, 3}, Relu{}, MaxPool{}, Flatten{}, Dense{0, 3}},
              Shape{1, 6, 6}, LossKind::SoftmaxCrossEntropy, true);
    run_probe(std::vector<LayerSpec>{Conv{2, 3, 3, 1, 1}, Relu{}, Conv{2, 3, 3}, Relu{},
                                     Flatten{}, Dense{0, 3}},
              Shape{2, 5, 5}, LossKind::SoftmaxCrossEntropy, true);
    run_probe(std::vector<LayerSpec>{Flatten{}, Dense{0, 2}}, Shape{1, 5, 1},
              LossKind::SquaredError, false);
    run_probe(std::vector<LayerSpec>{Conv{3, 2, 2}, Relu{}, MaxPool{}, Flatten{}, Dense{0, 4}},
              Shape{1, 8, 8}, LossKind::SoftmaxCrossEntropy, false);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(2, "analytic gradients vs central finite differences", worst < 1e-4 && secs < 30.0,
           "max rel err " + fmt(worst) + ", running max per net " + per_probe, secs);
}

// ----------------------------------------------- 3: Split-LBI degeneration
void criterion_3() {
    auto t0 = Clock::now();
    double gap = battery::split_lbi_reference_gap(3, 200);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(3, "full-batch linear case matches independent flat-vector reference", gap <= 1e-10,
           "max W/Z/Gamma gap " + fmt(gap) + " over 200 steps", secs);
}

// ----------------------------------------------------- 4: support recovery
void criterion_4() {
    auto t0 = Clock::now();
    battery::SupportRecoveryResult sr = battery::run_support_recovery(20);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(4, "entry-order AUC against planted support (20 seeds)",
           sr.mean_auc >= 0.95 && secs < 120.0, "mean AUC " + fmt(sr.mean_auc), secs);
}

// ----------------------------------------- 5: MNIST forward selection
void criterion_5() {
    auto t0 = Clock::now();
    if (!have_mnist()) {
        report(5, "forward selection on full MNIST", false, "MNIST corpus not found", 0.0);
        return;
    }
    auto [train_all, test] = load_mnist(mnist_dir());

    Rng rng(1);
    Network net(parse_arch("conv:1x5x5-relu-pool:2-flatten-fc:10"), {1, 28, 28},
                LossKind::SoftmaxCrossEntropy, rng);
    std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 0,
                                                                 PenaltyKind::GroupLasso)};
    auto [train, val] = split_validation(train_all, 0.2, rng);

    SlbiHyper hyper;
    hyper.alpha = 0.02;
    hyper.epochs = 40;
    hyper.patience = 10;
    ForwardPolicy policy{0.8, 2, 15, 1};
    ExpansionState es = ExpansionState::init(states);
    std::vector<ExpansionEvent> events;
    Rng expand_rng(2);
    TrainHooks hooks;
    hooks.after_epoch = [&](int epoch) {
        maybe_expand(net, states, policy, epoch, expand_rng, es, events);
    };

    TrainResult tr = run_training(net, train, &val, states, hyper, rng, hooks);
    Network& final_net = tr.best_net ? *tr.best_net : net;
    const std::size_t filters = final_net.weight(0).dim(0);
    const double acc = accuracy(final_net, test.images, test.labels);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(5, "forward selection on full MNIST", filters >= 5 && filters <= 15 && acc >= 0.97,
           std::to_string(filters) + " filters, test acc " + fmt(acc) + ", " +
               std::to_string(events.size()) + " expansions, " +
               std::to_string(tr.epochs_run) + " epochs",
           secs);
}

// --------------------------------------------- 6 & 7 share trained models
struct TrainedLenet {
    Network net;
    std::vector<SlbiLayerState> states;
    SolutionPath path;
    double dense_acc = 0.0;
};

void criterion_6(const Dataset& train, const Dataset& test) {
    auto t0 = Clock::now();
    Rng rng(1);
    Network net(
        parse_arch("conv:6x5x5p2-relu-pool:2-conv:16x5x5-relu-pool:2-flatten-fc:120-relu-fc:84-relu-fc:10"),
        {1, 28, 28}, LossKind::SoftmaxCrossEntropy, rng);
    std::vector<SlbiLayerState> states;
    for (std::size_t layer : {7UL, 9UL, 11UL})
        states.push_back(SlbiLayerState::for_layer(net, layer, PenaltyKind::Lasso));

    SlbiHyper hyper;
    hyper.alpha = 0.05;
    hyper.epochs = 18;
    hyper.patience = 18;
    TrainResult tr = run_training(net, train, nullptr, states, hyper, rng);
    const double base_acc = accuracy(net, test.images, test.labels);

    // (a) last fc layer alone to <= 5% of its weights, no fine-tuning
    std::vector<SlbiLayerState> f7{states[2]};
    auto imp_f7 = compute_importance(tr.path, net, f7, {1.0, 1.0, true});
    Network pruned_f7 = prune_by_rank(net, f7, imp_f7, 0.95);
    const double f7_acc = accuracy(pruned_f7, test.images, test.labels);
    std::size_t f7_slot = *net.slot_of_layer(11);
    std::size_t f7_nonzero = 0;
    for (std::size_t i = 0; i < pruned_f7.weight(f7_slot).numel(); ++i)
        f7_nonzero += pruned_f7.weight(f7_slot)[i] != 0.0;
    const double f7_kept =
        static_cast<double>(f7_nonzero) / static_cast<double>(net.weight(f7_slot).numel());

    // (b) the two big layers together down to <= 20% of all parameters
    std::vector<SlbiLayerState> big{states[0], states[1]};
    auto imp_big = compute_importance(tr.path, net, big, {1.0, 1.0, true});
    Network pruned_big = prune_by_rank(net, big, imp_big, 0.85);
    const double big_acc = accuracy(pruned_big, test.images, test.labels);
    const double kept_frac = static_cast<double>(pruned_big.nonzero_param_count()) /
                             static_cast<double>(pruned_big.param_count());

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = f7_kept <= 0.05 && base_acc - f7_acc <= 0.01 && kept_frac <= 0.20 &&
                      big_acc >= 0.975;
    report(6, "retraining-free pruning of the five-layer MNIST net", pass,
           "base " + fmt(base_acc) + "; last-fc keep " + fmt(f7_kept) + " acc " + fmt(f7_acc) +
               "; big-two keep " + fmt(kept_frac) + " acc " + fmt(big_acc),
           secs);
}

void criterion_7(const Dataset& train_full, const Dataset& test) {
    auto t0 = Clock::now();
    Dataset train = limit_dataset(train_full, 10000);
    std::vector<double> sc_acc, m_acc, rand_acc;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        Network net(parse_arch("conv:10x5x5-relu-pool:2-flatten-fc:10"), {1, 28, 28},
                    LossKind::SoftmaxCrossEntropy, rng);
        std::vector<SlbiLayerState> states{SlbiLayerState::for_layer(net, 0,
                                                                     PenaltyKind::GroupLasso)};
        SlbiHyper hyper;
        hyper.epochs = 12;
        hyper.patience = 12;
        TrainResult tr = run_training(net, train, nullptr, states, hyper, rng);

        auto sc = compute_importance(tr.path, net, states, {1.0, 1.0, true});
        auto m = compute_importance(tr.path, net, states, {1.0, 0.0, true});
        Network p_sc = prune_by_rank(net, states, sc, 0.5);
        Network p_m = prune_by_rank(net, states, m, 0.5);
        Rng prune_rng(seed + 100);
        Network p_r = random_prune(net, states, 0.5, prune_rng);
        sc_acc.push_back(accuracy(p_sc, test.images, test.labels));
        m_acc.push_back(accuracy(p_m, test.images, test.labels));
        rand_acc.push_back(accuracy(p_r, test.images, test.labels));
    }
    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double sc_m = mean(sc_acc), m_m = mean(m_acc), r_m = mean(rand_acc);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = sc_m >= m_m && m_m >= r_m && sc_m - r_m >= 0.02;
    report(7, "criterion ordering at 50% filter removal (5 seeds)", pass,
           "mean acc Sc " + fmt(sc_m) + " >= M " + fmt(m_m) + " >= random " + fmt(r_m), secs);
}

// ----------------------------------------------------- 8: reproducibility
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_8() {
    auto t0 = Clock::now();
    if (!have_mnist()) {
        report(8, "byte-identical reruns", false, "MNIST corpus not found", 0.0);
        return;
    }
    const char* cli_env = std::getenv("SLBI_CLI");
    const std::string cli = cli_env ? cli_env : "./slbi";
    const fs::path a = fs::temp_directory_path() / "slbi_accept_rerun_a";
    const fs::path b = fs::temp_directory_path() / "slbi_accept_rerun_b";
    fs::remove_all(a);
    fs::remove_all(b);
    bool ok = true;
    for (const fs::path& dir : {a, b}) {
        const std::string cmd = cli + " expand --set data_dir=" + mnist_dir() +
                                " --set limit=2000 --set epochs=6 --set alpha=0.1" +
                                " --set max_filters=9 --set out_dir=" + dir.string() +
                                " > /dev/null";
        ok = ok && std::system(cmd.c_str()) == 0;
    }
    bool same = ok;
    std::string detail = ok ? "" : "CLI run failed";
    for (const char* f : {"path.csv", "metrics.json", "checkpoint.json", "expansion.json"}) {
        const std::string ca = slurp(a / f), cb = slurp(b / f);
        if (ca.empty() || ca != cb) {
            same = false;
            detail += std::string(detail.empty() ? "" : ", ") + f +
                      (ca.empty() ? " empty" : " differs");
        }
    }
    if (detail.empty()) detail = "4 artifacts byte-identical across reruns";
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(8, "identical config+seed gives byte-identical artifacts", same, detail, secs);
}

// --------------------------------------------------------- 9: CIFAR smoke
void write_cifar_fixture(const fs::path& dir) {
    fs::create_directories(dir);
    Rng rng(9);
    auto write_file = [&](const fs::path& path, std::size_t records) {
        std::ofstream out(path, std::ios::binary);
        for (std::size_t r = 0; r < records; ++r) {
            // class-dependent mean so the loss has signal to descend
            const int label = static_cast<int>(rng.below(10));
            out.put(static_cast<char>(label));
            for (std::size_t i = 0; i < 3072; ++i) {
                int v = 80 + 10 * label + static_cast<int>(rng.below(60));
                out.put(static_cast<char>(std::min(v, 255)));
            }
        }
    };
    for (int i = 1; i <= 5; ++i)
        write_file(dir / ("data_batch_" + std::to_string(i) + ".bin"), 500);
    write_file(dir / "test_batch.bin", 500);
}

void criterion_9() {
    auto t0 = Clock::now();
    const char* cli_env = std::getenv("SLBI_CLI");
    const std::string cli = cli_env ? cli_env : "./slbi";
    const char* cfg_env = std::getenv("SLBI_CONFIG_DIR");
    const fs::path cfg = fs::path(cfg_env ? cfg_env : "../configs") / "cifar_reduced.cfg";

    const fs::path data = fs::temp_directory_path() / "slbi_accept_cifar_data";
    const fs::path out = fs::temp_directory_path() / "slbi_accept_cifar_out";
    fs::remove_all(data);
    fs::remove_all(out);
    write_cifar_fixture(data);

    const std::string cmd = cli + " train --config " + cfg.string() +
                            " --set data_dir=" + data.string() +
                            " --set out_dir=" + out.string() + " > /dev/null";
    const bool ran = std::system(cmd.c_str()) == 0;
    bool valid = ran;
    if (ran) {
        std::ifstream in(out / "path.csv");
        try {
            SolutionPath p = read_path_csv(in);
            valid = p.epochs == std::vector<int>{1, 2};
        } catch (const std::exception&) {
            valid = false;
        }
        valid = valid && fs::exists(out / "metrics.json") && fs::exists(out / "manifest.json") &&
                fs::exists(out / "checkpoint.json");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(9, "reduced CIFAR-format config completes 2 epochs with valid artifacts", valid,
           ran ? "synthetic CIFAR-format fixture, exit 0" : "CLI run failed", secs);
}

}  // namespace

int main() {
    // SLBI_ACCEPT_ONLY=2,8 reruns a subset while iterating; the registered
    // ctest invocation sets nothing and always runs all nine.
    const char* only_env = std::getenv("SLBI_ACCEPT_ONLY");
    const std::string only = only_env ? std::string(",") + only_env + "," : "";
    auto wanted = [&](int n) {
        return only.empty() || only.find("," + std::to_string(n) + ",") != std::string::npos;
    };
    auto guarded = [](int n, const char* name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(n, name, false, std::string("exception: ") + e.what(), 0.0);
        }
    };
    if (wanted(1)) criterion_1();
    if (wanted(2)) criterion_2();
    if (wanted(3)) criterion_3();
    if (wanted(4)) criterion_4();
    if (wanted(5)) guarded(5, "forward selection on full MNIST", criterion_5);
    if (!wanted(6) && !wanted(7)) {
    } else if (have_mnist()) {
        auto [train, test] = load_mnist(mnist_dir());
        if (wanted(6))
            guarded(6, "retraining-free pruning of the five-layer MNIST net",
                    [&] { criterion_6(train, test); });
        if (wanted(7))
            guarded(7, "criterion ordering at 50% filter removal",
                    [&] { criterion_7(train, test); });
    } else {
        if (wanted(6))
            report(6, "retraining-free pruning of the five-layer MNIST net", false,
                   "MNIST corpus not found", 0.0);
        if (wanted(7))
            report(7, "criterion ordering at 50% filter removal", false,
                   "MNIST corpus not found", 0.0);
    }
    if (wanted(8)) criterion_8();
    if (wanted(9)) criterion_9();
    std::cout << (g_failures == 0 ? "all criteria passed\n"
                                  : std::to_string(g_failures) + " criteria failed\n");
    return g_failures == 0 ? 0 : 1;
}
