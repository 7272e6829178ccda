#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slbi/baselines.hpp"
#include "slbi/battery.hpp"
#include "slbi/checkpoint.hpp"
#include "slbi/config.hpp"
#include "slbi/io_util.hpp"
#include "slbi/selection.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace slbi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string checkpoint_path;
};

RunConfig resolve_config(const CommonArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = RunConfig::parse_file(args.config_path);
    for (const std::string& kv : args.overrides) cfg.apply_override(kv);
    return cfg;
}

LossKind loss_kind(const RunConfig& cfg) {
    if (cfg.loss == "softmax_ce") return LossKind::SoftmaxCrossEntropy;
    if (cfg.loss == "squared") return LossKind::SquaredError;
    throw ConfigError("unknown loss: " + cfg.loss);
}

struct LoadedData {
    Dataset train, test;
    bool classification = true;
};

LoadedData load_data(const RunConfig& cfg) {
    LoadedData d;
    if (cfg.data == "mnist") {
        std::tie(d.train, d.test) = load_mnist(cfg.data_dir);
    } else if (cfg.data == "cifar10") {
        std::tie(d.train, d.test) = load_cifar10(cfg.data_dir);
    } else if (cfg.data == "synth") {
        Rng rng(cfg.seed + 77);
        SynthLinearTask task =
            gen_synth(cfg.synth_n, cfg.synth_p, cfg.synth_s, cfg.synth_b, cfg.synth_sigma, rng);
        d.train = task.as_dataset();
        d.test = d.train;
        d.classification = false;
    } else {
        throw ConfigError("unknown data source: " + cfg.data);
    }
    if (cfg.limit > 0) d.train = limit_dataset(d.train, cfg.limit);
    return d;
}

SlbiHyper to_hyper(const RunConfig& cfg) {
    SlbiHyper h;
    h.kappa = cfg.kappa;
    h.nu = cfg.nu;
    h.alpha = cfg.alpha;
    h.batch_size = cfg.batch_size;
    h.epochs = cfg.epochs;
    h.patience = cfg.patience;
    return h;
}

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

/// out_dir/manifest.json: digest of every artifact this run produced.
void write_manifest(const fs::path& out_dir, const std::vector<std::string>& files) {
    ordered_json manifest;
    for (const std::string& f : files) manifest["files"][f] = file_digest((out_dir / f).string());
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

/// Copy of the net with every penalized layer's W replaced by W-tilde.
Network sparse_view(const Network& net, const std::vector<SlbiLayerState>& states) {
    Network out = net;
    for (const auto& st : states) out.weight(*out.slot_of_layer(st.layer_index)) = st.w_tilde(net);
    return out;
}

int cmd_train(const CommonArgs& args, bool force_forward_selection) {
    RunConfig cfg = resolve_config(args);
    if (force_forward_selection) cfg.forward_selection = true;

    LoadedData data = load_data(cfg);
    std::vector<LayerSpec> layers = parse_arch(cfg.arch);

    Rng rng(cfg.seed);
    Network net(layers, cfg.input_shape(), loss_kind(cfg), rng, cfg.use_bias);

    std::vector<SlbiLayerState> states;
    for (auto [layer, kind] : cfg.penalized_layers(layers))
        states.push_back(SlbiLayerState::for_layer(net, layer, kind));

    Dataset train_part = data.train, val_part;
    const Dataset* val = nullptr;
    if (data.classification && cfg.val_fraction > 0.0) {
        std::tie(train_part, val_part) = split_validation(data.train, cfg.val_fraction, rng);
        val = &val_part;
    }

    SlbiHyper hyper = to_hyper(cfg);
    ForwardPolicy policy{cfg.threshold, cfg.expand_m, cfg.max_filters, cfg.cooldown};
    ExpansionState es = ExpansionState::init(states);
    std::vector<ExpansionEvent> events;
    Rng expand_rng(cfg.seed + 1);

    TrainHooks hooks;
    if (cfg.forward_selection)
        hooks.after_epoch = [&](int epoch) {
            maybe_expand(net, states, policy, epoch, expand_rng, es, events);
        };

    TrainResult tr = run_training(net, train_part, val, states, hyper, rng, hooks);

    Network& final_net = tr.best_net ? *tr.best_net : net;
    std::vector<SlbiLayerState>& final_states = tr.best_net ? tr.best_states : states;

    double acc_dense = 0.0, acc_sparse = 0.0;
    if (data.classification) {
        acc_dense = accuracy(final_net, data.test.images, data.test.labels);
        Network sparse = sparse_view(final_net, final_states);
        acc_sparse = accuracy(sparse, data.test.images, data.test.labels);
    }

    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    std::vector<std::string> files;

    {
        std::ofstream out(out_dir / "path.csv", std::ios::binary);
        write_path_csv(tr.path, out);
        if (!out) throw std::runtime_error("cannot write path.csv");
        files.push_back("path.csv");
    }
    {
        CheckpointMeta meta{static_cast<int>(tr.epochs_run), cfg.seed, hyper};
        save_checkpoint(Checkpoint::capture(final_net, final_states, tr.path, meta),
                        (out_dir / "checkpoint.json").string());
        files.push_back("checkpoint.json");
    }
    if (cfg.forward_selection) {
        std::ofstream out(out_dir / "expansion.json", std::ios::binary);
        write_expansion_log(events, out);
        if (!out) throw std::runtime_error("cannot write expansion.json");
        files.push_back("expansion.json");
    }
    {
        ordered_json metrics;
        metrics["test_acc_dense"] = acc_dense;
        metrics["test_acc_sparse"] = acc_sparse;
        metrics["param_count"] = final_net.param_count();
        metrics["epochs_run"] = tr.epochs_run;
        write_text(out_dir / "metrics.json", metrics.dump(2) + "\n");
        files.push_back("metrics.json");
    }
    write_text(out_dir / "config.txt", cfg.print());
    files.push_back("config.txt");
    write_manifest(out_dir, files);

    std::cout << "trained " << tr.epochs_run << " epochs; test acc dense " << acc_dense
              << ", sparse " << acc_sparse << "; params " << final_net.param_count() << "\n";
    return kExitOk;
}

/// Checkpoint + its path/state, restored for prune/eval/path-export.
struct Restored {
    Checkpoint ck;
    Network net;
    std::vector<SlbiLayerState> states;
    SolutionPath path;
};

Restored restore(const CommonArgs& args) {
    if (args.checkpoint_path.empty()) throw ConfigError("--checkpoint is required");
    Checkpoint ck = load_checkpoint(args.checkpoint_path);
    Network net = ck.restore_network();
    Restored r{std::move(ck), std::move(net), {}, {}};
    r.states = r.ck.states;
    r.path = r.ck.restore_path();
    return r;
}

int cmd_prune(const CommonArgs& args) {
    RunConfig cfg = resolve_config(args);
    Restored r = restore(args);
    if (!r.ck.has_slbi_state() || r.path.empty())
        throw ConfigError(
            "checkpoint has no sparse-path state: retrain with penalized layers first");

    LoadedData data = load_data(cfg);
    if (!data.classification) throw ConfigError("prune needs a classification test set");

    const std::vector<double> rates = cfg.rate_list();
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    std::vector<std::string> files;

    ImportanceWeights wts{cfg.lambda1, cfg.lambda2, cfg.normalized_importance};
    std::vector<GroupImportance> sc_rank = compute_importance(r.path, r.net, r.states, wts);
    {
        std::ofstream out(out_dir / "rank.csv", std::ios::binary);
        write_rank_csv(sc_rank, out);
        if (!out) throw std::runtime_error("cannot write rank.csv");
        files.push_back("rank.csv");
    }

    for (const std::string& crit : cfg.criteria_list()) {
        std::vector<PruneReport::CurvePoint> curve;
        if (crit == "random") {
            for (double rate : rates) {
                Rng prune_rng(cfg.seed + 13);
                Network pruned = random_prune(r.net, r.states, rate, prune_rng);
                curve.push_back(
                    {rate, accuracy(pruned, data.test.images, data.test.labels), crit});
            }
        } else {
            ImportanceWeights w = wts;
            if (crit == "magnitude")
                w.lambda2 = 0.0;
            else if (crit == "entry")
                w.lambda1 = 0.0;
            else if (crit != "sc")
                throw ConfigError("unknown prune criterion: " + crit);
            std::vector<GroupImportance> rank =
                crit == "sc" ? sc_rank : compute_importance(r.path, r.net, r.states, w);
            curve = prune_curve(r.net, r.states, rank, rates, data.test, crit, cfg.global_rank)
                        .curve;
        }
        const std::string fname = "curve_" + crit + ".csv";
        std::ofstream out(out_dir / fname, std::ios::binary);
        write_curve_csv(curve, out);
        if (!out) throw std::runtime_error("cannot write " + fname);
        files.push_back(fname);
        for (const auto& pt : curve)
            std::cout << crit << " rate " << pt.rate << " acc " << pt.accuracy << "\n";
    }
    write_manifest(out_dir, files);
    return kExitOk;
}

int cmd_eval(const CommonArgs& args) {
    RunConfig cfg = resolve_config(args);
    Restored r = restore(args);
    LoadedData data = load_data(cfg);
    if (!data.classification) throw ConfigError("eval needs a classification test set");

    const double acc_dense = accuracy(r.net, data.test.images, data.test.labels);
    double acc_sparse = acc_dense;
    if (r.ck.has_slbi_state()) {
        Network sparse = sparse_view(r.net, r.states);
        acc_sparse = accuracy(sparse, data.test.images, data.test.labels);
    }

    ordered_json metrics;
    metrics["test_acc_dense"] = acc_dense;
    metrics["test_acc_sparse"] = acc_sparse;
    metrics["param_count"] = r.net.param_count();
    metrics["epochs_run"] = r.ck.epochs_run;
    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "metrics.json", metrics.dump(2) + "\n");
    write_manifest(cfg.out_dir, {"metrics.json"});
    std::cout << metrics.dump(2) << "\n";
    return kExitOk;
}

int cmd_path_export(const CommonArgs& args) {
    RunConfig cfg = resolve_config(args);
    Restored r = restore(args);
    if (r.path.empty()) throw ConfigError("checkpoint carries no recorded path");
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "path.csv", std::ios::binary);
    write_path_csv(r.path, out);
    if (!out) throw std::runtime_error("cannot write path.csv");
    write_manifest(cfg.out_dir, {"path.csv"});
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "path.csv").string() << "\n";
    return kExitOk;
}

int cmd_synth_check(const CommonArgs& args) {
    RunConfig cfg = resolve_config(args);
    bool ok = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  (" << detail << ")\n";
        ok = ok && pass;
    };

    battery::ProxOracleResult prox = battery::run_prox_oracle(1000, cfg.seed);
    report("prox closed form vs numeric minimizer", prox.prox_failures == 0,
           "max abs err " + format_double(prox.max_abs_err) + " over " +
               std::to_string(prox.cases) + " cases");
    report("moreau decomposition consistency", prox.moreau_failures == 0,
           std::to_string(prox.moreau_failures) + " failures");

    const double gap = battery::split_lbi_reference_gap(cfg.seed, 200);
    report("single-layer iteration matches flat reference", gap <= 1e-10,
           "max gap " + format_double(gap) + " over 200 steps");

    battery::SupportRecoveryResult sr = battery::run_support_recovery(20);
    std::string aucs;
    for (double a : sr.aucs) aucs += (aucs.empty() ? "" : " ") + format_double(a);
    std::cout << "  per-seed AUC: " << aucs << "\n";
    report("support-recovery mean AUC >= 0.95", sr.mean_auc >= 0.95,
           "mean " + format_double(sr.mean_auc));
    report("support growth mostly monotone", sr.monotone_fraction >= 0.95,
           "fraction " + format_double(sr.monotone_fraction));

    return ok ? kExitOk : kExitDiverged;
}

int dispatch(const std::string& cmd, const CommonArgs& args) {
    try {
        if (cmd == "train") return cmd_train(args, false);
        if (cmd == "expand") return cmd_train(args, true);
        if (cmd == "prune") return cmd_prune(args);
        if (cmd == "eval") return cmd_eval(args);
        if (cmd == "path-export") return cmd_path_export(args);
        if (cmd == "synth-check") return cmd_synth_check(args);
        std::cerr << "unknown command: " << cmd << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const FormatError& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"S2-LBI training, selection, and pruning toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string cmd;
    for (const char* name :
         {"train", "expand", "prune", "eval", "path-export", "synth-check"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "key=value config file");
        sub->add_option("--set", args.overrides, "key=value override (repeatable; wins)");
        if (std::string(name) == "prune" || std::string(name) == "eval" ||
            std::string(name) == "path-export")
            sub->add_option("--checkpoint", args.checkpoint_path, "checkpoint.json from train");
        sub->callback([&cmd, name] { cmd = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }
    return dispatch(cmd, args);
}
