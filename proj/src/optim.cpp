#include "slbi/optim.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace slbi {

SlbiLayerState SlbiLayerState::for_layer(const Network& net, std::size_t layer_index,
                                         PenaltyKind kind) {
    const auto slot = net.slot_of_layer(layer_index);
    if (!slot)
        throw std::invalid_argument("SlbiLayerState: layer " + std::to_string(layer_index) +
                                    " has no parameters");
    const Tensor& w = net.weight(*slot);
    SlbiLayerState st;
    st.layer_index = layer_index;
    st.z = Tensor(w.shape());
    st.gamma = Tensor(w.shape());
    st.spec = kind == PenaltyKind::GroupLasso
                  ? PenaltySpec::group_lasso(net.filter_groups(layer_index))
                  : PenaltySpec::lasso(w.numel());
    return st;
}

Tensor SlbiLayerState::w_tilde(const Network& net) const {
    const auto slot = net.slot_of_layer(layer_index);
    return proj_support(net.weight(*slot), gamma, spec);
}

double split_loss(Network& net, const Batch& batch, const std::vector<SlbiLayerState>& states,
                  const SlbiHyper& hyper) {
    double loss = net.forward(batch).loss;
    for (const auto& st : states) {
        const Tensor& w = net.weight(*net.slot_of_layer(st.layer_index));
        double gap = 0.0;
        for (std::size_t i = 0; i < w.numel(); ++i) {
            const double d = st.gamma[i] - w[i];
            gap += d * d;
        }
        loss += gap / (2.0 * hyper.nu);
    }
    return loss;
}

namespace {

double step_with_loss(Network& net, const Batch& batch, std::vector<SlbiLayerState>& states,
                      const SlbiHyper& hyper, std::size_t step_index) {
    const double loss = net.forward(batch).loss;
    Gradients g = net.backward(batch);
    if (!g.all_finite()) throw DivergenceError("non-finite gradient", step_index);

    const double alpha = hyper.resolved_alpha();
    std::vector<SlbiLayerState*> by_slot(net.param_slot_count(), nullptr);
    for (auto& st : states) by_slot[*net.slot_of_layer(st.layer_index)] = &st;

    for (std::size_t slot = 0; slot < net.param_slot_count(); ++slot) {
        Tensor& w = net.weight(slot);
        const Tensor& gw = g.weights[slot];
        if (SlbiLayerState* pst = by_slot[slot]) {
            SlbiLayerState& st = *pst;
            if (!st.z.same_shape(w))
                throw std::logic_error("slbi_step: state/weight shape mismatch");
            const double ka = hyper.kappa * alpha;
            for (std::size_t i = 0; i < w.numel(); ++i) {
                const double gap = (w[i] - st.gamma[i]) / hyper.nu;
                st.z[i] += alpha * gap;             // uses pre-update W
                w[i] -= ka * (gw[i] + gap);
            }
            st.gamma = prox(st.z, hyper.kappa, st.spec);
        } else {
            for (std::size_t i = 0; i < w.numel(); ++i) w[i] -= alpha * gw[i];
        }
        if (net.use_bias()) {
            Tensor& b = net.bias(slot);
            const Tensor& gb = g.biases[slot];
            for (std::size_t i = 0; i < b.numel(); ++i) b[i] -= alpha * gb[i];
        }
    }
    return loss;
}

std::vector<double> per_group_norms(const Tensor& t, const PenaltySpec& spec) {
    std::vector<double> out;
    if (spec.kind == PenaltyKind::Lasso) {
        out.resize(t.numel());
        for (std::size_t i = 0; i < t.numel(); ++i) out[i] = std::abs(t[i]);
    } else {
        const Tensor norms = group_l2_norm(t, spec.groups);
        out.assign(norms.data(), norms.data() + norms.numel());
    }
    return out;
}

}  // namespace

void slbi_step(Network& net, const Batch& batch, std::vector<SlbiLayerState>& states,
               const SlbiHyper& hyper, std::size_t step_index) {
    step_with_loss(net, batch, states, hyper, step_index);
}

void record_path(const Network& net, const std::vector<SlbiLayerState>& states,
                 int epoch, SolutionPath& path) {
    path.epochs.push_back(epoch);
    for (const auto& st : states) {
        SolutionPath::LayerPath* lp = nullptr;
        for (auto& cand : path.layers)
            if (cand.layer_index == st.layer_index) { lp = &cand; break; }
        if (!lp) {
            path.layers.push_back({});
            lp = &path.layers.back();
            lp->layer_index = st.layer_index;
        }
        std::vector<double> gn = per_group_norms(st.gamma, st.spec);
        const Tensor& w = net.weight(*net.slot_of_layer(st.layer_index));
        std::vector<double> wn = per_group_norms(w, st.spec);
        if (lp->first_entry.size() < gn.size()) lp->first_entry.resize(gn.size(), -1);
        for (std::size_t g = 0; g < gn.size(); ++g)
            if (gn[g] > 0.0 && lp->first_entry[g] < 0) lp->first_entry[g] = epoch;
        lp->gamma_norm.push_back(std::move(gn));
        lp->w_norm.push_back(std::move(wn));
    }
}

TrainResult run_training(Network& net, const Dataset& train, const Dataset* val,
                         std::vector<SlbiLayerState>& states, const SlbiHyper& hyper,
                         Rng& rng, const TrainHooks& hooks) {
    TrainResult res;
    if (hyper.epochs == 0) return res;

    const std::size_t n = train.size();
    if (n == 0) throw std::invalid_argument("run_training: empty dataset");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double initial_loss = std::numeric_limits<double>::quiet_NaN();
    int bad_epochs = 0;
    std::size_t since_improve = 0;
    std::size_t step = 0;

    for (std::size_t epoch = 1; epoch <= hyper.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += hyper.batch_size) {
            const std::size_t bn = std::min(hyper.batch_size, n - start);
            const std::vector<std::size_t> idx(order.begin() + start, order.begin() + start + bn);
            const Batch batch = make_batch(train, idx);
            loss_sum += step_with_loss(net, batch, states, hyper, step++);
            ++batches;
        }
        const double epoch_loss = loss_sum / static_cast<double>(batches);
        if (std::isnan(initial_loss)) initial_loss = epoch_loss;
        res.final_train_loss = epoch_loss;
        res.epochs_run = epoch;

        record_path(net, states, static_cast<int>(epoch), res.path);

        if (epoch_loss > 10.0 * initial_loss) {
            if (++bad_epochs >= 3)
                throw DivergenceError("loss exceeded 10x its initial value for 3 epochs", step);
        } else {
            bad_epochs = 0;
        }

        if (val) {
            const double acc = accuracy(net, val->images, val->labels);
            if (acc > res.best_val_accuracy) {
                res.best_val_accuracy = acc;
                res.best_epoch = static_cast<int>(epoch);
                res.best_net = std::make_shared<Network>(net);
                res.best_states = states;
                since_improve = 0;
            } else if (++since_improve >= hyper.patience) {
                if (hooks.after_epoch) hooks.after_epoch(static_cast<int>(epoch));
                break;
            }
        }
        if (hooks.after_epoch) hooks.after_epoch(static_cast<int>(epoch));
    }
    return res;
}

namespace {

void put_double(std::ostream& out, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, r.ptr - buf);
}

}  // namespace

void write_path_csv(const SolutionPath& path, std::ostream& out) {
    out << "epoch,layer,group,gamma_norm,w_norm,support,first_entry_epoch\n";
    for (std::size_t e = 0; e < path.epochs.size(); ++e) {
        for (const auto& lp : path.layers) {
            if (e >= lp.gamma_norm.size()) continue;
            const auto& gn = lp.gamma_norm[e];
            const auto& wn = lp.w_norm[e];
            for (std::size_t g = 0; g < gn.size(); ++g) {
                out << path.epochs[e] << ',' << lp.layer_index << ',' << g << ',';
                put_double(out, gn[g]);
                out << ',';
                put_double(out, wn[g]);
                out << ',' << (gn[g] > 0.0 ? 1 : 0) << ',' << lp.first_entry[g] << '\n';
            }
        }
    }
}

SolutionPath read_path_csv(std::istream& in) {
    SolutionPath path;
    std::string line;
    if (!std::getline(in, line) || line.rfind("epoch,layer,group", 0) != 0)
        throw std::runtime_error("path csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        auto next = [&]() {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("path csv: short row: " + line);
            return tok;
        };
        const int epoch = std::stoi(next());
        const std::size_t layer = std::stoul(next());
        const std::size_t group = std::stoul(next());
        const double gn = std::stod(next());
        const double wn = std::stod(next());
        next();  // support, implied by gamma_norm
        const int fe = std::stoi(next());

        if (path.epochs.empty() || path.epochs.back() != epoch) path.epochs.push_back(epoch);
        const std::size_t erow = path.epochs.size() - 1;
        SolutionPath::LayerPath* lp = nullptr;
        for (auto& cand : path.layers)
            if (cand.layer_index == layer) { lp = &cand; break; }
        if (!lp) {
            path.layers.push_back({});
            lp = &path.layers.back();
            lp->layer_index = layer;
        }
        while (lp->gamma_norm.size() <= erow) {
            lp->gamma_norm.emplace_back();
            lp->w_norm.emplace_back();
        }
        if (lp->gamma_norm[erow].size() != group)
            throw std::runtime_error("path csv: group rows out of order: " + line);
        lp->gamma_norm[erow].push_back(gn);
        lp->w_norm[erow].push_back(wn);
        if (lp->first_entry.size() <= group) lp->first_entry.resize(group + 1, -1);
        lp->first_entry[group] = fe;
    }
    return path;
}

}  // namespace slbi
