#include "slbi/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace slbi {

using json = nlohmann::ordered_json;

namespace {

json layer_to_json(const LayerSpec& l) {
    json j;
    if (const Conv* c = std::get_if<Conv>(&l)) {
        j = {{"type", "conv"}, {"out_channels", c->out_channels}, {"kh", c->kh},
             {"kw", c->kw}, {"stride", c->stride}, {"pad", c->pad}};
    } else if (const MaxPool* p = std::get_if<MaxPool>(&l)) {
        j = {{"type", "maxpool"}, {"window", p->window}, {"stride", p->stride}};
    } else if (std::holds_alternative<Relu>(l)) {
        j = {{"type", "relu"}};
    } else if (std::holds_alternative<Flatten>(l)) {
        j = {{"type", "flatten"}};
    } else {
        const Dense& d = std::get<Dense>(l);
        j = {{"type", "dense"}, {"in_dim", d.in_dim}, {"out_dim", d.out_dim}};
    }
    return j;
}

LayerSpec layer_from_json(const json& j) {
    const std::string t = j.at("type");
    if (t == "conv")
        return Conv{j.at("out_channels"), j.at("kh"), j.at("kw"), j.at("stride"), j.at("pad")};
    if (t == "maxpool") return MaxPool{j.at("window"), j.at("stride")};
    if (t == "relu") return Relu{};
    if (t == "flatten") return Flatten{};
    if (t == "dense") return Dense{j.at("in_dim"), j.at("out_dim")};
    throw std::runtime_error("checkpoint: unknown layer type " + t);
}

json tensor_to_json(const Tensor& t) {
    json j;
    j["shape"] = t.shape();
    j["values"] = std::vector<double>(t.data(), t.data() + t.numel());
    return j;
}

Tensor tensor_from_json(const json& j) {
    return Tensor::from(j.at("shape").get<Shape>(), j.at("values").get<std::vector<double>>());
}

}  // namespace

Checkpoint Checkpoint::capture(const Network& net, const std::vector<SlbiLayerState>& states,
                               const SolutionPath& path, const CheckpointMeta& meta) {
    Checkpoint ck;
    ck.arch = net.layers();
    ck.input_shape = net.input_shape();
    ck.loss = net.loss_kind();
    ck.use_bias = net.use_bias();
    for (std::size_t s = 0; s < net.param_slot_count(); ++s) {
        ck.weights.push_back(net.weight(s));
        ck.biases.push_back(net.bias(s));
    }
    ck.states = states;
    for (const auto& lp : path.layers) ck.first_entry[lp.layer_index] = lp.first_entry;
    ck.epochs_run = path.empty() ? 0 : path.epochs.back();
    ck.meta = meta;
    return ck;
}

Network Checkpoint::restore_network() const {
    Rng scratch(0);
    Network net(arch, input_shape, loss, scratch, use_bias);
    if (net.param_slot_count() != weights.size())
        throw std::runtime_error("checkpoint: parameter slot mismatch");
    for (std::size_t s = 0; s < weights.size(); ++s) {
        if (!net.weight(s).same_shape(weights[s]))
            throw std::runtime_error("checkpoint: weight shape mismatch at slot " + std::to_string(s));
        net.weight(s) = weights[s];
        net.bias(s) = biases[s];
    }
    return net;
}

SolutionPath Checkpoint::restore_path() const {
    SolutionPath path;
    if (epochs_run <= 0) return path;
    path.epochs.push_back(epochs_run);
    for (const auto& [layer, fe] : first_entry) {
        SolutionPath::LayerPath lp;
        lp.layer_index = layer;
        lp.first_entry = fe;
        lp.gamma_norm.emplace_back(fe.size(), 0.0);
        lp.w_norm.emplace_back(fe.size(), 0.0);
        path.layers.push_back(std::move(lp));
    }
    return path;
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    json j;
    j["arch"] = json::array();
    for (const auto& l : ck.arch) j["arch"].push_back(layer_to_json(l));
    j["input_shape"] = ck.input_shape;
    j["loss"] = ck.loss == LossKind::SoftmaxCrossEntropy ? "softmax_ce" : "squared_error";
    j["use_bias"] = ck.use_bias;
    j["params"] = json::array();
    for (std::size_t s = 0; s < ck.weights.size(); ++s) {
        json p = tensor_to_json(ck.weights[s]);
        p["bias"] = std::vector<double>(ck.biases[s].data(), ck.biases[s].data() + ck.biases[s].numel());
        j["params"].push_back(std::move(p));
    }
    if (!ck.states.empty()) {
        j["slbi_state"] = json::array();
        for (const auto& st : ck.states) {
            json s;
            s["layer"] = st.layer_index;
            s["penalty"] = st.spec.kind == PenaltyKind::GroupLasso ? "group_lasso" : "lasso";
            s["Z"] = tensor_to_json(st.z);
            s["Gamma"] = tensor_to_json(st.gamma);
            j["slbi_state"].push_back(std::move(s));
        }
    }
    if (!ck.first_entry.empty()) {
        j["first_entry"] = json::array();
        for (const auto& [layer, fe] : ck.first_entry)
            j["first_entry"].push_back({{"layer", layer}, {"values", fe}});
    }
    j["epochs_run"] = ck.epochs_run;
    j["meta"] = {{"epoch", ck.meta.epoch},
                 {"seed", ck.meta.seed},
                 {"hyperparams",
                  {{"kappa", ck.meta.hyper.kappa},
                   {"nu", ck.meta.hyper.nu},
                   {"alpha", ck.meta.hyper.resolved_alpha()},
                   {"batch_size", ck.meta.hyper.batch_size},
                   {"epochs", ck.meta.hyper.epochs},
                   {"patience", ck.meta.hyper.patience}}}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot write " + path);
    out << j.dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    json j = json::parse(in);
    Checkpoint ck;
    for (const auto& l : j.at("arch")) ck.arch.push_back(layer_from_json(l));
    ck.input_shape = j.at("input_shape").get<Shape>();
    ck.loss = j.at("loss") == "softmax_ce" ? LossKind::SoftmaxCrossEntropy : LossKind::SquaredError;
    ck.use_bias = j.at("use_bias");
    for (const auto& p : j.at("params")) {
        ck.weights.push_back(tensor_from_json(p));
        const auto b = p.at("bias").get<std::vector<double>>();
        ck.biases.push_back(Tensor::from({b.empty() ? 1 : b.size()}, b.empty() ? std::vector<double>{0.0} : b));
    }
    if (j.contains("slbi_state")) {
        // reconstructed against the restored network's group structure
        Network net = ck.restore_network();
        for (const auto& s : j.at("slbi_state")) {
            SlbiLayerState st = SlbiLayerState::for_layer(
                net, s.at("layer"),
                s.at("penalty") == "group_lasso" ? PenaltyKind::GroupLasso : PenaltyKind::Lasso);
            st.z = tensor_from_json(s.at("Z"));
            st.gamma = tensor_from_json(s.at("Gamma"));
            ck.states.push_back(std::move(st));
        }
    }
    if (j.contains("first_entry"))
        for (const auto& f : j.at("first_entry"))
            ck.first_entry[f.at("layer").get<std::size_t>()] = f.at("values").get<std::vector<int>>();
    ck.epochs_run = j.value("epochs_run", 0);
    const json& m = j.at("meta");
    ck.meta.epoch = m.at("epoch");
    ck.meta.seed = m.at("seed");
    const json& h = m.at("hyperparams");
    ck.meta.hyper.kappa = h.at("kappa");
    ck.meta.hyper.nu = h.at("nu");
    ck.meta.hyper.alpha = h.at("alpha");
    ck.meta.hyper.batch_size = h.at("batch_size");
    ck.meta.hyper.epochs = h.at("epochs");
    ck.meta.hyper.patience = h.at("patience");
    return ck;
}

}  // namespace slbi
