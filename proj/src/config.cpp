#include "slbi/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "slbi/io_util.hpp"

namespace slbi {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(s);
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

std::size_t to_size(const std::string& s, const std::string& what) {
    try {
        return std::stoul(s);
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + what + ": " + s);
    }
}

}  // namespace

std::vector<LayerSpec> parse_arch(const std::string& arch) {
    std::vector<LayerSpec> layers;
    for (const std::string& tok : split(arch, '-')) {
        if (tok == "relu") {
            layers.push_back(Relu{});
        } else if (tok == "flatten") {
            layers.push_back(Flatten{});
        } else if (tok.rfind("pool:", 0) == 0) {
            const std::size_t n = to_size(tok.substr(5), tok);
            layers.push_back(MaxPool{n, n});
        } else if (tok.rfind("fc:", 0) == 0) {
            layers.push_back(Dense{0, to_size(tok.substr(3), tok)});
        } else if (tok.rfind("conv:", 0) == 0) {
            std::string body = tok.substr(5);
            std::size_t pad = 0;
            const std::size_t ppos = body.find('p');
            if (ppos != std::string::npos) {
                pad = to_size(body.substr(ppos + 1), tok);
                body = body.substr(0, ppos);
            }
            const auto dims = split(body, 'x');
            if (dims.size() != 3) throw ConfigError("bad conv token: " + tok);
            layers.push_back(Conv{to_size(dims[0], tok), to_size(dims[1], tok),
                                  to_size(dims[2], tok), 1, pad});
        } else {
            throw ConfigError("unknown arch token: " + tok);
        }
    }
    if (layers.empty()) throw ConfigError("empty architecture");
    return layers;
}

std::map<std::string, std::size_t> layer_names(const std::vector<LayerSpec>& layers) {
    std::map<std::string, std::size_t> names;
    std::size_t nconv = 0, nfc = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (std::holds_alternative<Conv>(layers[l]))
            names["conv" + std::to_string(++nconv)] = l;
        else if (std::holds_alternative<Dense>(layers[l]))
            names["fc" + std::to_string(++nfc)] = l;
    }
    return names;
}

namespace {

struct Field {
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

template <typename T>
void parse_num(T& dst, const std::string& v, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, double>)
            dst = std::stod(v);
        else
            dst = static_cast<T>(std::stoull(v));
    } catch (const std::exception&) {
        throw ConfigError("bad value for " + key + ": " + v);
    }
}

void parse_bool(bool& dst, const std::string& v, const std::string& key) {
    if (v == "true" || v == "1")
        dst = true;
    else if (v == "false" || v == "0")
        dst = false;
    else
        throw ConfigError("bad boolean for " + key + ": " + v);
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f = [] {
        std::map<std::string, Field> m;
        auto str = [&m](const std::string& k, std::string RunConfig::* p) {
            m[k] = {[p](const RunConfig& c) { return c.*p; },
                    [p](RunConfig& c, const std::string& v) { c.*p = v; }};
        };
        auto num = [&m](const std::string& k, auto RunConfig::* p) {
            m[k] = {[p](const RunConfig& c) {
                        using T = std::decay_t<decltype(c.*p)>;
                        if constexpr (std::is_same_v<T, double>)
                            return format_double(c.*p);
                        else
                            return std::to_string(c.*p);
                    },
                    [p, k](RunConfig& c, const std::string& v) { parse_num(c.*p, v, k); }};
        };
        auto boolean = [&m](const std::string& k, bool RunConfig::* p) {
            m[k] = {[p](const RunConfig& c) { return std::string(c.*p ? "true" : "false"); },
                    [p, k](RunConfig& c, const std::string& v) { parse_bool(c.*p, v, k); }};
        };
        str("arch", &RunConfig::arch);
        str("input", &RunConfig::input);
        str("loss", &RunConfig::loss);
        boolean("use_bias", &RunConfig::use_bias);
        str("penalized", &RunConfig::penalized);
        num("kappa", &RunConfig::kappa);
        num("nu", &RunConfig::nu);
        num("alpha", &RunConfig::alpha);
        num("batch_size", &RunConfig::batch_size);
        num("epochs", &RunConfig::epochs);
        num("patience", &RunConfig::patience);
        num("seed", &RunConfig::seed);
        str("data", &RunConfig::data);
        str("data_dir", &RunConfig::data_dir);
        num("limit", &RunConfig::limit);
        num("val_fraction", &RunConfig::val_fraction);
        boolean("forward_selection", &RunConfig::forward_selection);
        num("threshold", &RunConfig::threshold);
        num("expand_m", &RunConfig::expand_m);
        num("max_filters", &RunConfig::max_filters);
        num("cooldown", &RunConfig::cooldown);
        num("lambda1", &RunConfig::lambda1);
        num("lambda2", &RunConfig::lambda2);
        boolean("normalized_importance", &RunConfig::normalized_importance);
        boolean("global_rank", &RunConfig::global_rank);
        str("rates", &RunConfig::rates);
        str("criteria", &RunConfig::criteria);
        num("synth_n", &RunConfig::synth_n);
        num("synth_p", &RunConfig::synth_p);
        num("synth_s", &RunConfig::synth_s);
        num("synth_b", &RunConfig::synth_b);
        num("synth_sigma", &RunConfig::synth_sigma);
        str("out_dir", &RunConfig::out_dir);
        return m;
    }();
    return f;
}

}  // namespace

void RunConfig::apply_override(const std::string& key_value) {
    const std::size_t eq = key_value.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + key_value);
    const std::string key = key_value.substr(0, eq);
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown config key: " + key);
    it->second.set(*this, key_value.substr(eq + 1));
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig c;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        c.apply_override(line);
    }
    return c;
}

std::string RunConfig::print() const {
    std::string out;
    for (const auto& [key, field] : fields()) out += key + "=" + field.get(*this) + "\n";
    return out;
}

Shape RunConfig::input_shape() const {
    const auto dims = split(input, 'x');
    if (dims.size() != 3) throw ConfigError("input must be CxHxW, got: " + input);
    return {to_size(dims[0], "input"), to_size(dims[1], "input"), to_size(dims[2], "input")};
}

std::vector<std::pair<std::size_t, PenaltyKind>> RunConfig::penalized_layers(
    const std::vector<LayerSpec>& layers) const {
    std::vector<std::pair<std::size_t, PenaltyKind>> out;
    if (penalized.empty()) return out;
    const auto names = layer_names(layers);
    for (const std::string& tok : split(penalized, ',')) {
        const auto parts = split(tok, ':');
        if (parts.size() != 2) throw ConfigError("penalized entries are name:kind, got: " + tok);
        const auto it = names.find(parts[0]);
        if (it == names.end()) throw ConfigError("no such layer: " + parts[0]);
        PenaltyKind kind;
        if (parts[1] == "group")
            kind = PenaltyKind::GroupLasso;
        else if (parts[1] == "lasso")
            kind = PenaltyKind::Lasso;
        else
            throw ConfigError("penalty kind must be group or lasso, got: " + parts[1]);
        if (kind == PenaltyKind::GroupLasso && !std::holds_alternative<Conv>(layers[it->second]))
            throw ConfigError("group penalty requires a conv layer: " + tok);
        out.emplace_back(it->second, kind);
    }
    return out;
}

std::vector<double> RunConfig::rate_list() const {
    std::vector<double> out;
    for (const std::string& tok : split(rates, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad rate: " + tok);
        }
    }
    return out;
}

std::vector<std::string> RunConfig::criteria_list() const { return split(criteria, ','); }

}  // namespace slbi
