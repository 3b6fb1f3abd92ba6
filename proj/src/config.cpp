#include "klmat/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace klmat {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string item = trim(std::string_view(s).substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

// key -> value map with helpers that track which keys were consumed
class KvReader {
public:
    explicit KvReader(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            // strip comments: leading '#', or ' #' after the value
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                if (hash == 0 || std::isspace(static_cast<unsigned char>(line[hash - 1]))) {
                    line.erase(hash);
                }
            }
            const std::string t = trim(line);
            if (t.empty()) {
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ContractViolation("config line " + std::to_string(lineno) +
                                        ": expected key = value, got '" + t + "'");
            }
            const std::string key = trim(std::string_view(t).substr(0, eq));
            const std::string value = trim(std::string_view(t).substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw ContractViolation("config line " + std::to_string(lineno) +
                                        ": empty key or value");
            }
            if (!kv_.emplace(key, value).second) {
                throw ContractViolation("config line " + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
            }
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string str(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) {
            throw ContractViolation("config is missing required key '" + key + "'");
        }
        used_.insert(key);
        return it->second;
    }

    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }

    double num(const std::string& key) {
        const std::string v = str(key);
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
            throw ContractViolation("config key '" + key + "': expected a number, got '" + v + "'");
        }
        return out;
    }

    double num_or(const std::string& key, double fallback) {
        return has(key) ? num(key) : fallback;
    }

    std::uint64_t uint(const std::string& key) {
        const std::string v = str(key);
        std::uint64_t out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw ContractViolation("config key '" + key + "': expected a nonnegative integer, got '" + v + "'");
        }
        return out;
    }

    std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) {
        return has(key) ? uint(key) : fallback;
    }

    bool flag_or(const std::string& key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const std::string v = str(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ContractViolation("config key '" + key + "': expected true or false, got '" + v + "'");
    }

    void reject_unknown() const {
        for (const auto& [key, value] : kv_) {
            if (!used_.count(key)) {
                throw ContractViolation("config contains unknown key '" + key + "'");
            }
        }
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

NoiseModel parse_noise(KvReader& kv) {
    const std::string variant = kv.str_or("noise.variant", "none");
    if (variant == "none") {
        return NoNoise{};
    }
    if (variant == "wgn") {
        return Wgn{kv.num("noise.sigma")};
    }
    if (variant == "bg_impulsive") {
        return BgImpulsive{kv.num("noise.sigma_g"), kv.num("noise.p_c"),
                           kv.num("noise.sigma_i"), kv.num_or("noise.impulse_scale", 1.0)};
    }
    if (variant == "uniform") {
        return UniformNoise{kv.num("noise.variance")};
    }
    if (variant == "rayleigh") {
        return RayleighNoise{kv.num("noise.sigma_sq"), kv.flag_or("noise.remove_mean", false)};
    }
    if (variant == "rectangular") {
        return RectangularNoise{kv.num("noise.amplitude"), kv.uint_or("noise.period_samples", 2)};
    }
    if (variant == "exponential") {
        return ExponentialNoise{kv.num("noise.mean"), kv.flag_or("noise.remove_mean", false)};
    }
    throw ContractViolation("unknown noise.variant '" + variant + "'");
}

AlgorithmSpec parse_algorithm(KvReader& kv, const std::string& name) {
    AlgorithmSpec spec;
    spec.name = name;
    if (name == "lmat") {
        spec.config = LinearConfig{kv.num(name + ".mu")};
        return spec;
    }
    KernelConfig k;
    k.kernel.h = kv.num_or(name + ".h", 1.0);
    if (name == "klms") {
        k.algo = KernelAlgo::Klms;
        k.schedule = FixedStep{kv.num(name + ".mu")};
    } else if (name == "klmat") {
        k.algo = KernelAlgo::Klmat;
        k.schedule = FixedStep{kv.num(name + ".mu")};
    } else if (name == "vss_klmat") {
        k.algo = KernelAlgo::Klmat;
        LorentzianStep lo;
        lo.beta = kv.num(name + ".beta");
        lo.l = kv.num(name + ".l");
        lo.theta = kv.num_or(name + ".theta", 0.9);
        lo.mu_min = kv.num_or(name + ".mu_min", 0.01);
        lo.mu_max = kv.num_or(name + ".mu_max", 2.0);
        k.schedule = lo;
    } else if (name == "nc_klmat") {
        k.algo = KernelAlgo::Klmat;
        k.schedule = FixedStep{kv.num(name + ".mu")};
        k.nc.enabled = true;
        k.nc.dist_threshold = kv.num(name + ".dist_threshold");
        k.nc.err_threshold = kv.num(name + ".err_threshold");
    } else {
        throw ContractViolation("unknown algorithm '" + name +
                                "' (expected lmat, klms, klmat, vss_klmat or nc_klmat)");
    }
    spec.config = k;
    return spec;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    KvReader kv(text);
    ExperimentConfig cfg;

    const std::string kind = kv.str("signal.kind");
    if (kind == "mg") {
        MgSignal sig;
        sig.params.q = kv.num_or("signal.q", 0.1);
        sig.params.m = kv.num_or("signal.m", 0.2);
        sig.params.tau = kv.num_or("signal.tau", 30.0);
        sig.params.dt = kv.num_or("signal.dt", 0.1);
        sig.params.sample_period = kv.num_or("signal.sample_period", 6.0);
        sig.params.history_value = kv.num_or("signal.history", 1.2);
        sig.params.warmup = kv.uint_or("signal.warmup", 100);
        sig.samples = kv.uint_or("signal.samples", 0);
        cfg.signal = sig;
    } else if (kind == "sunspot") {
        cfg.signal = SunspotSignal{kv.str("signal.path")};
    } else {
        throw ContractViolation("signal.kind must be mg or sunspot, got '" + kind + "'");
    }

    cfg.embedding_order = kv.uint("run.embedding_order");
    cfg.n_train = kv.uint("run.n_train");
    cfg.n_test = kv.uint("run.n_test");
    cfg.n_replicas = kv.uint_or("run.n_replicas", 1);
    cfg.base_seed = kv.uint_or("run.base_seed", 1);
    cfg.noise = parse_noise(kv);

    for (const std::string& name : split_list(kv.str("run.algorithms"))) {
        cfg.algorithms.push_back(parse_algorithm(kv, name));
    }

    kv.reject_unknown();
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError(path.string(), 0, "cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    if (const auto* mg = std::get_if<MgSignal>(&cfg.signal)) {
        out << "signal.kind = mg\n";
        out << "signal.q = " << fmt(mg->params.q) << "\n";
        out << "signal.m = " << fmt(mg->params.m) << "\n";
        out << "signal.tau = " << fmt(mg->params.tau) << "\n";
        out << "signal.dt = " << fmt(mg->params.dt) << "\n";
        out << "signal.sample_period = " << fmt(mg->params.sample_period) << "\n";
        out << "signal.history = " << fmt(mg->params.history_value) << "\n";
        out << "signal.warmup = " << mg->params.warmup << "\n";
        if (mg->samples != 0) {
            out << "signal.samples = " << mg->samples << "\n";
        }
    } else {
        const auto& ss = std::get<SunspotSignal>(cfg.signal);
        out << "signal.kind = sunspot\n";
        out << "signal.path = " << ss.path.generic_string() << "\n";
    }
    out << "run.embedding_order = " << cfg.embedding_order << "\n";
    out << "run.n_train = " << cfg.n_train << "\n";
    out << "run.n_test = " << cfg.n_test << "\n";
    out << "run.n_replicas = " << cfg.n_replicas << "\n";
    out << "run.base_seed = " << cfg.base_seed << "\n";

    struct NoiseWriter {
        std::ostringstream& out;
        void operator()(const NoNoise&) { out << "noise.variant = none\n"; }
        void operator()(const Wgn& n) {
            out << "noise.variant = wgn\n"
                << "noise.sigma = " << fmt(n.sigma) << "\n";
        }
        void operator()(const BgImpulsive& n) {
            out << "noise.variant = bg_impulsive\n"
                << "noise.sigma_g = " << fmt(n.sigma_g) << "\n"
                << "noise.p_c = " << fmt(n.p_c) << "\n"
                << "noise.sigma_i = " << fmt(n.sigma_i) << "\n"
                << "noise.impulse_scale = " << fmt(n.impulse_scale) << "\n";
        }
        void operator()(const UniformNoise& n) {
            out << "noise.variant = uniform\n"
                << "noise.variance = " << fmt(n.variance) << "\n";
        }
        void operator()(const RayleighNoise& n) {
            out << "noise.variant = rayleigh\n"
                << "noise.sigma_sq = " << fmt(n.sigma_sq) << "\n"
                << "noise.remove_mean = " << (n.remove_mean ? "true" : "false") << "\n";
        }
        void operator()(const RectangularNoise& n) {
            out << "noise.variant = rectangular\n"
                << "noise.amplitude = " << fmt(n.amplitude) << "\n"
                << "noise.period_samples = " << n.period_samples << "\n";
        }
        void operator()(const ExponentialNoise& n) {
            out << "noise.variant = exponential\n"
                << "noise.mean = " << fmt(n.mean) << "\n"
                << "noise.remove_mean = " << (n.remove_mean ? "true" : "false") << "\n";
        }
    };
    std::visit(NoiseWriter{out}, cfg.noise);

    out << "run.algorithms = ";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        out << (i ? ", " : "") << cfg.algorithms[i].name;
    }
    out << "\n";

    for (const auto& spec : cfg.algorithms) {
        if (const auto* lin = std::get_if<LinearConfig>(&spec.config)) {
            out << spec.name << ".mu = " << fmt(lin->mu) << "\n";
            continue;
        }
        const auto& k = std::get<KernelConfig>(spec.config);
        if (const auto* f = std::get_if<FixedStep>(&k.schedule)) {
            out << spec.name << ".mu = " << fmt(f->mu) << "\n";
        } else {
            const auto& lo = std::get<LorentzianStep>(k.schedule);
            out << spec.name << ".beta = " << fmt(lo.beta) << "\n"
                << spec.name << ".l = " << fmt(lo.l) << "\n"
                << spec.name << ".theta = " << fmt(lo.theta) << "\n"
                << spec.name << ".mu_min = " << fmt(lo.mu_min) << "\n"
                << spec.name << ".mu_max = " << fmt(lo.mu_max) << "\n";
        }
        out << spec.name << ".h = " << fmt(k.kernel.h) << "\n";
        if (k.nc.enabled) {
            out << spec.name << ".dist_threshold = " << fmt(k.nc.dist_threshold) << "\n"
                << spec.name << ".err_threshold = " << fmt(k.nc.err_threshold) << "\n";
        }
    }
    return out.str();
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.embedding_order == 0) {
        throw ContractViolation("embedding order must be >= 1");
    }
    if (cfg.n_train == 0 || cfg.n_test == 0) {
        throw ContractViolation("n_train and n_test must be >= 1");
    }
    if (cfg.n_replicas == 0) {
        throw ContractViolation("n_replicas must be >= 1");
    }
    if (cfg.algorithms.empty()) {
        throw ContractViolation("at least one algorithm must be configured");
    }
    std::set<std::string> seen;
    for (const auto& spec : cfg.algorithms) {
        if (!seen.insert(spec.name).second) {
            throw ContractViolation("algorithm '" + spec.name + "' configured twice");
        }
        validate(spec.config);
    }
    validate(cfg.noise);

    const std::size_t needed = cfg.embedding_order + cfg.n_train + cfg.n_test;
    if (const auto* mg = std::get_if<MgSignal>(&cfg.signal)) {
        validate(mg->params);
        if (mg->samples != 0 && needed > mg->samples) {
            throw ContractViolation("run needs " + std::to_string(needed) +
                                    " samples but signal.samples caps generation at " +
                                    std::to_string(mg->samples));
        }
    } else {
        constexpr std::size_t kSunspotLen = 298;
        if (needed > kSunspotLen) {
            throw ContractViolation("run needs " + std::to_string(needed) +
                                    " samples but the sunspot series has " +
                                    std::to_string(kSunspotLen));
        }
    }
}

void apply_scale(ExperimentConfig& cfg, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw ContractViolation("scale factor must be positive and finite");
    }
    const auto scaled = [factor](std::size_t v) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(
                                            std::llround(static_cast<double>(v) * factor)));
    };
    cfg.n_train = scaled(cfg.n_train);
    cfg.n_test = scaled(cfg.n_test);
    cfg.n_replicas = scaled(cfg.n_replicas);
}

} // namespace klmat
