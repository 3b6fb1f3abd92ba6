// Python bindings for the KLMAT kernel adaptive filtering core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "klmat/experiment.hpp"

namespace py = pybind11;
using namespace klmat;

namespace {

KernelFilter make_kernel_filter(const std::string& algo, double h,
                                const py::kwargs& kwargs) {
    KernelConfig cfg;
    cfg.kernel.h = h;
    if (algo == "klms") {
        cfg.algo = KernelAlgo::Klms;
        cfg.schedule = FixedStep{kwargs.contains("mu") ? kwargs["mu"].cast<double>() : 0.5};
    } else if (algo == "klmat") {
        cfg.algo = KernelAlgo::Klmat;
        cfg.schedule = FixedStep{kwargs.contains("mu") ? kwargs["mu"].cast<double>() : 0.5};
    } else if (algo == "vss_klmat") {
        cfg.algo = KernelAlgo::Klmat;
        LorentzianStep lo;
        if (kwargs.contains("beta")) lo.beta = kwargs["beta"].cast<double>();
        if (kwargs.contains("l")) lo.l = kwargs["l"].cast<double>();
        if (kwargs.contains("theta")) lo.theta = kwargs["theta"].cast<double>();
        if (kwargs.contains("mu_min")) lo.mu_min = kwargs["mu_min"].cast<double>();
        if (kwargs.contains("mu_max")) lo.mu_max = kwargs["mu_max"].cast<double>();
        cfg.schedule = lo;
    } else {
        throw ContractViolation("algo must be klms, klmat or vss_klmat, got '" + algo + "'");
    }
    if (kwargs.contains("nc_dist") || kwargs.contains("nc_err")) {
        cfg.nc.enabled = true;
        if (kwargs.contains("nc_dist")) cfg.nc.dist_threshold = kwargs["nc_dist"].cast<double>();
        if (kwargs.contains("nc_err")) cfg.nc.err_threshold = kwargs["nc_err"].cast<double>();
    }
    validate(FilterConfig{cfg});
    return KernelFilter(cfg.algo, cfg.kernel, cfg.schedule, cfg.nc);
}

NoiseModel make_noise(const std::string& kind, const py::kwargs& kwargs) {
    const auto num = [&](const char* key, double fallback) {
        return kwargs.contains(key) ? kwargs[key].cast<double>() : fallback;
    };
    NoiseModel model;
    if (kind == "none") {
        model = NoNoise{};
    } else if (kind == "wgn") {
        model = Wgn{num("sigma", 0.1)};
    } else if (kind == "bg_impulsive") {
        model = BgImpulsive{num("sigma_g", 0.02), num("p_c", 0.3), num("sigma_i", 0.02),
                            num("impulse_scale", 1.0)};
    } else if (kind == "uniform") {
        model = UniformNoise{num("variance", 1.0)};
    } else if (kind == "rayleigh") {
        model = RayleighNoise{num("sigma_sq", 0.05),
                              kwargs.contains("remove_mean") && kwargs["remove_mean"].cast<bool>()};
    } else if (kind == "rectangular") {
        model = RectangularNoise{num("amplitude", 0.1),
                                 kwargs.contains("period_samples")
                                     ? kwargs["period_samples"].cast<std::uint64_t>()
                                     : 2};
    } else if (kind == "exponential") {
        model = ExponentialNoise{num("mean", 0.1),
                                 kwargs.contains("remove_mean") && kwargs["remove_mean"].cast<bool>()};
    } else {
        throw ContractViolation("unknown noise kind '" + kind + "'");
    }
    validate(model);
    return model;
}

py::dict result_to_dict(const RunResult& result) {
    py::dict out;
    py::dict algos;
    for (const auto& algo : result.algorithms) {
        py::dict a;
        a["mse_db"] = algo.curve.values_db;
        a["mu"] = algo.mu_per_iter;
        a["codebook_size"] = algo.codebook_per_iter;
        a["final_codebook"] = algo.final_codebook;
        a["config_digest"] = algo.curve.config_digest;
        if (algo.curve.diverged_at) {
            a["diverged_at"] = *algo.curve.diverged_at;
        }
        if (algo.stability.applicable) {
            py::dict st;
            st["lambda_max"] = algo.stability.lambda_max;
            st["sigma_e_final"] = algo.stability.sigma_e_final;
            st["mu_bound_final"] = algo.stability.mu_bound_final;
            st["mu_bound_min"] = algo.stability.mu_bound_min;
            st["mu_violated"] = algo.stability.mu_violated;
            if (algo.stability.has_l) {
                st["l_value"] = algo.stability.l_value;
                st["l_bound_max"] = algo.stability.l_bound_max;
                st["l_violated"] = algo.stability.l_violated;
            }
            a["stability"] = st;
        }
        algos[py::str(algo.name)] = a;
    }
    out["algorithms"] = algos;
    out["wall_seconds"] = result.wall_seconds;
    out["manifest"] = result.manifest;
    return out;
}

} // namespace

PYBIND11_MODULE(klmat, m) {
    m.doc() = "Kernel least-mean-absolute-third adaptive filtering and benchmarks";

    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
    py::register_exception<IngestionError>(m, "IngestionError", PyExc_ValueError);

    // kernel core
    m.def(
        "gaussian_kernel",
        [](const std::vector<double>& u, const std::vector<double>& v, double h) {
            return gaussian_kernel(u, v, KernelParams{h});
        },
        py::arg("u"), py::arg("v"), py::arg("h") = 1.0);

    py::class_<GramMatrix>(m, "GramMatrix")
        .def("__len__", &GramMatrix::size)
        .def("at",
             [](const GramMatrix& g, std::size_t i, std::size_t j) {
                 if (i >= g.size() || j >= g.size()) {
                     throw py::index_error();
                 }
                 return g.at(i, j);
             },
             py::arg("i"), py::arg("j"))
        .def("to_list", [](const GramMatrix& g) {
            std::vector<std::vector<double>> rows(g.size(), std::vector<double>(g.size()));
            for (std::size_t i = 0; i < g.size(); ++i)
                for (std::size_t j = 0; j < g.size(); ++j)
                    rows[i][j] = g.at(i, j);
            return rows;
        });

    m.def(
        "gram_matrix",
        [](const std::vector<std::vector<double>>& points, double h) {
            return gram_matrix(points, KernelParams{h});
        },
        py::arg("points"), py::arg("h") = 1.0);
    m.def("lambda_max", &lambda_max, py::arg("gram"),
          "Largest eigenvalue of (1/n) * G by power iteration");

    // filters
    py::class_<StepResult>(m, "StepResult")
        .def_readonly("prediction", &StepResult::prediction)
        .def_readonly("error", &StepResult::error)
        .def_readonly("mu_used", &StepResult::mu_used)
        .def_readonly("admitted", &StepResult::admitted);

    py::class_<KernelFilter>(m, "KernelFilter")
        .def(py::init(&make_kernel_filter), py::arg("algo"), py::arg("h") = 1.0,
             "KernelFilter('klmat'|'klms'|'vss_klmat', h, mu=..., beta=..., l=..., "
             "theta=..., mu_min=..., mu_max=..., nc_dist=..., nc_err=...)")
        .def("predict",
             [](const KernelFilter& f, const std::vector<double>& u) { return f.predict(u); })
        .def("step",
             [](KernelFilter& f, const std::vector<double>& input, double desired) {
                 return f.step(Sample{input, desired});
             },
             py::arg("input"), py::arg("desired"))
        .def_property_readonly("codebook_size",
                               [](const KernelFilter& f) { return f.codebook.size(); })
        .def_property_readonly("step_count",
                               [](const KernelFilter& f) { return f.step_count; })
        .def_property_readonly("coeffs",
                               [](const KernelFilter& f) { return f.codebook.coeffs; });

    py::class_<LinearFilter>(m, "LinearFilter")
        .def(py::init<std::size_t, double>(), py::arg("order"), py::arg("mu"))
        .def("predict",
             [](const LinearFilter& f, const std::vector<double>& u) { return f.predict(u); })
        .def("step",
             [](LinearFilter& f, const std::vector<double>& input, double desired) {
                 const auto r = f.step(Sample{input, desired});
                 return py::make_tuple(r.prediction, r.error);
             },
             py::arg("input"), py::arg("desired"))
        .def_property_readonly("w", [](const LinearFilter& f) { return f.w; });

    // signals
    m.def(
        "mackey_glass",
        [](std::size_t n_samples, double q, double m_, double tau, double dt,
           double sample_period, double history, std::size_t warmup,
           std::optional<double> x0) {
            MgParams p{q, m_, tau, dt, sample_period, history, warmup};
            return mackey_glass(p, n_samples, x0).values;
        },
        py::arg("n_samples"), py::arg("q") = 0.1, py::arg("m") = 0.2, py::arg("tau") = 30.0,
        py::arg("dt") = 0.1, py::arg("sample_period") = 6.0, py::arg("history") = 1.2,
        py::arg("warmup") = 100, py::arg("x0") = std::nullopt);

    m.def(
        "embed",
        [](const std::vector<double>& values, std::size_t order) {
            const auto samples = embed(Series{values, SeriesOrigin::External}, order);
            std::vector<std::vector<double>> inputs;
            std::vector<double> desired;
            inputs.reserve(samples.size());
            desired.reserve(samples.size());
            for (const auto& s : samples) {
                inputs.push_back(s.input);
                desired.push_back(s.desired);
            }
            return py::make_tuple(inputs, desired);
        },
        py::arg("values"), py::arg("order"),
        "Delay embedding; returns (inputs, desired)");

    m.def(
        "load_sunspot",
        [](const std::filesystem::path& path) { return load_sunspot(path).values; },
        py::arg("path"));

    // noise
    m.def(
        "noise_stream",
        [](const std::string& kind, std::uint64_t seed, std::size_t n,
           const py::kwargs& kwargs) {
            const NoiseModel model = make_noise(kind, kwargs);
            SeededRng rng(seed);
            std::vector<double> out(n);
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = sample_noise(model, rng, i);
            }
            return out;
        },
        py::arg("kind"), py::arg("seed"), py::arg("n"),
        "Deterministic stream of additive noise samples");

    // analysis
    m.def("mse_db", [](const std::vector<double>& errors) { return mse_db(errors); },
          py::arg("errors"));
    m.def(
        "step_size_bound",
        [](double sigma_e, double lambda) {
            return step_size_bound({sigma_e, lambda, 1.0, 0.0});
        },
        py::arg("sigma_e"), py::arg("lambda_max"));
    m.def(
        "l_lower_bound",
        [](double e_sq, double sigma_e, double lambda, double beta) {
            return l_lower_bound({sigma_e, lambda, beta, e_sq});
        },
        py::arg("e_sq"), py::arg("sigma_e"), py::arg("lambda_max"), py::arg("beta"));
    m.def("gradient_oracle", &gradient_oracle, py::arg("e"));

    // experiments
    m.def("preset_names", &preset_names);
    m.def("preset_text",
          [](const std::string& name) { return config_to_text(preset_config(name)); },
          py::arg("name"));
    m.def(
        "run_config_text",
        [](const std::string& text, double scale, std::optional<std::uint64_t> seed,
           unsigned threads) {
            ExperimentConfig cfg = parse_config_text(text);
            if (seed) {
                cfg.base_seed = *seed;
            }
            if (scale != 1.0) {
                apply_scale(cfg, scale);
            }
            cfg.threads = threads;
            return result_to_dict(run_experiment(cfg));
        },
        py::arg("text"), py::arg("scale") = 1.0, py::arg("seed") = std::nullopt,
        py::arg("threads") = 0,
        "Parse a config file text, run the experiment, return curves as a dict");
    m.def(
        "run_preset",
        [](const std::string& name, double scale, std::optional<std::uint64_t> seed,
           unsigned threads) {
            ExperimentConfig cfg = preset_config(name);
            if (seed) {
                cfg.base_seed = *seed;
            }
            if (scale != 1.0) {
                apply_scale(cfg, scale);
            }
            cfg.threads = threads;
            return result_to_dict(run_experiment(cfg));
        },
        py::arg("name"), py::arg("scale") = 1.0, py::arg("seed") = std::nullopt,
        py::arg("threads") = 0);
}
