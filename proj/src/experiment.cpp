#include "klmat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace klmat {

namespace {

Series make_series(const ExperimentConfig& cfg) {
    const std::size_t needed = cfg.embedding_order + cfg.n_train + cfg.n_test;
    if (const auto* mg = std::get_if<MgSignal>(&cfg.signal)) {
        return mackey_glass(mg->params, mg->samples == 0 ? needed : mg->samples);
    }
    return load_sunspot(std::get<SunspotSignal>(cfg.signal).path);
}

// One algorithm's per-replica traces, reduced in fixed replica order.
struct Reduced {
    MseCurve curve;
    std::vector<double> mu;
    std::vector<double> codebook;
    double final_codebook = 0.0;
};

Reduced reduce_traces(const std::vector<TrainingTrace>& traces) {
    const std::size_t replicas = traces.size();
    std::size_t len = traces.front().curve.values_db.size();
    std::optional<std::size_t> diverged;
    for (const auto& t : traces) {
        if (t.curve.diverged_at) {
            diverged = diverged ? std::min(*diverged, *t.curve.diverged_at)
                                : *t.curve.diverged_at;
        }
        len = std::min(len, t.curve.values_db.size());
    }

    Reduced out;
    out.curve.n_replicas = replicas;
    out.curve.config_digest = traces.front().curve.config_digest;
    out.curve.diverged_at = diverged;
    out.curve.values_db.resize(len);
    out.mu.resize(len);
    out.codebook.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        double lin = 0.0, mu = 0.0, cb = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) {
            lin += traces[r].mse_linear[i];
            mu += traces[r].mu_used[i];
            cb += traces[r].codebook_size[i];
        }
        lin /= static_cast<double>(replicas);
        out.curve.values_db[i] = lin == 0.0 ? kMseFloorDb
                                 : std::max(10.0 * std::log10(lin), kMseFloorDb);
        out.mu[i] = mu / static_cast<double>(replicas);
        out.codebook[i] = cb / static_cast<double>(replicas);
    }
    for (const auto& t : traces) {
        out.final_codebook += t.codebook_size.empty() ? 0.0 : t.codebook_size.back();
    }
    out.final_codebook /= static_cast<double>(replicas);
    return out;
}

// Diagnostics over replica 0's training errors: sigma_e(n) = sqrt(delta_e(n))
// with the same theta = 0.9 low-pass used by the VSS schedule.
StabilityReport diagnose(const AlgorithmSpec& spec, const TrainingTrace& trace,
                         double lambda) {
    StabilityReport rep;
    const auto* kcfg = std::get_if<KernelConfig>(&spec.config);
    if (kcfg == nullptr) {
        return rep;
    }
    rep.applicable = true;
    rep.lambda_max = lambda;

    const auto* lo = std::get_if<LorentzianStep>(&kcfg->schedule);
    if (lo != nullptr) {
        rep.has_l = true;
        rep.l_value = lo->l;
    }

    constexpr double kTheta = 0.9;
    double delta_e = 0.0;
    double sigma_e = 0.0;
    rep.mu_bound_min = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < trace.train_errors.size(); ++n) {
        const double e = trace.train_errors[n];
        delta_e = kTheta * delta_e + (1.0 - kTheta) * e * e;
        sigma_e = std::sqrt(delta_e);
        if (sigma_e == 0.0) {
            continue; // bound is +inf, nothing to check
        }
        StabilityInputs in{sigma_e, lambda, rep.has_l ? lo->beta : 1.0, e * e};
        const double mu_bound = step_size_bound(in);
        rep.mu_bound_min = std::min(rep.mu_bound_min, mu_bound);
        if (trace.mu_used[n] > mu_bound) {
            rep.mu_violated = true;
        }
        if (rep.has_l) {
            const double l_bound = l_lower_bound(in);
            rep.l_bound_max = std::max(rep.l_bound_max, l_bound);
            if (lo->l < l_bound) {
                rep.l_violated = true;
            }
        }
    }
    rep.sigma_e_final = sigma_e;
    rep.mu_bound_final = sigma_e > 0.0
                             ? step_size_bound({sigma_e, lambda, 1.0, 0.0})
                             : std::numeric_limits<double>::infinity();
    if (!std::isfinite(rep.mu_bound_min)) {
        rep.mu_bound_min = rep.mu_bound_final;
    }
    return rep;
}

std::string build_manifest(const ExperimentConfig& cfg) {
    std::string text = config_to_text(cfg);
    text += "# replica r uses seed run.base_seed + r, r = 0.."
            + std::to_string(cfg.n_replicas - 1) + "\n";
    return text;
}

void write_value(std::FILE* f, double v) {
    std::fprintf(f, "%.15g", v);
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const Series series = make_series(cfg);
    const std::vector<Sample> samples = embed(series, cfg.embedding_order);
    const auto [train, test] = split(samples, cfg.n_train, cfg.n_test);

    const std::size_t n_algos = cfg.algorithms.size();
    const std::size_t replicas = cfg.n_replicas;

    // traces[algo][replica]
    std::vector<std::vector<TrainingTrace>> traces(n_algos);
    for (auto& per_algo : traces) {
        per_algo.resize(replicas);
    }

    unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(replicas)));

    std::atomic<std::size_t> next_replica{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t r = next_replica.fetch_add(1);
            if (r >= replicas || failed.load()) {
                return;
            }
            try {
                for (std::size_t a = 0; a < n_algos; ++a) {
                    // same seed for every algorithm: identical corrupted targets
                    traces[a][r] = testing_mse_curve(train, test, cfg.algorithms[a].config,
                                                     cfg.noise, SeededRng(cfg.base_seed + r));
                }
            } catch (const std::exception& ex) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure_message.empty()) {
                    failure_message = ex.what();
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failed.load()) {
        throw NumericalFailure("experiment replica failed: " + failure_message, 0.0);
    }

    // lambda_max of the training Gram, shared across algorithms with equal h
    std::map<double, double> lambda_by_h;
    const auto lambda_for = [&](double h) {
        const auto it = lambda_by_h.find(h);
        if (it != lambda_by_h.end()) {
            return it->second;
        }
        std::vector<std::vector<double>> inputs;
        inputs.reserve(train.size());
        for (const auto& s : train) {
            inputs.push_back(s.input);
        }
        const double lambda = lambda_max(gram_matrix(inputs, KernelParams{h}));
        lambda_by_h.emplace(h, lambda);
        return lambda;
    };

    RunResult result;
    result.manifest = build_manifest(cfg);
    result.algorithms.reserve(n_algos);
    for (std::size_t a = 0; a < n_algos; ++a) {
        const auto& spec = cfg.algorithms[a];
        Reduced red = reduce_traces(traces[a]);
        AlgoResult ar;
        ar.name = spec.name;
        ar.curve = std::move(red.curve);
        ar.mu_per_iter = std::move(red.mu);
        ar.codebook_per_iter = std::move(red.codebook);
        ar.final_codebook = red.final_codebook;
        if (const auto* kcfg = std::get_if<KernelConfig>(&spec.config)) {
            ar.stability = diagnose(spec, traces[a][0], lambda_for(kcfg->kernel.h));
        }
        result.algorithms.push_back(std::move(ar));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

void emit_csv(const RunResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IngestionError(out_dir.string(), 0, "cannot create output directory: " + ec.message());
    }

    for (const auto& algo : result.algorithms) {
        const std::filesystem::path path = out_dir / (algo.name + ".csv");
        std::FILE* f = std::fopen(path.string().c_str(), "wb");
        if (f == nullptr) {
            throw IngestionError(path.string(), 0, "cannot open for writing");
        }
        std::fputs("iteration,mse_db,mu,codebook_size\n", f);
        for (std::size_t i = 0; i < algo.curve.values_db.size(); ++i) {
            std::fprintf(f, "%zu,", i + 1);
            write_value(f, algo.curve.values_db[i]);
            std::fputc(',', f);
            write_value(f, algo.mu_per_iter[i]);
            std::fputc(',', f);
            write_value(f, algo.codebook_per_iter[i]);
            std::fputc('\n', f);
        }
        if (algo.curve.diverged_at) {
            std::fprintf(f, "# diverged at iteration %zu\n", *algo.curve.diverged_at + 1);
        }
        std::fclose(f);
    }

    const std::filesystem::path manifest_path = out_dir / "manifest.txt";
    std::FILE* f = std::fopen(manifest_path.string().c_str(), "wb");
    if (f == nullptr) {
        throw IngestionError(manifest_path.string(), 0, "cannot open for writing");
    }
    std::fputs(result.manifest.c_str(), f);
    std::fclose(f);
}

} // namespace klmat
