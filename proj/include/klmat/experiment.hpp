#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "klmat/analysis.hpp"
#include "klmat/signals.hpp"

namespace klmat {

struct MgSignal {
    MgParams params;
    std::size_t samples = 0; // 0 = generate exactly what the run needs
};

struct SunspotSignal {
    std::filesystem::path path = "data/sunspot_1700_1997.csv";
};

using SignalConfig = std::variant<MgSignal, SunspotSignal>;

struct AlgorithmSpec {
    std::string name; // lmat | klms | klmat | vss_klmat | nc_klmat
    FilterConfig config;
};

struct ExperimentConfig {
    SignalConfig signal;
    std::size_t embedding_order = 10;
    std::size_t n_train = 1000;
    std::size_t n_test = 1000;
    std::size_t n_replicas = 100;
    std::uint64_t base_seed = 1;
    NoiseModel noise;
    std::vector<AlgorithmSpec> algorithms;
    unsigned threads = 0; // 0 = hardware concurrency
};

void validate(const ExperimentConfig& cfg);

/// Multiplies n_train, n_test and n_replicas by `factor` (minimum 1 each).
void apply_scale(ExperimentConfig& cfg, double factor);

/// Step-size and l-parameter diagnostics observed over replica 0's training
/// errors. Bounds are advisory: violations are reported, never enforced.
struct StabilityReport {
    bool applicable = false;     // kernel algorithms only
    double lambda_max = 0.0;
    double sigma_e_final = 0.0;  // sqrt(delta_e) after the last step
    double mu_bound_final = 0.0; // bound at sigma_e_final
    double mu_bound_min = 0.0;   // tightest bound seen over the run
    bool mu_violated = false;    // some mu_used exceeded the bound at its step
    bool has_l = false;          // Lorentzian schedule present
    double l_value = 0.0;
    double l_bound_max = 0.0;    // largest lower bound seen over the run
    bool l_violated = false;
};

struct AlgoResult {
    std::string name;
    MseCurve curve;                    // replica-averaged
    std::vector<double> mu_per_iter;   // replica-averaged
    std::vector<double> codebook_per_iter;
    double final_codebook = 0.0;
    StabilityReport stability;
};

struct RunResult {
    std::vector<AlgoResult> algorithms;
    double wall_seconds = 0.0;
    std::string manifest; // config + seed record, byte-stable
};

/// Runs every configured algorithm over n_replicas Monte Carlo replicas
/// (replica r uses seed base_seed + r; all algorithms within a replica see
/// the same corrupted training targets). Squared errors are averaged across
/// replicas in fixed replica order before the dB conversion. Replicas run
/// concurrently when threads != 1.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Writes <name>.csv per algorithm (header iteration,mse_db,mu,codebook_size,
/// one row per iteration, LF endings, >= 12 significant digits) plus
/// manifest.txt. Re-emitting the same result is byte-identical.
void emit_csv(const RunResult& result, const std::filesystem::path& out_dir);

// --- flat key-value config format ---------------------------------------

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);
std::string config_to_text(const ExperimentConfig& cfg);

// --- built-in presets -----------------------------------------------------

/// fig2a, fig2b, fig3a..fig3d, fig5a, fig5b.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
ExperimentConfig preset_config(const std::string& name);
std::string preset_description(const std::string& name);

} // namespace klmat
