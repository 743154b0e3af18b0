#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "csqpt/process_mle.hpp"

namespace csqpt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Experiment {
    state_demo,
    csqpt,
    squeezed_predict,
    bootstrap,
    sweep_signal_power,
};

struct RunConfig {
    Experiment experiment = Experiment::state_demo;
    std::uint64_t seed = 0;
    bool seed_set = false;  // seed is mandatory; no wall-clock default
    std::filesystem::path output_dir;
    int threads = 1;

    ChannelParams channel{2.13, 0.25, 0.0, "EIT"};
    ChannelParams channel_ntype{0.67, 0.035, 0.0, "N-type @ 2.1 mW"};
    double input_excess_noise = 0;  // thermalization of the probe source
    SignalPowerMap power_map = default_signal_power_map();

    DetectionParams detection;
    FockDim state_dim{10};   // state reconstruction space
    FockDim sample_dim{14};  // truth/sampling space
    StateMleConfig state_mle;
    ProcessMleConfig process_mle;

    int n_probes = 13;
    double alpha_max = 3.3;
    SqueezingSpec squeezing{-4.3, 4.3, 0.0};
    int bootstrap_resamples = 20;
    bool analytic_counts = false;  // expected counts instead of sampling

    /// Path to an existing tensor artifact (squeezed-predict); empty means
    /// derive one in-run.
    std::filesystem::path tensor_artifact;
};

/// Parses + validates config JSON. Unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& config);
RunConfig load_config_file(const std::filesystem::path& path);

/// The fully-resolved manifest JSON for a finished run: config echo +
/// config hash, artifact paths with content hashes, timings, summary.
struct RunManifest {
    std::string json;
};

RunManifest run_state_demo(const RunConfig& config);
RunManifest run_csqpt(const RunConfig& config);
RunManifest run_squeezed_predict(const RunConfig& config);
RunManifest run_bootstrap(const RunConfig& config);
RunManifest run_experiment(const RunConfig& config);  // dispatch on config

/// Plot-data export from an artifact file.
/// kinds: quad-vs-phase | wigner | phase-vs-power | phase-slice | variance-vs-phase
void export_plotdata(const std::filesystem::path& artifact,
                     const std::string& kind,
                     const std::filesystem::path& out_path);

std::string toolkit_version();

}  // namespace csqpt
