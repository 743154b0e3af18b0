#include "csqpt/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "csqpt/io.hpp"
#include "json.hpp"

namespace csqpt {

namespace {

using nlohmann::json;

constexpr double kDemoMeanPhotons = 5.4;  // probe energy for the state demo

double wrap_pi(double a) {
    while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
    return a;
}

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

ChannelParams parse_channel(const json& j, const std::string& where) {
    require_keys(j, {"phase_shift", "transmission", "excess_noise", "label"},
                 where);
    ChannelParams p;
    p.phase_shift = j.value("phase_shift", 0.0);
    p.transmission = j.value("transmission", 1.0);
    p.excess_noise = j.value("excess_noise", 0.0);
    p.label = j.value("label", std::string{});
    if (p.transmission <= 0 || p.transmission > 1)
        throw ConfigError(where + ": transmission must be in (0, 1]");
    if (p.excess_noise < 0)
        throw ConfigError(where + ": excess_noise must be >= 0");
    return p;
}

json channel_to_json(const ChannelParams& p) {
    return json{{"phase_shift", p.phase_shift},
                {"transmission", p.transmission},
                {"excess_noise", p.excess_noise},
                {"label", p.label}};
}

Experiment experiment_from_name(const std::string& name) {
    if (name == "state-demo") return Experiment::state_demo;
    if (name == "csqpt") return Experiment::csqpt;
    if (name == "squeezed-predict") return Experiment::squeezed_predict;
    if (name == "bootstrap") return Experiment::bootstrap;
    if (name == "sweep-signal-power") return Experiment::sweep_signal_power;
    throw ConfigError("unknown experiment \"" + name + "\"");
}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::state_demo: return "state-demo";
        case Experiment::csqpt: return "csqpt";
        case Experiment::squeezed_predict: return "squeezed-predict";
        case Experiment::bootstrap: return "bootstrap";
        case Experiment::sweep_signal_power: return "sweep-signal-power";
    }
    throw ConfigError("unknown experiment enum value");
}

/// Collects written artifacts and assembles the final manifest.
class RunContext {
  public:
    RunContext(const RunConfig& config) : config_(config) {
        if (config.output_dir.empty())
            throw ConfigError("output_dir is required for experiment runs");
        std::filesystem::create_directories(config.output_dir);
        lock_path_ = config.output_dir / ".csqpt.lock";
        if (std::filesystem::exists(lock_path_))
            throw ConfigError("output_dir is locked by another run: " +
                              lock_path_.string());
        io::write_file(lock_path_, "lock\n");
        start_ = std::chrono::steady_clock::now();
    }
    ~RunContext() {
        std::error_code ec;
        std::filesystem::remove(lock_path_, ec);
    }

    void write(const std::string& rel_path, const std::string& content) {
        io::write_file(config_.output_dir / rel_path, content);
        artifacts_.push_back({rel_path, io::sha256_hex(content)});
    }

    RunManifest finish(json summary) {
        json arts = json::array();
        for (const auto& [path, hash] : artifacts_)
            arts.push_back(json{{"path", path}, {"sha256", hash}});
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start_)
                .count();
        std::string cfg = config_to_json(config_);
        json manifest{{"toolkit_version", toolkit_version()},
                      {"experiment", experiment_name(config_.experiment)},
                      {"config", json::parse(cfg)},
                      {"config_sha256", io::sha256_hex(cfg)},
                      {"artifacts", std::move(arts)},
                      {"timings", json{{"total_seconds", elapsed}}},
                      {"summary", std::move(summary)}};
        RunManifest out{manifest.dump(2) + "\n"};
        io::write_file(config_.output_dir / "manifest.json", out.json);
        return out;
    }

  private:
    const RunConfig& config_;
    std::filesystem::path lock_path_;
    std::vector<std::pair<std::string, std::string>> artifacts_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<Complex> probe_amplitudes(const RunConfig& config) {
    std::vector<Complex> alphas;
    for (int i = 0; i < config.n_probes; ++i)
        alphas.push_back(config.alpha_max * i /
                         std::max(config.n_probes - 1, 1));
    return alphas;
}

double probe_quad_range(const RunConfig& config) {
    return std::sqrt(2.0) * config.alpha_max + 5.0;
}

DensityMatrix demo_input_state(const RunConfig& config) {
    DensityMatrix in = coherent_state(
        CoherentAmplitude{std::sqrt(kDemoMeanPhotons)}, config.sample_dim);
    if (config.input_excess_noise > 0)
        in = thermalize(in, config.input_excess_noise);
    return in;
}

/// Monte-Carlo or analytic probe data for one channel.
ProbeSet build_probe_set(const RunConfig& config, const ChannelParams& params,
                         std::uint64_t stream_label) {
    ProcessTensor truth = oracle_tensor(params, config.sample_dim);
    ProbeSet set;
    set.eta = config.detection.efficiency;
    BinSpec spec;
    spec.quad_range = probe_quad_range(config);
    if (config.analytic_counts) {
        BinnedHistogram edges = bin_records(
            {QuadratureRecord{0, 0.0, 0.0}}, spec);
        return analytic_probe_set(truth, probe_amplitudes(config), edges,
                                  config.detection.efficiency,
                                  config.detection.samples);
    }
    auto alphas = probe_amplitudes(config);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        DensityMatrix in =
            coherent_state(CoherentAmplitude{alphas[i]}, config.sample_dim);
        if (config.input_excess_noise > 0)
            in = thermalize(in, config.input_excess_noise);
        DensityMatrix out = apply_process(truth, in).state;
        RandomStream rng(config.seed,
                         substream(stream_label, static_cast<std::uint64_t>(i)));
        auto records = sample_quadratures(out, config.detection, rng);
        Probe probe;
        probe.alpha = CoherentAmplitude{alphas[i]};
        probe.output_hist = bin_records(records, spec);
        set.probes.push_back(std::move(probe));
    }
    return set;
}

std::string variance_sweep_csv(const SqueezedPrediction& pred) {
    std::string csv = "theta_rad,variance\n";
    char line[64];
    for (std::size_t i = 0; i < pred.sweep_theta.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g\n", pred.sweep_theta[i],
                      pred.sweep_variance[i]);
        csv += line;
    }
    return csv;
}

json squeezed_prediction_json(const SqueezedPrediction& pred) {
    return json{{"var_min_db", pred.var_min_db},
                {"var_max_db", pred.var_max_db},
                {"phase_shift", pred.phase_shift},
                {"transmission", pred.transmission}};
}

json diagnostics_json(const MleDiagnostics& d) {
    return json{{"iterations_run", d.iterations_run},
                {"final_log_likelihood", d.final_log_likelihood},
                {"converged", d.converged},
                {"regularized_bins", d.regularized_bins}};
}

}  // namespace

std::string toolkit_version() { return "0.1.0"; }

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        require_keys(
            j,
            {"experiment", "seed", "output_dir", "threads", "channel",
             "channel_ntype", "input_excess_noise", "power_map", "detection",
             "state_dim", "sample_dim", "state_mle", "process_mle", "n_probes",
             "alpha_max", "squeezing", "bootstrap_resamples", "analytic_counts",
             "tensor_artifact"},
            "config");
        RunConfig c;
        if (j.contains("experiment"))
            c.experiment = experiment_from_name(j["experiment"].get<std::string>());
        if (!j.contains("seed"))
            throw ConfigError("config: \"seed\" is mandatory");
        c.seed = j["seed"].get<std::uint64_t>();
        c.seed_set = true;
        c.output_dir = j.value("output_dir", std::string{});
        c.threads = j.value("threads", 1);
        if (c.threads < 1) throw ConfigError("config: threads must be >= 1");
        if (j.contains("channel"))
            c.channel = parse_channel(j["channel"], "channel");
        if (j.contains("channel_ntype"))
            c.channel_ntype = parse_channel(j["channel_ntype"], "channel_ntype");
        c.input_excess_noise = j.value("input_excess_noise", 0.0);
        if (c.input_excess_noise < 0)
            throw ConfigError("config: input_excess_noise must be >= 0");
        if (j.contains("power_map")) {
            try {
                c.power_map =
                    io::signal_power_map_from_json(j["power_map"].dump());
            } catch (const std::exception& e) {
                throw ConfigError(std::string("power_map: ") + e.what());
            }
        }
        if (j.contains("detection")) {
            const auto& d = j["detection"];
            require_keys(d, {"efficiency", "samples", "phase_sweep"},
                         "detection");
            c.detection.efficiency = d.value("efficiency", 1.0);
            c.detection.samples = d.value("samples", 50000);
            if (d.contains("phase_sweep"))
                c.detection.phase_sweep =
                    d["phase_sweep"].get<std::vector<double>>();
            if (c.detection.efficiency <= 0 || c.detection.efficiency > 1)
                throw ConfigError("detection: efficiency must be in (0, 1]");
            if (c.detection.samples <= 0)
                throw ConfigError("detection: samples must be > 0");
        }
        if (j.contains("state_dim")) c.state_dim = FockDim{j["state_dim"].get<int>()};
        if (j.contains("sample_dim"))
            c.sample_dim = FockDim{j["sample_dim"].get<int>()};
        if (c.state_dim.n_max < 1 || c.sample_dim.n_max < c.state_dim.n_max)
            throw ConfigError("config: need sample_dim >= state_dim >= 1");
        if (j.contains("state_mle")) {
            const auto& s = j["state_mle"];
            require_keys(s, {"max_iterations", "tol"}, "state_mle");
            c.state_mle.max_iterations =
                s.value("max_iterations", c.state_mle.max_iterations);
            c.state_mle.log_likelihood_tol =
                s.value("tol", c.state_mle.log_likelihood_tol);
            if (c.state_mle.max_iterations < 1)
                throw ConfigError("state_mle: max_iterations must be >= 1");
        }
        c.state_mle.dim = c.state_dim;
        c.state_mle.efficiency = c.detection.efficiency;
        if (j.contains("process_mle")) {
            const auto& p = j["process_mle"];
            require_keys(p,
                         {"n_max", "working_n_max", "iterations", "tol",
                          "phase_covariant", "trace_mode",
                          "use_reconstructed_inputs"},
                         "process_mle");
            c.process_mle.dim = FockDim{p.value("n_max", c.process_mle.dim.n_max)};
            c.process_mle.working_dim =
                FockDim{p.value("working_n_max", c.process_mle.working_dim.n_max)};
            c.process_mle.iterations =
                p.value("iterations", c.process_mle.iterations);
            c.process_mle.log_likelihood_tol =
                p.value("tol", c.process_mle.log_likelihood_tol);
            c.process_mle.phase_covariant =
                p.value("phase_covariant", c.process_mle.phase_covariant);
            std::string tm = p.value("trace_mode", std::string("preserving"));
            if (tm == "preserving")
                c.process_mle.trace_mode = TraceMode::preserving;
            else if (tm == "non-increasing")
                c.process_mle.trace_mode = TraceMode::non_increasing;
            else
                throw ConfigError("process_mle: unknown trace_mode \"" + tm +
                                  "\"");
            c.process_mle.use_reconstructed_inputs =
                p.value("use_reconstructed_inputs", false);
            if (c.process_mle.iterations < 1)
                throw ConfigError("process_mle: iterations must be >= 1");
            if (c.process_mle.working_dim.n_max < c.process_mle.dim.n_max)
                throw ConfigError(
                    "process_mle: working_n_max must be >= n_max");
        }
        c.n_probes = j.value("n_probes", 13);
        c.alpha_max = j.value("alpha_max", 3.3);
        if (c.n_probes < 2) throw ConfigError("config: n_probes must be >= 2");
        if (c.alpha_max <= 0) throw ConfigError("config: alpha_max must be > 0");
        if (j.contains("squeezing")) {
            const auto& s = j["squeezing"];
            require_keys(s,
                         {"squeezing_db", "antisqueezing_db", "phase",
                          "allow_thermal"},
                         "squeezing");
            c.squeezing.squeezing_db = s.value("squeezing_db", -4.3);
            c.squeezing.antisqueezing_db = s.value("antisqueezing_db", 4.3);
            c.squeezing.phase = s.value("phase", 0.0);
            c.squeezing.allow_thermal = s.value("allow_thermal", false);
        }
        c.bootstrap_resamples = j.value("bootstrap_resamples", 20);
        if (c.bootstrap_resamples < 1)
            throw ConfigError("config: bootstrap_resamples must be >= 1");
        c.analytic_counts = j.value("analytic_counts", false);
        c.tensor_artifact = j.value("tensor_artifact", std::string{});
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string config_to_json(const RunConfig& c) {
    json sweep = c.detection.phase_sweep;
    json j{
        {"experiment", experiment_name(c.experiment)},
        {"seed", c.seed},
        {"output_dir", c.output_dir.string()},
        {"threads", c.threads},
        {"channel", channel_to_json(c.channel)},
        {"channel_ntype", channel_to_json(c.channel_ntype)},
        {"input_excess_noise", c.input_excess_noise},
        {"power_map", json::parse(io::signal_power_map_to_json(c.power_map))},
        {"detection", json{{"efficiency", c.detection.efficiency},
                           {"samples", c.detection.samples},
                           {"phase_sweep", std::move(sweep)}}},
        {"state_dim", c.state_dim.n_max},
        {"sample_dim", c.sample_dim.n_max},
        {"state_mle", json{{"max_iterations", c.state_mle.max_iterations},
                           {"tol", c.state_mle.log_likelihood_tol}}},
        {"process_mle",
         json{{"n_max", c.process_mle.dim.n_max},
              {"working_n_max", c.process_mle.working_dim.n_max},
              {"iterations", c.process_mle.iterations},
              {"tol", c.process_mle.log_likelihood_tol},
              {"phase_covariant", c.process_mle.phase_covariant},
              {"trace_mode", c.process_mle.trace_mode == TraceMode::preserving
                                 ? "preserving"
                                 : "non-increasing"},
              {"use_reconstructed_inputs",
               c.process_mle.use_reconstructed_inputs}}},
        {"n_probes", c.n_probes},
        {"alpha_max", c.alpha_max},
        {"squeezing", json{{"squeezing_db", c.squeezing.squeezing_db},
                           {"antisqueezing_db", c.squeezing.antisqueezing_db},
                           {"phase", c.squeezing.phase},
                           {"allow_thermal", c.squeezing.allow_thermal}}},
        {"bootstrap_resamples", c.bootstrap_resamples},
        {"analytic_counts", c.analytic_counts},
        {"tensor_artifact", c.tensor_artifact.string()},
    };
    return j.dump(2) + "\n";
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

RunManifest run_state_demo(const RunConfig& config) {
    RunContext ctx(config);
    DensityMatrix input = demo_input_state(config);

    struct Stage {
        std::string name;
        DensityMatrix state;
    };
    std::vector<Stage> stages;
    stages.push_back({"input", input});
    stages.push_back(
        {"eit",
         apply_process(oracle_tensor(config.channel, config.sample_dim), input)
             .state});
    stages.push_back(
        {"ntype",
         apply_process(oracle_tensor(config.channel_ntype, config.sample_dim),
                       input)
             .state});

    json summary;
    std::vector<PhaseFit> fits;
    std::vector<DensityMatrix> recon;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& stage = stages[i];
        RandomStream rng(config.seed, substream(1, i));
        auto records = sample_quadratures(stage.state, config.detection, rng);
        auto fit = fit_phase(records);
        auto hist = bin_records(records);
        auto mle = reconstruct_state(hist, config.state_mle);
        auto grid = wigner(mle.state, default_wigner_grid(config.state_dim));

        ctx.write("records_" + stage.name + ".csv",
                  io::records_to_csv(records));
        ctx.write("hist_" + stage.name + ".json", io::histogram_to_json(hist));
        ctx.write("state_" + stage.name + ".json",
                  io::density_matrix_to_json(mle.state));
        ctx.write("wigner_" + stage.name + ".json", io::wigner_to_json(grid));

        summary["stages"].push_back(json{
            {"name", stage.name},
            {"fit_amplitude", fit.amplitude},
            {"fit_phase", fit.phase_offset},
            {"fit_phase_stderr", fit.phase_stderr},
            {"mean_photons", mean_photon_number(mle.state)},
            {"mean_variance", mean_variance(mle.state)},
            {"mle", diagnostics_json(mle.diagnostics)},
        });
        fits.push_back(fit);
        recon.push_back(mle.state);
    }

    double shift_eit = wrap_pi(fits[1].phase_offset - fits[0].phase_offset);
    double shift_ntype = wrap_pi(fits[2].phase_offset - fits[0].phase_offset);
    double n_in = mean_photon_number(recon[0]);
    summary["phase_shift_eit"] = shift_eit;
    summary["phase_shift_ntype"] = shift_ntype;
    summary["phase_shift_difference"] = wrap_pi(shift_eit - shift_ntype);
    summary["phase_shift_stderr"] =
        std::hypot(std::hypot(fits[0].phase_stderr, fits[1].phase_stderr),
                   fits[2].phase_stderr);
    summary["transmission_eit"] =
        (n_in > 0) ? mean_photon_number(recon[1]) / n_in : 0.0;
    summary["transmission_ntype"] =
        (n_in > 0) ? mean_photon_number(recon[2]) / n_in : 0.0;
    ctx.write("summary.json", summary.dump(2) + "\n");
    return ctx.finish(summary);
}

RunManifest run_csqpt(const RunConfig& config) {
    RunContext ctx(config);
    json summary;
    for (std::size_t pi = 0; pi < config.power_map.size(); ++pi) {
        const auto& point = config.power_map[pi];
        char tag[32];
        std::snprintf(tag, sizeof(tag), "power_%02zu", pi);

        ProbeSet probes = build_probe_set(config, point.params, 100 + pi);
        auto result = reconstruct_process(probes, config.process_mle);
        ProcessTensor oracle =
            oracle_tensor(point.params, config.process_mle.dim);
        double fid = process_fidelity(result.tensor, oracle);
        PhaseSlice slice = phase_slice(result.tensor);

        std::string atten = "k,m,value\n";
        {
            char line[64];
            const int d = result.tensor.size();
            for (int k = 0; k < d; ++k)
                for (int m = 0; m < d; ++m) {
                    std::snprintf(line, sizeof(line), "%d,%d,%.17g\n", k, m,
                                  result.tensor(k, k, m, m).real());
                    atten += line;
                }
        }

        ctx.write(std::string(tag) + "_tensor.json",
                  io::process_tensor_to_json(result.tensor));
        ctx.write(std::string(tag) + "_phase_slice.csv",
                  io::phase_slice_to_csv(slice));
        ctx.write(std::string(tag) + "_attenuation.csv", atten);
        ctx.write(std::string(tag) + "_diagnostics.json",
                  diagnostics_json(result.diagnostics).dump(2) + "\n");

        auto check = check_tensor(result.tensor);
        summary["powers"].push_back(json{
            {"signal_power_mw", point.signal_power_mw},
            {"label", point.params.label},
            {"phase_shift", point.params.phase_shift},
            {"transmission", point.params.transmission},
            {"fidelity_vs_oracle", fid},
            {"qubit_phase", predict_qubit(result.tensor).phi},
            {"hermiticity_error", check.hermiticity_error},
            {"min_choi_eigenvalue", check.min_choi_eigenvalue},
        });
    }
    ctx.write("summary.json", summary.dump(2) + "\n");
    return ctx.finish(summary);
}

RunManifest run_squeezed_predict(const RunConfig& config) {
    RunContext ctx(config);
    json summary;

    auto report = [&](const std::string& name, const ProcessTensor& tensor,
                      double transmission) {
        SqueezedPrediction pred = predict_squeezed(tensor, config.squeezing);
        ctx.write("variance_vs_phase_" + name + ".csv",
                  variance_sweep_csv(pred));
        json entry = squeezed_prediction_json(pred);
        // Gaussian loss reference: v' = T v + (1 - T)/2.
        double v_min = 0.5 * std::pow(10.0, config.squeezing.squeezing_db / 10.0);
        double v_max =
            0.5 * std::pow(10.0, config.squeezing.antisqueezing_db / 10.0);
        entry["loss_formula_min_db"] =
            10.0 * std::log10((transmission * v_min + (1 - transmission) * 0.5) /
                              0.5);
        entry["loss_formula_max_db"] =
            10.0 * std::log10((transmission * v_max + (1 - transmission) * 0.5) /
                              0.5);
        summary["channels"].push_back(
            json{{"name", name}, {"prediction", std::move(entry)}});
    };

    if (!config.tensor_artifact.empty()) {
        ProcessTensor tensor = io::process_tensor_from_json(
            io::read_file(config.tensor_artifact));
        report("artifact", tensor, predict_squeezed(tensor, config.squeezing)
                                       .transmission);
    } else {
        report("eit", oracle_tensor(config.channel, config.sample_dim),
               config.channel.transmission);
        report("ntype", oracle_tensor(config.channel_ntype, config.sample_dim),
               config.channel_ntype.transmission);
    }
    ctx.write("summary.json", summary.dump(2) + "\n");
    return ctx.finish(summary);
}

RunManifest run_bootstrap(const RunConfig& config) {
    RunContext ctx(config);
    ProbeSet probes = build_probe_set(config, config.channel, 300);
    auto point = reconstruct_process(probes, config.process_mle);
    RandomStream rng(config.seed, substream(301, 0));
    auto summary_stats = bootstrap(probes, config.process_mle, point.tensor,
                                   config.bootstrap_resamples, rng);

    json summary;
    summary["fidelities"] = summary_stats.fidelities;
    summary["max_relative_slice_spread"] =
        summary_stats.max_relative_slice_spread;
    std::string stats = "m,n,mean,stddev,defined\n";
    {
        char line[96];
        const int d = config.process_mle.dim.size();
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%d\n", m,
                              n, summary_stats.slice_mean(m, n),
                              summary_stats.slice_stddev(m, n),
                              summary_stats.slice_defined(m, n) ? 1 : 0);
                stats += line;
            }
    }
    ctx.write("tensor_point_estimate.json",
              io::process_tensor_to_json(point.tensor));
    ctx.write("bootstrap_slice_stats.csv", stats);
    ctx.write("summary.json", summary.dump(2) + "\n");
    return ctx.finish(summary);
}

namespace {

RunManifest run_sweep_signal_power(const RunConfig& config) {
    RunContext ctx(config);
    DensityMatrix input = demo_input_state(config);
    RandomStream rng0(config.seed, substream(400, 0));
    auto base_fit = fit_phase(sample_quadratures(input, config.detection, rng0));

    json summary;
    std::string csv = "signal_power_mw,phase_shift_rad,phase_stderr\n";
    char line[96];
    for (std::size_t i = 0; i < config.power_map.size(); ++i) {
        const auto& point = config.power_map[i];
        DensityMatrix out =
            apply_process(oracle_tensor(point.params, config.sample_dim), input)
                .state;
        RandomStream rng(config.seed, substream(400, i + 1));
        auto fit = fit_phase(sample_quadratures(out, config.detection, rng));
        double shift = wrap_pi(fit.phase_offset - base_fit.phase_offset);
        double err = std::hypot(fit.phase_stderr, base_fit.phase_stderr);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n",
                      point.signal_power_mw, shift, err);
        csv += line;
        summary["points"].push_back(json{{"signal_power_mw",
                                          point.signal_power_mw},
                                         {"phase_shift", shift},
                                         {"phase_stderr", err}});
    }
    ctx.write("phase_vs_power.csv", csv);
    ctx.write("summary.json", summary.dump(2) + "\n");
    return ctx.finish(summary);
}

}  // namespace

RunManifest run_experiment(const RunConfig& config) {
    if (!config.seed_set) throw ConfigError("seed is mandatory");
    switch (config.experiment) {
        case Experiment::state_demo: return run_state_demo(config);
        case Experiment::csqpt: return run_csqpt(config);
        case Experiment::squeezed_predict: return run_squeezed_predict(config);
        case Experiment::bootstrap: return run_bootstrap(config);
        case Experiment::sweep_signal_power:
            return run_sweep_signal_power(config);
    }
    throw ConfigError("unknown experiment enum value");
}

void export_plotdata(const std::filesystem::path& artifact,
                     const std::string& kind,
                     const std::filesystem::path& out_path) {
    std::string text;
    try {
        text = io::read_file(artifact);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (kind == "quad-vs-phase") {
        auto records = io::records_from_csv(text);
        auto fit = fit_phase(records);
        double a = fit.amplitude * std::cos(fit.phase_offset);
        double b = fit.amplitude * std::sin(fit.phase_offset);
        std::string csv = "phase_rad,quadrature,fit\n";
        char line[96];
        for (const auto& r : records) {
            double f = a * std::cos(r.phase) + b * std::sin(r.phase) +
                       fit.dc_offset;
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", r.phase,
                          r.value, f);
            csv += line;
        }
        io::write_file(out_path, csv);
    } else if (kind == "wigner") {
        DensityMatrix rho = io::density_matrix_from_json(text);
        io::write_file(out_path,
                       io::wigner_to_json(wigner(rho,
                                                 default_wigner_grid(rho.dim))));
    } else if (kind == "phase-vs-power") {
        SignalPowerMap map = io::signal_power_map_from_json(text);
        std::string csv = "signal_power_mw,phase_rad\n";
        char line[64];
        for (const auto& point : map) {
            ProcessTensor t = oracle_tensor(point.params, FockDim{6});
            std::snprintf(line, sizeof(line), "%.17g,%.17g\n",
                          point.signal_power_mw, -predict_qubit(t).phi);
            csv += line;
        }
        io::write_file(out_path, csv);
    } else if (kind == "phase-slice") {
        ProcessTensor t = io::process_tensor_from_json(text);
        io::write_file(out_path, io::phase_slice_to_csv(phase_slice(t)));
    } else if (kind == "variance-vs-phase") {
        ProcessTensor t = io::process_tensor_from_json(text);
        SqueezedPrediction pred =
            predict_squeezed(t, SqueezingSpec{-4.3, 4.3, 0.0});
        io::write_file(out_path, variance_sweep_csv(pred));
    } else {
        throw ConfigError("unknown export kind \"" + kind + "\"");
    }
}

}  // namespace csqpt
