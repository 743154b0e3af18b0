#pragma once

#include <optional>
#include <vector>

#include "csqpt/state_mle.hpp"

namespace csqpt {

struct Probe {
    CoherentAmplitude alpha;
    BinnedHistogram output_hist;
    /// Input histogram is optional: by default probe inputs are taken as
    /// analytic coherent states at the calibrated amplitude.
    std::optional<BinnedHistogram> input_hist;
};

struct ProbeSet {
    std::vector<Probe> probes;
    double eta = 1.0;
};

enum class TraceMode { preserving, non_increasing };

struct ProcessMleConfig {
    FockDim dim{6};           // reported tensor truncation
    FockDim working_dim{9};   // reconstruction space (>= dim)
    int iterations = 100;
    double log_likelihood_tol = 0;  // 0 = run the full iteration budget
    bool phase_covariant = true;
    TraceMode trace_mode = TraceMode::preserving;
    bool use_reconstructed_inputs = false;
};

struct ProcessMleResult {
    ProcessTensor tensor;          // truncated to config.dim
    ProcessTensor working_tensor;  // full reconstruction space
    MleDiagnostics diagnostics;
};

/// Coherent-state QPT: maximize sum_ij f_ij ln Tr[J (rho_i^T x G_j)] over
/// PSD J with the trace constraint, by the iterative
/// J <- (Lambda^{-1/2} x I) R J R (Lambda^{-1/2} x I) update.
/// With phase_covariant on, the covariance projection is folded into R
/// (twirl of the accumulation operator), which keeps J on the covariant
/// band at every iteration and preserves the oracle fixed point.
ProcessMleResult reconstruct_process(const ProbeSet& probes,
                                     const ProcessMleConfig& config);

/// Eq.-style output phase phi_kl = Im ln(sum_mn E_kl^mn rho_mn), in (-pi, pi].
/// Throws if the output element vanishes.
double output_phase(const ProcessTensor& tensor, const DensityMatrix& rho_in,
                    int k, int l);

struct PhaseSlice {
    int k = 0, l = 1;
    RealMatrix values;                // Im ln E_kl^mn over (m, n)
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> defined;
};

PhaseSlice phase_slice(const ProcessTensor& tensor, int k = 0, int l = 1,
                       double magnitude_floor = 1e-10);

/// Uhlmann fidelity between trace-normalized Jamiolkowski operators.
double process_fidelity(const ProcessTensor& a, const ProcessTensor& b);

struct BootstrapSummary {
    std::vector<double> fidelities;     // resample vs point estimate
    RealMatrix slice_mean;              // phase-slice stats over resamples
    RealMatrix slice_stddev;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> slice_defined;
    double max_relative_slice_spread = 0;  // max stddev / |point value|
};

/// Poisson resampling of bin counts, re-reconstruction per resample.
BootstrapSummary bootstrap(const ProbeSet& probes,
                           const ProcessMleConfig& config,
                           const ProcessTensor& point_estimate,
                           int n_resamples, const RandomStream& rng);

struct SqueezedPrediction {
    double var_min_db = 0;
    double var_max_db = 0;
    double phase_shift = 0;  // rotation of squeezing axis vs input
    double transmission = 1;
    std::vector<double> sweep_theta;  // variance-vs-phase curve
    std::vector<double> sweep_variance;
};

SqueezedPrediction predict_squeezed(const ProcessTensor& tensor,
                                    const SqueezingSpec& spec);

struct QubitPrediction {
    double phi = 0;  // output_phase(..., 0, 1)
    double coherence_retention = 1;
};

QubitPrediction predict_qubit(const ProcessTensor& tensor);

/// Expected-count probe set for a known channel (analytic-counts mode).
ProbeSet analytic_probe_set(const ProcessTensor& truth,
                            const std::vector<Complex>& alphas,
                            const BinnedHistogram& edges_template, double eta,
                            double counts_per_probe);

}  // namespace csqpt
