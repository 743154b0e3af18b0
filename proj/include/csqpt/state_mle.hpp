#pragma once

#include <vector>

#include "csqpt/homodyne.hpp"

namespace csqpt {

struct StateMleConfig {
    FockDim dim{10};
    int max_iterations = 200;
    double log_likelihood_tol = 1e-9;  // relative change stopping rule
    double efficiency = 1.0;           // eta threaded into the POVM
};

struct MleDiagnostics {
    int iterations_run = 0;
    double final_log_likelihood = 0;
    std::vector<double> log_likelihood_trace;
    bool converged = false;
    bool regularized_bins = false;  // hit the p_j floor with f_j > 0
};

struct StateMleResult {
    DensityMatrix state;
    MleDiagnostics diagnostics;
};

/// Iterative R rho R maximum-likelihood reconstruction from a binned
/// histogram. Loss correction is measurement-side: the POVM is built with
/// config.efficiency, the state itself is never inverted through the loss
/// map.
StateMleResult reconstruct_state(const BinnedHistogram& hist,
                                 const StateMleConfig& config);

/// Measurement operators G_j = Pi_j / n_phase_bins used by the MLE;
/// exposed for expected-count generation and tests. Ordered phase-major.
std::vector<Matrix> mle_povm(const BinnedHistogram& hist, double eta,
                             FockDim dim);

/// Analytic expected counts for a known state (no sampling noise).
BinnedHistogram expected_histogram(const DensityMatrix& rho,
                                   const BinnedHistogram& edges_template,
                                   double eta, double total_counts);

}  // namespace csqpt
