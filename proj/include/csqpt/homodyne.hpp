#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "csqpt/channel.hpp"
#include "csqpt/fock.hpp"
#include "csqpt/rng.hpp"

namespace csqpt {

struct DetectionParams {
    double efficiency = 1.0;  // eta in (0, 1]
    int samples = 50000;
    /// LO phases; empty means "draw uniformly on [0, 2pi) per pulse".
    /// A non-empty sweep is cycled through pulse by pulse.
    std::vector<double> phase_sweep;
};

struct QuadratureRecord {
    std::int64_t pulse_id = 0;
    double phase = 0;  // radians in [0, 2pi)
    double value = 0;  // quadrature units, vacuum variance 1/2
};

struct TemporalMask {
    std::vector<double> time_axis;  // uniform, seconds
    std::vector<double> weights;    // unit norm: sum w_i^2 dt = 1
};

struct BinnedHistogram {
    std::vector<double> phase_edges;  // 41 entries for 40 bins
    std::vector<double> quad_edges;
    Eigen::MatrixXd counts;  // (phase bins) x (quad bins)
    std::int64_t rejected = 0;

    int phase_bins() const { return static_cast<int>(phase_edges.size()) - 1; }
    int quad_bins() const { return static_cast<int>(quad_edges.size()) - 1; }
    double total() const { return counts.sum(); }
};

struct PhaseFit {
    double amplitude = 0;     // >= 0
    double phase_offset = 0;  // radians in [0, 2pi)
    double dc_offset = 0;
    double residual_rms = 0;
    double phase_stderr = 0;
    bool amplitude_significant = true;  // false when consistent with zero
};

/// p(x|theta) for the state after detection loss eta:
///   p = sum_mn rho'_mn e^{i(n-m)theta} psi_m(x) psi_n(x),  rho' = loss_map(rho, eta).
std::function<double(double)> quadrature_pdf(const DensityMatrix& rho,
                                             double theta, double eta);

/// POVM elements for the quadrature bins of `edges` at LO phase theta,
/// outermost bins extended to +-infinity, efficiency-smoothed when eta < 1.
/// Sums to the identity within 1e-6.
std::vector<Matrix> povm_elements(const std::vector<double>& edges,
                                  double theta, double eta, FockDim dim);

/// Inverse-CDF sampler; deterministic given (seed, stream) via
/// counter-based per-record draws.
std::vector<QuadratureRecord> sample_quadratures(const DensityMatrix& rho,
                                                 const DetectionParams& det,
                                                 const RandomStream& rng);

/// Weighted integration of a detector trace against a temporal mode.
double integrate_pulse(const std::vector<double>& trace,
                       const TemporalMask& mask);

/// Field-mode mask from a recorded intensity envelope (mask ~ sqrt(intensity),
/// unit-normalized).
TemporalMask make_mask(const std::vector<double>& time_axis,
                       const std::vector<double>& intensity);

struct BinSpec {
    int phase_bins = 40;
    int quad_bins = 40;
    /// Quadrature half-range; if unset, +-max|x| of the records.
    std::optional<double> quad_range;
};

BinnedHistogram bin_records(const std::vector<QuadratureRecord>& records,
                            const BinSpec& spec = {});

PhaseFit fit_phase(const std::vector<QuadratureRecord>& records);

}  // namespace csqpt
