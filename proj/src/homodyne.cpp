#include "csqpt/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csqpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        double b = i / std::sqrt(4.0 * i * i - 1.0);
        jac(i, i - 1) = jac(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        weights[i] = 2.0 * v0 * v0;
    }
}

// integral over [a, b] of psi_m psi_n for all (m, n), composite Gauss-Legendre.
RealMatrix psi_overlap_integral(FockDim dim, double a, double b) {
    const int d = dim.size();
    RealMatrix acc = RealMatrix::Zero(d, d);
    if (b <= a) return acc;
    static std::vector<double> nodes, weights;
    if (nodes.empty()) gauss_legendre(24, nodes, weights);
    // Segment length ~1 keeps 24-node GL far beyond the needed accuracy for
    // Hermite functions up to n ~ 30.
    int segments = std::max(1, static_cast<int>(std::ceil(b - a)));
    double h = (b - a) / segments;
    std::vector<double> xs;
    xs.reserve(segments * nodes.size());
    for (int s = 0; s < segments; ++s) {
        double lo = a + s * h;
        for (double t : nodes) xs.push_back(lo + 0.5 * h * (t + 1.0));
    }
    RealMatrix psi = hermite_psi(dim, xs);
    int idx = 0;
    for (int s = 0; s < segments; ++s) {
        for (std::size_t q = 0; q < nodes.size(); ++q, ++idx) {
            double w = 0.5 * h * weights[q];
            acc.noalias() += w * (psi.col(idx) * psi.col(idx).transpose());
        }
    }
    return acc;
}

double tail_cutoff(FockDim dim) { return std::sqrt(2.0 * dim.n_max) + 10.0; }

}  // namespace

std::function<double(double)> quadrature_pdf(const DensityMatrix& rho,
                                             double theta, double eta) {
    if (eta <= 0 || eta > 1)
        throw std::invalid_argument("efficiency must be in (0, 1]");
    DensityMatrix eff = (eta < 1.0) ? loss_map(rho, eta) : rho;
    const int d = eff.size();
    // p(x|t) = sum_m rho_mm psi_m^2 + 2 sum_{m<n} Re(rho_mn e^{i(n-m)t}) psi_m psi_n
    Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(d, d);
    for (int m = 0; m < d; ++m) {
        coeff(m, m) = eff.rho(m, m).real();
        for (int n = m + 1; n < d; ++n)
            coeff(m, n) = 2.0 * (eff.rho(m, n) *
                                 std::exp(Complex(0, (n - m) * theta)))
                                    .real();
    }
    FockDim dim = eff.dim;
    return [coeff, dim, d](double x) {
        std::vector<double> xv{x};
        RealMatrix psi = hermite_psi(dim, xv);
        double p = 0;
        for (int m = 0; m < d; ++m) {
            p += coeff(m, m) * psi(m, 0) * psi(m, 0);
            for (int n = m + 1; n < d; ++n)
                p += coeff(m, n) * psi(m, 0) * psi(n, 0);
        }
        return p;
    };
}

std::vector<Matrix> povm_elements(const std::vector<double>& edges,
                                  double theta, double eta, FockDim dim) {
    if (eta <= 0) throw std::invalid_argument("efficiency must be > 0");
    if (edges.size() < 2) throw std::invalid_argument("need at least one bin");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] <= edges[i - 1])
            throw std::invalid_argument("bin edges must be strictly increasing");
    const int d = dim.size();
    const double cut = tail_cutoff(dim);
    const int nbins = static_cast<int>(edges.size()) - 1;

    Eigen::VectorXcd phase(d);
    for (int n = 0; n < d; ++n) phase(n) = std::exp(Complex(0, n * theta));

    std::vector<Matrix> out;
    out.reserve(nbins);
    for (int b = 0; b < nbins; ++b) {
        // Outermost bins extended to +-infinity (cut where psi is negligible).
        double lo = (b == 0) ? std::min(-cut, edges[0]) : edges[b];
        double hi = (b == nbins - 1) ? std::max(cut, edges[nbins]) : edges[b + 1];
        RealMatrix integral = psi_overlap_integral(dim, lo, hi);
        Matrix pi(d, d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                pi(m, n) = phase(m) * std::conj(phase(n)) * integral(m, n);
        if (eta < 1.0) pi = loss_map_adjoint(pi, eta, dim);
        out.push_back(std::move(pi));
    }
    return out;
}

std::vector<QuadratureRecord> sample_quadratures(const DensityMatrix& rho,
                                                 const DetectionParams& det,
                                                 const RandomStream& rng) {
    if (det.efficiency <= 0 || det.efficiency > 1)
        throw std::invalid_argument("efficiency must be in (0, 1]");
    if (det.samples <= 0) throw std::invalid_argument("samples must be > 0");
    DensityMatrix eff =
        (det.efficiency < 1.0) ? loss_map(rho, det.efficiency) : rho;
    const int d = eff.size();

    // Cumulative overlap tables I_mn(x_i) = int_{-L}^{x_i} psi_m psi_n,
    // cumulative Simpson on a dense grid.
    const double L = std::sqrt(2.0 * eff.dim.n_max) + 4.0;
    const int n_grid = 16385;  // odd for Simpson pairs
    std::vector<double> xs(n_grid);
    const double dx = 2.0 * L / (n_grid - 1);
    for (int i = 0; i < n_grid; ++i) xs[i] = -L + i * dx;
    RealMatrix psi = hermite_psi(eff.dim, xs);

    const int npairs = d * (d + 1) / 2;
    // cum(pair, i); pair index over m <= n.
    RealMatrix cum(npairs, n_grid);
    {
        RealMatrix f(npairs, n_grid);
        int p = 0;
        for (int m = 0; m < d; ++m)
            for (int n = m; n < d; ++n, ++p)
                f.row(p) = psi.row(m).cwiseProduct(psi.row(n));
        cum.col(0).setZero();
        for (int i = 2; i < n_grid; i += 2) {
            cum.col(i) = cum.col(i - 2) +
                         (dx / 3.0) *
                             (f.col(i - 2) + 4.0 * f.col(i - 1) + f.col(i));
        }
        for (int i = 1; i < n_grid; i += 2) {
            // quadratic through (i-1, i, i+1), integrated over the left half
            cum.col(i) = cum.col(i - 1) +
                         (dx / 12.0) *
                             (5.0 * f.col(i - 1) + 8.0 * f.col(i) -
                              f.col(std::min(i + 1, n_grid - 1)));
        }
    }

    std::vector<QuadratureRecord> records;
    records.reserve(det.samples);
    const bool sweep = !det.phase_sweep.empty();
    std::vector<double> coeff(npairs);
    for (int r = 0; r < det.samples; ++r) {
        const auto rc = static_cast<std::uint64_t>(r);
        double theta = sweep ? wrap_phase(det.phase_sweep[r % det.phase_sweep.size()])
                             : kTwoPi * rng.uniform(2 * rc);
        double u = rng.uniform(2 * rc + 1);

        // e^{i k theta} for k = 0..d-1, built once per record
        std::vector<Complex> ph(d);
        const Complex step = std::exp(Complex(0, theta));
        ph[0] = 1.0;
        for (int k = 1; k < d; ++k) ph[k] = ph[k - 1] * step;
        int p = 0;
        for (int m = 0; m < d; ++m) {
            for (int n = m; n < d; ++n, ++p) {
                coeff[p] = (m == n)
                               ? eff.rho(m, m).real()
                               : 2.0 * (eff.rho(m, n) * ph[n - m]).real();
            }
        }
        auto cdf_at = [&](int i) {
            double s = 0;
            for (int q = 0; q < npairs; ++q) s += coeff[q] * cum(q, i);
            return s;
        };
        const double total = cdf_at(n_grid - 1);
        if (total < 1.0 - 1e-3)
            throw std::runtime_error(
                "quadrature CDF lost mass; truncation too small for state");
        double target = u * total;
        int lo = 0, hi = n_grid - 1;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            if (cdf_at(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        double c_lo = cdf_at(lo), c_hi = cdf_at(hi);
        double x = xs[lo];
        if (c_hi > c_lo)
            x += dx * (target - c_lo) / (c_hi - c_lo);
        records.push_back(QuadratureRecord{r, theta, x});
    }
    return records;
}

double integrate_pulse(const std::vector<double>& trace,
                       const TemporalMask& mask) {
    if (trace.size() != mask.weights.size())
        throw std::invalid_argument("trace/mask time axis mismatch");
    if (mask.time_axis.size() < 2)
        throw std::invalid_argument("mask needs at least two samples");
    const double dt = mask.time_axis[1] - mask.time_axis[0];
    double s = 0;
    for (std::size_t i = 0; i < trace.size(); ++i)
        s += mask.weights[i] * trace[i];
    return s * dt;
}

TemporalMask make_mask(const std::vector<double>& time_axis,
                       const std::vector<double>& intensity) {
    if (time_axis.size() != intensity.size() || time_axis.size() < 2)
        throw std::invalid_argument("bad envelope");
    double maxv = 0;
    for (double v : intensity) {
        if (v < 0) throw std::invalid_argument("intensity must be non-negative");
        maxv = std::max(maxv, v);
    }
    if (maxv <= 0) throw std::invalid_argument("all-zero envelope");
    const double dt = time_axis[1] - time_axis[0];
    TemporalMask mask;
    mask.time_axis = time_axis;
    mask.weights.resize(intensity.size());
    double norm2 = 0;
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        mask.weights[i] = std::sqrt(intensity[i]);
        norm2 += mask.weights[i] * mask.weights[i] * dt;
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& w : mask.weights) w *= scale;
    return mask;
}

BinnedHistogram bin_records(const std::vector<QuadratureRecord>& records,
                            const BinSpec& spec) {
    if (records.empty()) throw std::invalid_argument("no records to bin");
    double range = 0;
    if (spec.quad_range) {
        range = *spec.quad_range;
    } else {
        for (const auto& r : records)
            if (std::isfinite(r.value)) range = std::max(range, std::abs(r.value));
    }
    if (range <= 0) range = 1.0;

    BinnedHistogram h;
    h.phase_edges.resize(spec.phase_bins + 1);
    for (int i = 0; i <= spec.phase_bins; ++i)
        h.phase_edges[i] = kTwoPi * i / spec.phase_bins;
    h.quad_edges.resize(spec.quad_bins + 1);
    for (int i = 0; i <= spec.quad_bins; ++i)
        h.quad_edges[i] = -range + 2.0 * range * i / spec.quad_bins;
    h.counts = Eigen::MatrixXd::Zero(spec.phase_bins, spec.quad_bins);
    for (const auto& r : records) {
        if (!std::isfinite(r.value) || !std::isfinite(r.phase)) {
            ++h.rejected;
            continue;
        }
        double ph = wrap_phase(r.phase);
        int pi = std::min(static_cast<int>(ph / kTwoPi * spec.phase_bins),
                          spec.phase_bins - 1);
        // Out-of-range quadratures land in the outermost bins (bins are
        // conceptually extended to +-infinity).
        double t = (r.value + range) / (2.0 * range) * spec.quad_bins;
        int qi = std::clamp(static_cast<int>(std::floor(t)), 0,
                            spec.quad_bins - 1);
        h.counts(pi, qi) += 1.0;
    }
    return h;
}

PhaseFit fit_phase(const std::vector<QuadratureRecord>& records) {
    if (records.size() < 4)
        throw std::invalid_argument("too few records for a phase fit");
    double span_min = records[0].phase, span_max = records[0].phase;
    for (const auto& r : records) {
        span_min = std::min(span_min, r.phase);
        span_max = std::max(span_max, r.phase);
    }
    if (span_max - span_min < std::numbers::pi)
        throw std::invalid_argument("phase sweep must span at least a period");

    // least squares x = a cos t + b sin t + c
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (const auto& r : records) {
        Eigen::Vector3d row(std::cos(r.phase), std::sin(r.phase), 1.0);
        ata.noalias() += row * row.transpose();
        atb.noalias() += row * r.value;
    }
    Eigen::Vector3d sol = ata.ldlt().solve(atb);
    const double a = sol(0), b = sol(1), c = sol(2);

    double ssr = 0;
    for (const auto& r : records) {
        double pred = a * std::cos(r.phase) + b * std::sin(r.phase) + c;
        ssr += (r.value - pred) * (r.value - pred);
    }
    const double dof = static_cast<double>(records.size()) - 3.0;
    const double s2 = ssr / std::max(dof, 1.0);
    Eigen::Matrix3d cov = s2 * ata.inverse();

    PhaseFit fit;
    fit.amplitude = std::hypot(a, b);
    fit.phase_offset = wrap_phase(std::atan2(b, a));
    fit.dc_offset = c;
    fit.residual_rms = std::sqrt(ssr / records.size());
    const double a4 = std::pow(std::max(fit.amplitude, 1e-300), 4);
    fit.phase_stderr = std::sqrt(std::max(
        (a * a * cov(1, 1) + b * b * cov(0, 0) - 2 * a * b * cov(0, 1)) / a4,
        0.0));
    const double amp_err = std::sqrt(std::max(
        (a * a * cov(0, 0) + b * b * cov(1, 1) + 2 * a * b * cov(0, 1)) /
            std::max(fit.amplitude * fit.amplitude, 1e-300),
        0.0));
    fit.amplitude_significant = fit.amplitude > 3.0 * amp_err;
    return fit;
}

}  // namespace csqpt
