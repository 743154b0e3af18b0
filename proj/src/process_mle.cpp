#include "csqpt/process_mle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace csqpt {

namespace {

constexpr double kProbFloor = 1e-12;

// Hermitian inverse square root with an eigenvalue floor.
Matrix inv_sqrt(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-12);
    return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().adjoint();
}

// Clamp eigenvalues below one (trace-non-increasing normalization only
// shrinks where the raw update overshoots).
Matrix inv_sqrt_clipped(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1.0);
    return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().adjoint();
}

// Zero the elements of an operator on input (x) output space that lie off
// the phase-covariant band m - k == n - l (row (m,k), col (n,l)).
void twirl(Matrix& op, int d) {
    for (int m = 0; m < d; ++m)
        for (int k = 0; k < d; ++k)
            for (int n = 0; n < d; ++n)
                for (int l = 0; l < d; ++l)
                    if (m - k != n - l) op(m * d + k, n * d + l) = 0;
}

// Unnormalized output sigma(k,l) = sum_mn J[(m,k),(n,l)] rho(m,n).
Matrix propagate(const Matrix& jam, const Matrix& rho, int d) {
    Matrix sigma = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            Complex s = 0;
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    s += jam(m * d + k, n * d + l) * rho(m, n);
            sigma(k, l) = s;
        }
    return sigma;
}

// Partial trace over the output factor of a d^2 x d^2 operator.
Matrix trace_out(const Matrix& op, int d) {
    Matrix t = Matrix::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int k = 0; k < d; ++k) t(m, n) += op(m * d + k, n * d + k);
    return t;
}

double wrap_pi(double a) {
    while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
    return a;
}

struct ProbeData {
    Matrix rho_t;             // input state, transposed
    Matrix omat;              // row j = vec(G_j^T) over bins with f > 0
    Eigen::VectorXd counts;   // matching counts
};

}  // namespace

ProcessMleResult reconstruct_process(const ProbeSet& probes,
                                     const ProcessMleConfig& config) {
    if (probes.probes.empty()) throw std::invalid_argument("no probes");
    if (config.working_dim.n_max < config.dim.n_max)
        throw std::invalid_argument("working_dim must be >= reported dim");
    const FockDim wdim = config.working_dim;
    const int d = wdim.size();
    const int d2 = d * d;

    std::vector<ProbeData> data;
    data.reserve(probes.probes.size());
    for (const auto& probe : probes.probes) {
        ProbeData pd;
        DensityMatrix rho_in =
            (config.use_reconstructed_inputs && probe.input_hist)
                ? reconstruct_state(*probe.input_hist,
                                    StateMleConfig{wdim, 4000, 1e-10,
                                                   probes.eta})
                      .state
                : coherent_state(CoherentAmplitude{probe.alpha.alpha}, wdim);
        pd.rho_t = rho_in.rho.transpose();
        auto povm = mle_povm(probe.output_hist, probes.eta, wdim);
        const int np = probe.output_hist.phase_bins();
        const int nq = probe.output_hist.quad_bins();
        int n_used = 0;
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < nq; ++q)
                if (probe.output_hist.counts(p, q) > 0) ++n_used;
        pd.omat.resize(n_used, d * d);
        pd.counts.resize(n_used);
        int j = 0;
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < nq; ++q) {
                double f = probe.output_hist.counts(p, q);
                if (f <= 0) continue;
                Matrix t = povm[p * nq + q].transpose();
                pd.omat.row(j) = Eigen::Map<Eigen::VectorXcd>(t.data(), d * d);
                pd.counts(j) = f;
                ++j;
            }
        data.push_back(std::move(pd));
    }

    // Start from the depolarizing channel: on the covariant band, trace
    // preserving, full rank.
    Matrix jam = Matrix::Zero(d2, d2);
    for (int m = 0; m < d; ++m)
        for (int k = 0; k < d; ++k)
            jam(m * d + k, m * d + k) = 1.0 / d;

    MleDiagnostics diag;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < config.iterations; ++it) {
        Matrix r = Matrix::Zero(d2, d2);
        double ll = 0;
        for (const auto& pd : data) {
            Matrix sigma = propagate(jam, pd.rho_t.transpose(), d);
            const int n_used = static_cast<int>(pd.counts.size());
            Eigen::VectorXcd probs =
                pd.omat *
                Eigen::Map<const Eigen::VectorXcd>(sigma.data(), d * d);
            Eigen::VectorXcd w(n_used);
            for (int j = 0; j < n_used; ++j) {
                double pj = probs(j).real();
                if (pj < kProbFloor) {
                    pj = kProbFloor;
                    diag.regularized_bins = true;
                }
                w(j) = pd.counts(j) / pj;
                ll += pd.counts(j) * std::log(pj);
            }
            Eigen::VectorXcd mvec = pd.omat.transpose() * w;
            Matrix m_acc = Eigen::Map<Matrix>(mvec.data(), d, d).transpose();
            // r += rho^T (x) m_acc
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    Complex w = pd.rho_t(m, n);
                    if (w == Complex(0, 0)) continue;
                    r.block(m * d, n * d, d, d) += w * m_acc;
                }
        }
        if (config.phase_covariant) twirl(r, d);

        Matrix rjr = r * jam * r;
        Matrix lam = trace_out(rjr, d);
        Matrix half = (config.trace_mode == TraceMode::preserving)
                          ? inv_sqrt(lam)
                          : inv_sqrt_clipped(lam);
        // (half (x) I) rjr (half (x) I)
        Matrix next = Matrix::Zero(d2, d2);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                Matrix blk = Matrix::Zero(d, d);
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        Complex w = half(m, a) * half(b, n);
                        if (w == Complex(0, 0)) continue;
                        blk += w * rjr.block(a * d, b * d, d, d);
                    }
                next.block(m * d, n * d, d, d) = blk;
            }
        jam = ((next + next.adjoint()) / 2.0).eval();

        diag.iterations_run = it + 1;
        diag.final_log_likelihood = ll;
        if (diag.log_likelihood_trace.size() < 4096)
            diag.log_likelihood_trace.push_back(ll);
        if (config.log_likelihood_tol > 0 && it > 0 &&
            std::abs(ll - prev_ll) <=
                config.log_likelihood_tol * std::abs(ll)) {
            diag.converged = true;
            break;
        }
        prev_ll = ll;
    }
    if (config.log_likelihood_tol <= 0) diag.converged = true;

    ProcessMleResult result{ProcessTensor{config.dim},
                            ProcessTensor::from_jamiolkowski(wdim, jam),
                            std::move(diag)};
    result.tensor = result.working_tensor.truncated(config.dim);
    return result;
}

double output_phase(const ProcessTensor& tensor, const DensityMatrix& rho_in,
                    int k, int l) {
    if (tensor.dim() != rho_in.dim)
        throw std::invalid_argument("tensor/state dimension mismatch");
    const int d = tensor.size();
    Complex s = 0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            s += tensor(k, l, m, n) * rho_in.rho(m, n);
    if (std::abs(s) < 1e-12)
        throw std::runtime_error("output matrix element vanishes");
    return std::arg(s);
}

PhaseSlice phase_slice(const ProcessTensor& tensor, int k, int l,
                       double magnitude_floor) {
    const int d = tensor.size();
    if (k < 0 || l < 0 || k >= d || l >= d)
        throw std::invalid_argument("slice indices outside truncation");
    PhaseSlice s;
    s.k = k;
    s.l = l;
    s.values = RealMatrix::Zero(d, d);
    s.defined.setConstant(d, d, false);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            Complex e = tensor(k, l, m, n);
            if (std::abs(e) >= magnitude_floor) {
                s.values(m, n) = std::arg(e);
                s.defined(m, n) = true;
            }
        }
    return s;
}

double process_fidelity(const ProcessTensor& a, const ProcessTensor& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("tensor dimension mismatch");
    return operator_fidelity(a.jamiolkowski(), b.jamiolkowski());
}

BootstrapSummary bootstrap(const ProbeSet& probes,
                           const ProcessMleConfig& config,
                           const ProcessTensor& point_estimate,
                           int n_resamples, const RandomStream& rng) {
    if (n_resamples <= 0) throw std::invalid_argument("need >= 1 resample");
    const int d = config.dim.size();
    PhaseSlice point_slice = phase_slice(point_estimate);

    BootstrapSummary summary;
    summary.fidelities.reserve(n_resamples);
    // Circular statistics over resampled slice phases.
    Matrix resultant = Matrix::Zero(d, d);
    Eigen::MatrixXi defined_count = Eigen::MatrixXi::Zero(d, d);

    for (int r = 0; r < n_resamples; ++r) {
        ProbeSet resampled = probes;
        RandomStream sub(rng.seed(), substream(rng.stream(), r));
        std::uint64_t counter = 0;
        for (auto& probe : resampled.probes) {
            auto& c = probe.output_hist.counts;
            for (int p = 0; p < c.rows(); ++p)
                for (int q = 0; q < c.cols(); ++q, ++counter)
                    if (c(p, q) > 0)
                        c(p, q) = static_cast<double>(
                            sub.poisson(c(p, q), counter));
        }
        auto res = reconstruct_process(resampled, config);
        summary.fidelities.push_back(
            process_fidelity(res.tensor, point_estimate));
        PhaseSlice s = phase_slice(res.tensor);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                if (s.defined(m, n) && point_slice.defined(m, n)) {
                    resultant(m, n) += std::exp(Complex(0, s.values(m, n)));
                    defined_count(m, n) += 1;
                }
    }

    summary.slice_mean = RealMatrix::Zero(d, d);
    summary.slice_stddev = RealMatrix::Zero(d, d);
    summary.slice_defined.setConstant(d, d, false);
    double max_spread = 0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (defined_count(m, n) != n_resamples) continue;
            Complex mean_vec = resultant(m, n) / static_cast<double>(n_resamples);
            summary.slice_defined(m, n) = true;
            summary.slice_mean(m, n) = std::arg(mean_vec);
            double rlen = std::min(std::abs(mean_vec), 1.0);
            // circular stddev; ~sample stddev for tight distributions
            summary.slice_stddev(m, n) =
                std::sqrt(std::max(-2.0 * std::log(std::max(rlen, 1e-300)),
                                   0.0));
            double ref = std::abs(point_slice.values(m, n));
            if (ref > 1e-6)
                max_spread =
                    std::max(max_spread, summary.slice_stddev(m, n) / ref);
        }
    summary.max_relative_slice_spread = max_spread;
    return summary;
}

SqueezedPrediction predict_squeezed(const ProcessTensor& tensor,
                                    const SqueezingSpec& spec) {
    DensityMatrix in = squeezed_vacuum(spec, tensor.dim());
    DensityMatrix out = apply_process(tensor, in).state;

    // var(theta) = C + Re(e^{-2 i theta} D) with
    //   C = 1/2 + <n> - |<a>|^2,  D = <a^2> - <a>^2  (exactly sinusoidal).
    auto sinusoid = [](const DensityMatrix& rho, double& c, Complex& dcoef) {
        const int d = rho.size();
        Complex a = 0, a2 = 0;
        double n = 0;
        for (int k = 0; k < d; ++k) {
            n += k * rho.rho(k, k).real();
            if (k + 1 < d) a += std::sqrt(k + 1.0) * rho.rho(k + 1, k);
            if (k + 2 < d)
                a2 += std::sqrt((k + 1.0) * (k + 2.0)) * rho.rho(k + 2, k);
        }
        c = 0.5 + n - std::norm(a);
        dcoef = a2 - a * a;
    };
    double c_in, c_out;
    Complex d_in, d_out;
    sinusoid(in, c_in, d_in);
    sinusoid(out, c_out, d_out);

    SqueezedPrediction pred;
    pred.var_min_db = 10.0 * std::log10((c_out - std::abs(d_out)) / 0.5);
    pred.var_max_db = 10.0 * std::log10((c_out + std::abs(d_out)) / 0.5);

    auto axis = [](Complex dcoef) {
        // min of C + |D| cos(2 theta - arg D) at 2 theta = arg D + pi
        return (std::arg(dcoef) + std::numbers::pi) / 2.0;
    };
    double shift = 0;
    if (std::abs(d_in) > 1e-12 && std::abs(d_out) > 1e-12) {
        shift = wrap_pi(2.0 * (axis(d_out) - axis(d_in))) / 2.0;
    }
    pred.phase_shift = shift;

    double n_in = mean_photon_number(in), n_out = mean_photon_number(out);
    pred.transmission = (n_in > 0) ? n_out / n_in : 1.0;

    const int n_sweep = 180;
    pred.sweep_theta.resize(n_sweep);
    pred.sweep_variance.resize(n_sweep);
    for (int i = 0; i < n_sweep; ++i) {
        double th = std::numbers::pi * i / n_sweep;
        pred.sweep_theta[i] = th;
        pred.sweep_variance[i] =
            c_out + (std::exp(Complex(0, -2.0 * th)) * d_out).real();
    }
    return pred;
}

QubitPrediction predict_qubit(const ProcessTensor& tensor) {
    DensityMatrix in = fock_qubit(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
                                  tensor.dim());
    DensityMatrix out = apply_process(tensor, in).state;
    QubitPrediction pred;
    pred.phi = output_phase(tensor, in, 0, 1);
    pred.coherence_retention =
        std::abs(out.rho(0, 1)) / std::abs(in.rho(0, 1));
    return pred;
}

ProbeSet analytic_probe_set(const ProcessTensor& truth,
                            const std::vector<Complex>& alphas,
                            const BinnedHistogram& edges_template, double eta,
                            double counts_per_probe) {
    ProbeSet set;
    set.eta = eta;
    set.probes.reserve(alphas.size());
    for (Complex a : alphas) {
        DensityMatrix in = coherent_state(CoherentAmplitude{a}, truth.dim());
        DensityMatrix out = apply_process(truth, in).state;
        Probe probe;
        probe.alpha = CoherentAmplitude{a};
        probe.output_hist =
            expected_histogram(out, edges_template, eta, counts_per_probe);
        set.probes.push_back(std::move(probe));
    }
    return set;
}

}  // namespace csqpt
