#include "csqpt/channel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csqpt {

namespace {

double binom(int n, int k) { return std::exp(log_binomial(n, k)); }

// Loss Kraus operators A_j = sum_n sqrt(C(n,j) T^{n-j} (1-T)^j) |n-j><n|.
std::vector<Matrix> loss_kraus(double transmission, FockDim dim) {
    const int d = dim.size();
    std::vector<Matrix> ks;
    ks.reserve(d);
    for (int j = 0; j < d; ++j) {
        Matrix k = Matrix::Zero(d, d);
        for (int n = j; n < d; ++n) {
            k(n - j, n) = std::sqrt(binom(n, j) *
                                    std::pow(transmission, n - j) *
                                    std::pow(1.0 - transmission, j));
        }
        ks.push_back(std::move(k));
    }
    return ks;
}

// Associated Laguerre L_n^k(z), upward recurrence.
double laguerre(int n, int k, double z) {
    if (n == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 + k - z;
    for (int i = 1; i < n; ++i) {
        double next = ((2.0 * i + 1.0 + k - z) * l - (i + k) * lm1) / (i + 1.0);
        lm1 = l;
        l = next;
    }
    return l;
}

Matrix detail_gaussian_noise(const Matrix& rho_small, FockDim dim, double v);

}  // namespace

SignalPowerMap default_signal_power_map() {
    // Endpoints anchored at (0 mW -> 2.13 rad, 25%) and (2.10 mW -> 0.67 rad,
    // 3.5%); intermediate values are an illustrative interpolation, phase
    // linear in power and transmission geometric.
    SignalPowerMap map;
    const double p_lo = 0.55, p_hi = 2.10;
    const int n = 6;
    for (int i = 0; i < n; ++i) {
        double p = p_lo + (p_hi - p_lo) * i / (n - 1.0);
        double phase = 2.13 - (2.13 - 0.67) * (p / p_hi);
        double trans = 0.25 * std::pow(0.035 / 0.25, p / p_hi);
        char label[64];
        std::snprintf(label, sizeof(label), "N-type @ %.2f mW", p);
        map.push_back({p, ChannelParams{phase, trans, 0.0, label}});
    }
    return map;
}

ProcessTensor ProcessTensor::from_jamiolkowski(FockDim dim, Matrix jam) {
    const int d2 = dim.size() * dim.size();
    if (jam.rows() != d2 || jam.cols() != d2)
        throw std::invalid_argument("Jamiolkowski matrix size mismatch");
    ProcessTensor t(dim);
    t.jam_ = std::move(jam);
    return t;
}

ProcessTensor ProcessTensor::truncated(FockDim dim) const {
    if (dim.n_max > dim_.n_max)
        throw std::invalid_argument("cannot truncate upward");
    ProcessTensor t(dim);
    const int d = dim.size();
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    t.at(k, l, m, n) = (*this)(k, l, m, n);
    return t;
}

TensorCheck check_tensor(const ProcessTensor& t) {
    TensorCheck c;
    const int d = t.size();
    double herm = 0;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    herm = std::max(herm,
                                    std::abs(t(l, k, n, m) -
                                             std::conj(t(k, l, m, n))));
    c.hermiticity_error = herm;
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        (t.jamiolkowski() + t.jamiolkowski().adjoint()) / 2.0);
    c.min_choi_eigenvalue = es.eigenvalues().minCoeff();
    Matrix tr = Matrix::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int k = 0; k < d; ++k) tr(m, n) += t(k, k, m, n);
    Eigen::SelfAdjointEigenSolver<Matrix> es2((tr + tr.adjoint()) / 2.0);
    c.max_trace_eigenvalue = es2.eigenvalues().maxCoeff();
    return c;
}

ProcessTensor oracle_tensor(const ChannelParams& params, FockDim dim) {
    if (params.transmission <= 0 || params.transmission > 1)
        throw std::invalid_argument("transmission must be in (0, 1]");
    if (params.excess_noise < 0)
        throw std::invalid_argument("excess noise must be >= 0");
    const int d = dim.size();
    const double T = params.transmission;
    ProcessTensor t(dim);
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
            for (int m = k; m < d; ++m) {
                const int n = m - k + l;  // phase covariance: m-k == n-l
                if (n < l || n >= d) continue;
                double mag = std::sqrt(binom(m, m - k) * binom(n, n - l)) *
                             std::pow(T, (k + l) / 2.0) *
                             std::pow(1.0 - T, m - k);
                t.at(k, l, m, n) =
                    mag * std::exp(Complex(0, params.phase_shift * (m - n)));
            }
        }
    }
    if (params.excess_noise > 0) {
        // Compose the Gaussian-noise kernel onto each input basis column.
        ProcessTensor noisy(dim);
        for (int m = 0; m < d; ++m) {
            for (int n = 0; n < d; ++n) {
                Matrix mid = Matrix::Zero(d, d);
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        mid(k, l) = t(k, l, m, n);
                Matrix out = detail_gaussian_noise(mid, dim, params.excess_noise);
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        noisy.at(k, l, m, n) = out(k, l);
            }
        }
        t = noisy;
    }
    return t;
}

ApplyResult apply_process(const ProcessTensor& tensor, const DensityMatrix& rho) {
    if (tensor.dim() != rho.dim)
        throw std::invalid_argument("tensor/state dimension mismatch");
    const int d = tensor.size();
    Matrix out = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            Complex s = 0;
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    s += tensor(k, l, m, n) * rho.rho(m, n);
            out(k, l) = s;
        }
    double trace = out.trace().real();
    if (trace <= 0) throw std::invalid_argument("process output has trace <= 0");
    out /= trace;
    out = ((out + out.adjoint()) / 2.0).eval();
    return ApplyResult{DensityMatrix{tensor.dim(), std::move(out),
                                     rho.discarded_tail},
                       trace};
}

DensityMatrix loss_map(const DensityMatrix& rho, double transmission) {
    if (transmission <= 0 || transmission > 1)
        throw std::invalid_argument("transmission must be in (0, 1]");
    if (transmission == 1.0) return rho;
    auto ks = loss_kraus(transmission, rho.dim);
    Matrix out = Matrix::Zero(rho.size(), rho.size());
    for (const auto& k : ks) out += k * rho.rho * k.adjoint();
    out = ((out + out.adjoint()) / 2.0).eval();
    return DensityMatrix{rho.dim, std::move(out), rho.discarded_tail};
}

Matrix loss_map_adjoint(const Matrix& op, double transmission, FockDim dim) {
    if (transmission == 1.0) return op;
    auto ks = loss_kraus(transmission, dim);
    Matrix out = Matrix::Zero(dim.size(), dim.size());
    for (const auto& k : ks) out += k.adjoint() * op * k;
    return out;
}

Matrix displacement_operator(Complex beta, FockDim dim) {
    const int d = dim.size();
    const double b2 = std::norm(beta);
    Matrix D(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n <= m; ++n) {
            double mag = std::exp(0.5 * (log_factorial(n) - log_factorial(m)) -
                                  b2 / 2.0) *
                         laguerre(n, m - n, b2);
            D(m, n) = mag * std::pow(beta, m - n);
            if (m != n)
                D(n, m) = mag * std::pow(-std::conj(beta), m - n);
        }
    }
    return D;
}

namespace {

// Gaussian-weighted displacement mixture raising mean variance by v,
// evaluated with Gauss-Hermite quadrature in a padded space.
Matrix detail_gaussian_noise(const Matrix& rho_small, FockDim dim, double v) {
    const int d = dim.size();
    const int pad = std::max(10, d);
    FockDim big{dim.n_max + pad};
    const int D = big.size();
    Matrix rho_big = Matrix::Zero(D, D);
    rho_big.topLeftCorner(d, d) = rho_small;

    // P(beta) = exp(-|beta|^2 / v) / (pi v): complex Gaussian with E|b|^2 = v.
    // 20-node Gauss-Hermite per axis (weight e^{-t^2}); beta = sqrt(v) (t1 + i t2).
    static const int kNodes = 20;
    static double nodes[kNodes], weights[kNodes];
    static bool init = false;
    if (!init) {
        // Golub-Welsch on the Hermite Jacobi matrix.
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(kNodes, kNodes);
        for (int i = 1; i < kNodes; ++i) {
            double b = std::sqrt(i / 2.0);
            jac(i, i - 1) = jac(i - 1, i) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
        for (int i = 0; i < kNodes; ++i) {
            nodes[i] = es.eigenvalues()(i);
            double v0 = es.eigenvectors()(0, i);
            weights[i] = std::sqrt(std::numbers::pi) * v0 * v0;
        }
        init = true;
    }

    Matrix acc = Matrix::Zero(D, D);
    double wsum = 0;
    for (int i = 0; i < kNodes; ++i) {
        for (int j = 0; j < kNodes; ++j) {
            Complex beta = std::sqrt(v) * Complex(nodes[i], nodes[j]);
            double w = weights[i] * weights[j] / std::numbers::pi;
            Matrix disp = displacement_operator(beta, big);
            acc += w * (disp * rho_big * disp.adjoint());
            wsum += w;
        }
    }
    acc /= wsum;
    return acc.topLeftCorner(d, d);
}

}  // namespace

DensityMatrix thermalize(const DensityMatrix& rho, double added_variance) {
    if (added_variance < 0)
        throw std::invalid_argument("added variance must be >= 0");
    if (added_variance == 0) return rho;
    Matrix out = detail_gaussian_noise(rho.rho, rho.dim, added_variance);
    double tr = out.trace().real();
    double tail = 1.0 - tr;
    out /= tr;
    out = ((out + out.adjoint()) / 2.0).eval();
    return DensityMatrix{rho.dim, std::move(out),
                         rho.discarded_tail + std::max(tail, 0.0)};
}

}  // namespace csqpt
