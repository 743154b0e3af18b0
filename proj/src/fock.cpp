#include "csqpt/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace csqpt {

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix normalized(FockDim dim, Matrix rho, double tail) {
    double tr = rho.trace().real();
    if (tr <= 0) throw std::invalid_argument("state has non-positive trace");
    rho /= tr;
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    return DensityMatrix{dim, std::move(rho), tail};
}

}  // namespace

double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

Matrix annihilation(FockDim dim) {
    const int d = dim.size();
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

DensityMatrix pure_state(const Eigen::VectorXcd& amplitudes, FockDim dim) {
    if (amplitudes.size() != dim.size())
        throw std::invalid_argument("amplitude vector size mismatch");
    double norm2 = amplitudes.squaredNorm();
    if (norm2 <= 0) throw std::invalid_argument("zero state vector");
    Matrix rho = amplitudes * amplitudes.adjoint();
    return normalized(dim, std::move(rho), 0.0);
}

bool truncation_adequate(CoherentAmplitude alpha, FockDim dim) {
    double a = std::abs(alpha.alpha);
    return a * a + 4 * a + 4 <= static_cast<double>(dim.n_max);
}

DensityMatrix coherent_state(CoherentAmplitude alpha, FockDim dim) {
    if (!std::isfinite(alpha.alpha.real()) || !std::isfinite(alpha.alpha.imag()))
        throw std::invalid_argument("non-finite coherent amplitude");
    const int d = dim.size();
    Eigen::VectorXcd c(d);
    const double a2 = std::norm(alpha.alpha);
    // <n|alpha> = e^{-|a|^2/2} a^n / sqrt(n!)
    Complex term = std::exp(-a2 / 2.0);
    for (int n = 0; n < d; ++n) {
        c(n) = term;
        term *= alpha.alpha / std::sqrt(static_cast<double>(n + 1));
    }
    double captured = c.squaredNorm();
    Matrix rho = c * c.adjoint();
    return normalized(dim, std::move(rho), 1.0 - captured);
}

DensityMatrix squeezed_vacuum(const SqueezingSpec& spec, FockDim dim) {
    if (spec.squeezing_db > 0 || spec.antisqueezing_db < 0)
        throw std::invalid_argument("squeezing_db must be <= 0 <= antisqueezing_db");
    if (!spec.allow_thermal &&
        std::abs(spec.squeezing_db + spec.antisqueezing_db) > 1e-9)
        throw std::invalid_argument(
            "asymmetric squeezing requires the thermal-squeezed flag");
    const double r = std::abs(spec.squeezing_db) * std::numbers::ln10 / 20.0;
    const int d = dim.size();
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(d);
    // c_{2k} = (-e^{i phi} tanh r)^k sqrt((2k)!)/(2^k k!) / sqrt(cosh r)
    const Complex q = -std::exp(Complex(0, spec.phase)) * std::tanh(r);
    const double qmag = std::abs(q);
    const double qarg = std::arg(q);
    double captured = 0;
    for (int k = 0; 2 * k < d; ++k) {
        double logmag = 0.5 * log_factorial(2 * k) - k * std::numbers::ln2 -
                        log_factorial(k) - 0.5 * std::log(std::cosh(r));
        double mag = std::exp(logmag) * std::pow(qmag, k);
        c(2 * k) = (k == 0 || qmag > 0)
                       ? mag * std::exp(Complex(0, k * qarg))
                       : Complex(0, 0);
        captured += std::norm(c(2 * k));
    }
    Matrix rho = c * c.adjoint();
    return normalized(dim, std::move(rho), 1.0 - captured);
}

DensityMatrix fock_qubit(Complex c0, Complex c1, FockDim dim) {
    if (std::abs(c0) == 0 && std::abs(c1) == 0)
        throw std::invalid_argument("both qubit coefficients are zero");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim.size());
    c(0) = c0;
    if (dim.size() > 1) c(1) = c1;
    return pure_state(c, dim);
}

DensityMatrix fock_state(int n, FockDim dim) {
    if (n < 0 || n > dim.n_max)
        throw std::invalid_argument("Fock index outside truncation");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim.size());
    c(n) = 1.0;
    return pure_state(c, dim);
}

DensityMatrix maximally_mixed(FockDim dim) {
    Matrix rho = Matrix::Identity(dim.size(), dim.size());
    return normalized(dim, std::move(rho), 0.0);
}

double mean_photon_number(const DensityMatrix& rho) {
    double s = 0;
    for (int n = 0; n < rho.size(); ++n) s += n * rho.rho(n, n).real();
    return s;
}

namespace {

// First and second ladder moments: <a>, <a^2>, <a^dag a>.
struct LadderMoments {
    Complex a, a2;
    double n;
};

LadderMoments ladder_moments(const DensityMatrix& rho) {
    const int d = rho.size();
    LadderMoments m{0, 0, 0};
    for (int k = 0; k < d; ++k) {
        m.n += k * rho.rho(k, k).real();
        if (k + 1 < d)
            m.a += std::sqrt(k + 1.0) * rho.rho(k + 1, k);
        if (k + 2 < d)
            m.a2 += std::sqrt((k + 1.0) * (k + 2.0)) * rho.rho(k + 2, k);
    }
    return m;
}

}  // namespace

double mean_quadrature(const DensityMatrix& rho, double theta) {
    auto m = ladder_moments(rho);
    return std::sqrt(2.0) * (m.a * std::exp(Complex(0, -theta))).real();
}

double quadrature_variance(const DensityMatrix& rho, double theta) {
    auto m = ladder_moments(rho);
    double x2 = 0.5 + m.n + (m.a2 * std::exp(Complex(0, -2 * theta))).real();
    double x = std::sqrt(2.0) * (m.a * std::exp(Complex(0, -theta))).real();
    return x2 - x * x;
}

double mean_variance(const DensityMatrix& rho) {
    auto m = ladder_moments(rho);
    return 0.5 + m.n - std::norm(m.a);
}

double operator_fidelity(const Matrix& a, const Matrix& b) {
    Matrix an = a / a.trace().real();
    Matrix bn = b / b.trace().real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(an);
    if (es.eigenvalues().minCoeff() < -1e-6)
        throw std::invalid_argument("fidelity input is not PSD");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix sq = es.eigenvectors() * ev.asDiagonal() *
                es.eigenvectors().adjoint();
    Matrix m = sq * bn * sq;
    Eigen::SelfAdjointEigenSolver<Matrix> es2((m + m.adjoint()) / 2.0);
    double s = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(s * s, 1.0);
}

double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    return operator_fidelity(a.rho, b.rho);
}

StateCheck check_state(const DensityMatrix& rho) {
    StateCheck c;
    c.hermiticity_error = (rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(rho.rho.trace().real() - 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es((rho.rho + rho.rho.adjoint()) / 2.0);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

RealMatrix hermite_psi(FockDim dim, const std::vector<double>& x) {
    const int d = dim.size();
    const int nx = static_cast<int>(x.size());
    RealMatrix psi(d, nx);
    const double norm0 = std::pow(kPi, -0.25);
    for (int i = 0; i < nx; ++i) {
        double g = norm0 * std::exp(-x[i] * x[i] / 2.0);
        psi(0, i) = g;
        if (d > 1) psi(1, i) = std::sqrt(2.0) * x[i] * g;
        for (int n = 2; n < d; ++n) {
            psi(n, i) = std::sqrt(2.0 / n) * x[i] * psi(n - 1, i) -
                        std::sqrt((n - 1.0) / n) * psi(n - 2, i);
        }
    }
    return psi;
}

WignerGridSpec default_wigner_grid(FockDim dim) {
    double L = std::sqrt(2.0 * dim.n_max) + 2.0;
    return WignerGridSpec{-L, L, -L, L, 81, 81};
}

namespace {

// Associated Laguerre L_n^k(z) by upward recurrence.
double assoc_laguerre(int n, int k, double z) {
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + k - z;
    for (int i = 1; i < n; ++i) {
        double next = ((2.0 * i + 1.0 + k - z) * l - (i + k) * lm1) / (i + 1.0);
        lm1 = l;
        l = next;
    }
    return l;
}

}  // namespace

WignerGrid wigner(const DensityMatrix& rho, const WignerGridSpec& spec) {
    if (spec.x_points <= 1 || spec.p_points <= 1)
        throw std::invalid_argument("degenerate Wigner grid");
    const int d = rho.size();
    WignerGrid grid;
    grid.x_axis.resize(spec.x_points);
    grid.p_axis.resize(spec.p_points);
    for (int i = 0; i < spec.x_points; ++i)
        grid.x_axis[i] = spec.x_min +
                         (spec.x_max - spec.x_min) * i / (spec.x_points - 1.0);
    for (int j = 0; j < spec.p_points; ++j)
        grid.p_axis[j] = spec.p_min +
                         (spec.p_max - spec.p_min) * j / (spec.p_points - 1.0);
    grid.values.resize(spec.x_points, spec.p_points);

    // W(x,p) = sum_mn rho_mn W_mn with, for m >= n and beta = (x+ip)/sqrt(2):
    //   W_mn = (1/pi) e^{-2|b|^2} (-1)^n sqrt(n!/m!) (2 conj(b))^{m-n}
    //          L_n^{m-n}(4|b|^2).
    for (int i = 0; i < spec.x_points; ++i) {
        for (int j = 0; j < spec.p_points; ++j) {
            const Complex beta(grid.x_axis[i] / std::sqrt(2.0),
                               grid.p_axis[j] / std::sqrt(2.0));
            const double b2 = std::norm(beta);
            const double envelope = std::exp(-2.0 * b2) / kPi;
            double w = 0;
            for (int m = 0; m < d; ++m) {
                // diagonal term
                double diag = envelope * ((m % 2) ? -1.0 : 1.0) *
                              assoc_laguerre(m, 0, 4.0 * b2);
                w += rho.rho(m, m).real() * diag;
                for (int n = 0; n < m; ++n) {
                    double mag = std::exp(0.5 * (log_factorial(n) -
                                                 log_factorial(m)));
                    Complex kern = envelope * ((n % 2) ? -1.0 : 1.0) * mag *
                                   std::pow(2.0 * std::conj(beta), m - n) *
                                   assoc_laguerre(n, m - n, 4.0 * b2);
                    // rho_mn W_mn + rho_nm W_nm = 2 Re(rho_mn kern)
                    w += 2.0 * (rho.rho(m, n) * kern).real();
                }
            }
            grid.values(i, j) = w;
        }
    }
    return grid;
}

}  // namespace csqpt
