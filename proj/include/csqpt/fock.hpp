#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace csqpt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Truncated Fock space: photon numbers 0..n_max, matrix dimension n_max+1.
struct FockDim {
    int n_max = 6;
    int size() const { return n_max + 1; }
    friend bool operator==(FockDim a, FockDim b) { return a.n_max == b.n_max; }
    friend bool operator!=(FockDim a, FockDim b) { return a.n_max != b.n_max; }
};

/// Density matrix in the truncated Fock basis. Constructors normalize
/// after truncation and keep the discarded tail weight around so callers
/// can judge whether the truncation was adequate.
struct DensityMatrix {
    FockDim dim;
    Matrix rho;                 // (n_max+1) x (n_max+1), Hermitian, trace 1
    double discarded_tail = 0;  // population lost to truncation, pre-normalization

    int size() const { return dim.size(); }
};

struct CoherentAmplitude {
    Complex alpha;
};

/// Squeezing in dB relative to vacuum variance 1/2.
/// squeezing_db <= 0 <= antisqueezing_db; a pure squeezed vacuum has
/// squeezing_db == -antisqueezing_db.
struct SqueezingSpec {
    double squeezing_db = 0;
    double antisqueezing_db = 0;
    double phase = 0;
    bool allow_thermal = false;  // permit asymmetric (thermal-squeezed) specs
};

struct WignerGrid {
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    RealMatrix values;  // values(i, j) = W(x_i, p_j)
};

// ---- constructors -------------------------------------------------------

DensityMatrix coherent_state(CoherentAmplitude alpha, FockDim dim);
DensityMatrix squeezed_vacuum(const SqueezingSpec& spec, FockDim dim);
DensityMatrix fock_qubit(Complex c0, Complex c1, FockDim dim);
DensityMatrix fock_state(int n, FockDim dim);
DensityMatrix maximally_mixed(FockDim dim);

/// Pure state from an amplitude vector (renormalizes, records tail = 0).
DensityMatrix pure_state(const Eigen::VectorXcd& amplitudes, FockDim dim);

// ---- diagnostics --------------------------------------------------------

double mean_photon_number(const DensityMatrix& rho);

/// Var(x_theta) with x_theta = (a e^{-i theta} + a^dag e^{i theta})/sqrt(2);
/// vacuum value 1/2.
double quadrature_variance(const DensityMatrix& rho, double theta);

double mean_quadrature(const DensityMatrix& rho, double theta);

/// Average of quadrature_variance over theta in [0, pi), computed
/// analytically as 1/2 + <n> - |<a>|^2.
double mean_variance(const DensityMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, in [0, 1].
double state_fidelity(const DensityMatrix& a, const DensityMatrix& b);
double operator_fidelity(const Matrix& a, const Matrix& b);

struct WignerGridSpec {
    double x_min, x_max;
    double p_min, p_max;
    int x_points = 81;
    int p_points = 81;
};

WignerGridSpec default_wigner_grid(FockDim dim);
WignerGrid wigner(const DensityMatrix& rho, const WignerGridSpec& spec);

// ---- validation ---------------------------------------------------------

struct StateCheck {
    double hermiticity_error = 0;   // max |rho_mn - conj(rho_nm)|
    double trace_error = 0;         // |Tr(rho) - 1|
    double min_eigenvalue = 0;
    bool ok(double herm_tol = 1e-12, double trace_tol = 1e-9,
            double psd_tol = 1e-9) const {
        return hermiticity_error <= herm_tol && trace_error <= trace_tol &&
               min_eigenvalue >= -psd_tol;
    }
};

StateCheck check_state(const DensityMatrix& rho);

/// Truncation guard for coherent probes: |alpha|^2 + 4|alpha| + 4 <= n_max.
bool truncation_adequate(CoherentAmplitude alpha, FockDim dim);

// ---- low-level helpers shared across modules ----------------------------

/// Annihilation operator: a|n> = sqrt(n)|n-1>.
Matrix annihilation(FockDim dim);

double log_factorial(int n);
double log_binomial(int n, int k);

/// Harmonic-oscillator wavefunctions psi_n(x) for n = 0..n_max, one row
/// per n (vacuum variance 1/2 convention).
RealMatrix hermite_psi(FockDim dim, const std::vector<double>& x);

}  // namespace csqpt
