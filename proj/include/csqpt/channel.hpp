#pragma once

#include <string>
#include <vector>

#include "csqpt/fock.hpp"

namespace csqpt {

/// Phase rotation + loss (+ optional phase-symmetric excess noise).
struct ChannelParams {
    double phase_shift = 0;   // radians
    double transmission = 1;  // in (0, 1]
    double excess_noise = 0;  // added mean-variance (thermal photons), >= 0
    std::string label;
};

struct SignalPowerPoint {
    double signal_power_mw = 0;
    ChannelParams params;
};

/// Ordered (power -> channel) table; powers strictly increasing.
using SignalPowerMap = std::vector<SignalPowerPoint>;

SignalPowerMap default_signal_power_map();

/// Rank-4 superoperator rho_out_kl = sum_mn E(k,l,m,n) rho_in_mn.
/// Stored as the Jamiolkowski matrix J[(m,k),(n,l)] = E(k,l,m,n) on
/// input (x) output space; the tensor view and the operator view index
/// the same storage, so the reshape is exact by construction.
class ProcessTensor {
  public:
    ProcessTensor() = default;
    explicit ProcessTensor(FockDim dim)
        : dim_(dim), jam_(Matrix::Zero(dim.size() * dim.size(),
                                       dim.size() * dim.size())) {}

    FockDim dim() const { return dim_; }
    int size() const { return dim_.size(); }

    Complex operator()(int k, int l, int m, int n) const {
        return jam_(m * size() + k, n * size() + l);
    }
    Complex& at(int k, int l, int m, int n) {
        return jam_(m * size() + k, n * size() + l);
    }

    const Matrix& jamiolkowski() const { return jam_; }
    Matrix& jamiolkowski() { return jam_; }

    static ProcessTensor from_jamiolkowski(FockDim dim, Matrix jam);

    /// Index restriction to a smaller Fock cutoff.
    ProcessTensor truncated(FockDim dim) const;

  private:
    FockDim dim_;
    Matrix jam_;
};

struct TensorCheck {
    double hermiticity_error = 0;  // max |E_lk^nm - conj(E_kl^mn)|
    double min_choi_eigenvalue = 0;
    double max_trace_eigenvalue = 0;  // eigenvalues of sum_k E_kk^mn
    bool ok(double herm_tol = 1e-10, double cp_tol = 1e-8,
            double trace_tol = 1e-8) const {
        return hermiticity_error <= herm_tol &&
               min_choi_eigenvalue >= -cp_tol &&
               max_trace_eigenvalue <= 1 + trace_tol;
    }
};

TensorCheck check_tensor(const ProcessTensor& t);

/// Closed-form tensor for phase rotation by theta composed with
/// generalized Bernoulli loss at transmission T:
///   E_kl^mn = delta_{m-k,n-l} sqrt(C(m,m-k) C(n,n-l))
///             T^{(k+l)/2} (1-T)^{m-k} e^{i theta (m-n)}   (m >= k, n >= l).
/// excess_noise > 0 is composed numerically via thermalize().
ProcessTensor oracle_tensor(const ChannelParams& params, FockDim dim);

struct ApplyResult {
    DensityMatrix state;
    double trace = 1;  // pre-normalization trace of the raw output
};

ApplyResult apply_process(const ProcessTensor& tensor, const DensityMatrix& rho);

/// Generalized Bernoulli transformation (beamsplitter with vacuum):
///   rho'_kl = sum_j sqrt(C(k+j,j) C(l+j,j)) T^{(k+l)/2} (1-T)^j rho_{k+j,l+j}.
DensityMatrix loss_map(const DensityMatrix& rho, double transmission);

/// Adjoint of the loss map, sum_j A_j^dag X A_j; used for
/// efficiency-smoothed POVM elements.
Matrix loss_map_adjoint(const Matrix& op, double transmission, FockDim dim);

/// Phase-symmetric Gaussian noise raising mean_variance by added_variance
/// (Gaussian-weighted random displacement, evaluated with internal
/// truncation headroom).
DensityMatrix thermalize(const DensityMatrix& rho, double added_variance);

/// Fock-basis displacement operator matrix <m|D(beta)|n>.
Matrix displacement_operator(Complex beta, FockDim dim);

}  // namespace csqpt
