#include "csqpt/state_mle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csqpt {

namespace {

constexpr double kProbFloor = 1e-12;

}  // namespace

std::vector<Matrix> mle_povm(const BinnedHistogram& hist, double eta,
                             FockDim dim) {
    const int np = hist.phase_bins();
    if (np <= 0 || hist.quad_bins() <= 0)
        throw std::invalid_argument("empty histogram");
    std::vector<Matrix> povm;
    povm.reserve(static_cast<std::size_t>(np) * hist.quad_bins());
    for (int p = 0; p < np; ++p) {
        double theta = 0.5 * (hist.phase_edges[p] + hist.phase_edges[p + 1]);
        auto elems = povm_elements(hist.quad_edges, theta, eta, dim);
        // Each phase bin is one of np equally likely LO settings.
        for (auto& e : elems) povm.push_back(e / static_cast<double>(np));
    }
    return povm;
}

BinnedHistogram expected_histogram(const DensityMatrix& rho,
                                   const BinnedHistogram& edges_template,
                                   double eta, double total_counts) {
    if (total_counts <= 0)
        throw std::invalid_argument("total_counts must be > 0");
    BinnedHistogram out;
    out.phase_edges = edges_template.phase_edges;
    out.quad_edges = edges_template.quad_edges;
    const int np = out.phase_bins(), nq = out.quad_bins();
    out.counts = Eigen::MatrixXd::Zero(np, nq);
    auto povm = mle_povm(out, eta, rho.dim);
    for (int p = 0; p < np; ++p)
        for (int q = 0; q < nq; ++q) {
            double pr =
                (povm[p * nq + q] * rho.rho).trace().real();
            out.counts(p, q) = total_counts * std::max(pr, 0.0);
        }
    return out;
}

StateMleResult reconstruct_state(const BinnedHistogram& hist,
                                 const StateMleConfig& config) {
    if (hist.total() <= 0) throw std::invalid_argument("histogram is empty");
    const int d = config.dim.size();
    const int np = hist.phase_bins(), nq = hist.quad_bins();
    auto povm = mle_povm(hist, config.efficiency, config.dim);

    // Stack the non-empty bins: row j of `omat` is vec(Pi_j^T), so
    // omat * vec(rho) gives all bin probabilities in one product.
    int n_used = 0;
    for (int p = 0; p < np; ++p)
        for (int q = 0; q < nq; ++q)
            if (hist.counts(p, q) > 0) ++n_used;
    Matrix omat(n_used, d * d);
    Eigen::VectorXd counts(n_used);
    {
        int j = 0;
        for (int p = 0; p < np; ++p)
            for (int q = 0; q < nq; ++q) {
                if (hist.counts(p, q) <= 0) continue;
                Matrix t = povm[p * nq + q].transpose();
                omat.row(j) = Eigen::Map<Eigen::VectorXcd>(t.data(), d * d);
                counts(j) = hist.counts(p, q);
                ++j;
            }
    }

    Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
    MleDiagnostics diag;
    diag.log_likelihood_trace.reserve(
        std::min(config.max_iterations, 4096));
    double prev_ll = -std::numeric_limits<double>::infinity();
    Eigen::VectorXcd w(n_used);
    for (int it = 0; it < config.max_iterations; ++it) {
        Eigen::VectorXcd probs =
            omat * Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
        double ll = 0;
        for (int j = 0; j < n_used; ++j) {
            double pj = probs(j).real();
            if (pj < kProbFloor) {
                pj = kProbFloor;
                diag.regularized_bins = true;
            }
            w(j) = counts(j) / pj;
            ll += counts(j) * std::log(pj);
        }
        Eigen::VectorXcd rvec = omat.transpose() * w;
        Matrix r =
            Eigen::Map<Matrix>(rvec.data(), d, d).transpose();
        Matrix next = r * rho * r;
        double tr = next.trace().real();
        if (!(tr > 0)) throw std::runtime_error("MLE iterate lost its trace");
        rho = ((next + next.adjoint()) / (2.0 * tr)).eval();

        diag.iterations_run = it + 1;
        diag.final_log_likelihood = ll;
        if (diag.log_likelihood_trace.size() < 4096)
            diag.log_likelihood_trace.push_back(ll);
        if (it > 0 && std::abs(ll - prev_ll) <=
                          config.log_likelihood_tol * std::abs(ll)) {
            diag.converged = true;
            break;
        }
        prev_ll = ll;
    }

    // The iteration approaches rank-deficient optima at O(1/k), leaving a
    // slowly-decaying remnant in weakly-sensed directions. Zero negligible
    // eigenvalues, most aggressive threshold first, and keep the cleaned
    // state only if it does not cost likelihood.
    auto log_likelihood = [&](const Matrix& candidate) {
        Eigen::VectorXcd probs =
            omat * Eigen::Map<const Eigen::VectorXcd>(candidate.data(), d * d);
        double ll = 0;
        for (int j = 0; j < n_used; ++j)
            ll += counts(j) * std::log(std::max(probs(j).real(), kProbFloor));
        return ll;
    };
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
        const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        const double top = ev.maxCoeff();
        for (double tau : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
            Eigen::VectorXd kept =
                (ev.array() >= tau * top).select(ev, 0.0);
            double tr = kept.sum();
            if (tr <= 0 || (kept - ev).cwiseAbs().maxCoeff() == 0.0) continue;
            Matrix cleaned = es.eigenvectors() * (kept / tr).asDiagonal() *
                             es.eigenvectors().adjoint();
            double ll = log_likelihood(cleaned);
            if (ll >= diag.final_log_likelihood -
                          1e-12 * std::abs(diag.final_log_likelihood)) {
                rho = std::move(cleaned);
                diag.final_log_likelihood = ll;
                break;
            }
        }
    }

    DensityMatrix state{config.dim, rho, 0.0};
    return StateMleResult{std::move(state), std::move(diag)};
}

}  // namespace csqpt
