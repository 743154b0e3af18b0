#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "csqpt/state_mle.hpp"
#include "doctest.h"

using namespace csqpt;

namespace {

BinnedHistogram edges_template(double range) {
    std::vector<QuadratureRecord> seed{{0, 0.0, 0.0}};
    return bin_records(seed, BinSpec{40, 40, range});
}

}  // namespace

TEST_CASE("analytic expected counts are a fixed point of the MLE") {
    DensityMatrix truth = coherent_state(CoherentAmplitude{1.1}, FockDim{10});
    BinnedHistogram hist = expected_histogram(truth, edges_template(6.0), 1.0,
                                              50000.0);
    StateMleConfig cfg;
    cfg.dim = FockDim{10};
    cfg.max_iterations = 10000;
    cfg.log_likelihood_tol = 0.0;
    auto result = reconstruct_state(hist, cfg);
    CHECK(state_fidelity(result.state, truth) >= 1.0 - 1e-6);
    CHECK(check_state(result.state).ok(1e-10, 1e-9, 1e-9));
}

TEST_CASE("likelihood is monotone non-decreasing") {
    DensityMatrix truth = squeezed_vacuum(SqueezingSpec{-3.0, 3.0, 0.5},
                                          FockDim{12});
    DetectionParams det;
    det.samples = 20000;
    RandomStream rng(77, 3);
    auto hist = bin_records(sample_quadratures(truth, det, rng));
    StateMleConfig cfg;
    cfg.dim = FockDim{10};
    cfg.max_iterations = 300;
    cfg.log_likelihood_tol = 0.0;
    auto result = reconstruct_state(hist, cfg);
    const auto& trace = result.diagnostics.log_likelihood_trace;
    REQUIRE(trace.size() > 10);
    for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] >= trace[i - 1] - 1e-10 * std::abs(trace[i - 1]));
}

TEST_CASE("Monte-Carlo reconstruction of a coherent state") {
    DensityMatrix truth = coherent_state(CoherentAmplitude{1.3}, FockDim{14});
    DetectionParams det;
    det.samples = 50000;
    RandomStream rng(2024, 1);
    auto hist = bin_records(sample_quadratures(truth, det, rng));
    StateMleConfig cfg;
    cfg.dim = FockDim{10};
    cfg.max_iterations = 2000;
    cfg.log_likelihood_tol = 1e-10;
    auto result = reconstruct_state(hist, cfg);
    DensityMatrix truth10 = coherent_state(CoherentAmplitude{1.3}, FockDim{10});
    CHECK(state_fidelity(result.state, truth10) >= 0.99);
    CHECK(mean_photon_number(result.state) ==
          doctest::Approx(1.3 * 1.3).epsilon(0.05));
}

TEST_CASE("Monte-Carlo reconstruction of squeezed vacuum") {
    SqueezingSpec spec{-4.3, 4.3, 0.0};
    DensityMatrix truth = squeezed_vacuum(spec, FockDim{20});
    DetectionParams det;
    det.samples = 50000;
    RandomStream rng(515, 2);
    auto hist = bin_records(sample_quadratures(truth, det, rng));
    StateMleConfig cfg;
    cfg.dim = FockDim{10};
    cfg.max_iterations = 3000;
    cfg.log_likelihood_tol = 1e-10;
    auto result = reconstruct_state(hist, cfg);
    DensityMatrix truth10 = squeezed_vacuum(spec, FockDim{10});
    CHECK(state_fidelity(result.state, truth10) >= 0.99);
    // Variance extrema survive reconstruction
    double vmin = 1e9;
    for (int i = 0; i < 180; ++i)
        vmin = std::min(vmin, quadrature_variance(result.state,
                                                  std::numbers::pi * i / 180));
    CHECK(vmin == doctest::Approx(0.5 * std::pow(10, -0.43)).epsilon(0.08));
}

TEST_CASE("efficiency-aware POVM undoes detection loss") {
    // Sample through eta = 0.85, reconstruct with the smoothed POVM: the
    // estimate should match the pre-loss state, not the attenuated one.
    DensityMatrix truth = coherent_state(CoherentAmplitude{1.0}, FockDim{14});
    DetectionParams det;
    det.samples = 50000;
    det.efficiency = 0.85;
    RandomStream rng(31, 8);
    auto hist = bin_records(sample_quadratures(truth, det, rng));
    StateMleConfig cfg;
    cfg.dim = FockDim{10};
    cfg.efficiency = 0.85;
    cfg.max_iterations = 2000;
    cfg.log_likelihood_tol = 1e-10;
    auto result = reconstruct_state(hist, cfg);
    DensityMatrix truth10 = coherent_state(CoherentAmplitude{1.0}, FockDim{10});
    CHECK(state_fidelity(result.state, truth10) >= 0.98);
    CHECK(mean_photon_number(result.state) ==
          doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("mle_povm sums to the identity") {
    BinnedHistogram tmpl = edges_template(6.0);
    auto povm = mle_povm(tmpl, 0.9, FockDim{8});
    Matrix sum = Matrix::Zero(9, 9);
    for (const auto& p : povm) sum += p;
    CHECK((sum - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("empty histogram is rejected") {
    BinnedHistogram tmpl = edges_template(6.0);
    tmpl.counts.setZero();
    CHECK_THROWS(reconstruct_state(tmpl, StateMleConfig{}));
}
