#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "csqpt/fock.hpp"
#include "doctest.h"

using namespace csqpt;

namespace {
const FockDim kDim{14};
}

TEST_CASE("coherent state photon statistics") {
    DensityMatrix rho = coherent_state(CoherentAmplitude{1.3}, kDim);
    CHECK(check_state(rho).ok());
    // Poissonian diagonal: p_n = e^{-|a|^2} |a|^{2n} / n!
    const double a2 = 1.3 * 1.3;
    for (int n = 0; n < 6; ++n) {
        double expected =
            std::exp(-a2 + n * std::log(a2) - log_factorial(n));
        CHECK(rho.rho(n, n).real() == doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(mean_photon_number(rho) == doctest::Approx(a2).epsilon(1e-8));
    // <x_0> = sqrt(2) Re(alpha), all variances 1/2
    CHECK(mean_quadrature(rho, 0.0) ==
          doctest::Approx(std::sqrt(2.0) * 1.3).epsilon(1e-8));
    CHECK(quadrature_variance(rho, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(quadrature_variance(rho, 1.1) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("coherent state with complex amplitude rotates the mean") {
    Complex alpha = 0.9 * std::exp(Complex(0, 0.7));
    DensityMatrix rho = coherent_state(CoherentAmplitude{alpha}, kDim);
    // <x_theta> = sqrt(2) Re(alpha e^{-i theta}): maximal at theta = arg(alpha)
    CHECK(mean_quadrature(rho, 0.7) ==
          doctest::Approx(std::sqrt(2.0) * 0.9).epsilon(1e-8));
    CHECK(mean_quadrature(rho, 0.7 + std::numbers::pi / 2) ==
          doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("truncation guard matches the tail bound") {
    CHECK(truncation_adequate(CoherentAmplitude{1.0}, FockDim{9}));
    CHECK_FALSE(truncation_adequate(CoherentAmplitude{2.0}, FockDim{9}));
    CHECK(truncation_adequate(CoherentAmplitude{2.0}, FockDim{16}));
}

TEST_CASE("squeezed vacuum variance extrema") {
    // -4.3 dB squeezing: min variance 0.5 * 10^{-0.43} = 0.18576766...
    SqueezingSpec spec{-4.3, 4.3, 0.0};
    DensityMatrix rho = squeezed_vacuum(spec, FockDim{30});
    CHECK(check_state(rho).ok());
    CHECK(rho.discarded_tail < 1e-10);
    // Pure squeezed vacuum with phase 0 squeezes the theta = pi/2 quadrature
    // (c_2 coefficient is negative real -> <a^2> < 0).
    double vmin = 1e9, vmax = -1e9;
    for (int i = 0; i < 360; ++i) {
        double v = quadrature_variance(rho, std::numbers::pi * i / 360);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    CHECK(vmin == doctest::Approx(0.5 * std::pow(10, -0.43)).epsilon(1e-6));
    CHECK(vmax == doctest::Approx(0.5 * std::pow(10, 0.43)).epsilon(1e-6));
    // Minimum-uncertainty: product of extremal variances = 1/4
    CHECK(vmin * vmax == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("squeezed vacuum spec validation") {
    CHECK_THROWS(squeezed_vacuum(SqueezingSpec{+1.0, 1.0, 0.0}, kDim));
    // Asymmetric squeezing needs the thermal flag
    CHECK_THROWS(squeezed_vacuum(SqueezingSpec{-3.0, 4.0, 0.0}, kDim));
    CHECK_NOTHROW(squeezed_vacuum(SqueezingSpec{-3.0, 4.0, 0.0, true}, kDim));
}

TEST_CASE("fock qubit coherences") {
    DensityMatrix rho = fock_qubit(1.0, 1.0, FockDim{6});
    CHECK(rho.rho(0, 0).real() == doctest::Approx(0.5));
    CHECK(rho.rho(1, 1).real() == doctest::Approx(0.5));
    CHECK(rho.rho(0, 1).real() == doctest::Approx(0.5));
    CHECK(check_state(rho).ok());
}

TEST_CASE("fock state quadrature variance") {
    // Var(x) for |n> is n + 1/2, phase independent
    for (int n : {0, 1, 3}) {
        DensityMatrix rho = fock_state(n, kDim);
        CHECK(quadrature_variance(rho, 0.3) ==
              doctest::Approx(n + 0.5).epsilon(1e-12));
    }
}

TEST_CASE("mean variance identity") {
    DensityMatrix rho = squeezed_vacuum(SqueezingSpec{-2.0, 2.0, 0.4}, kDim);
    double avg = 0;
    const int n = 400;
    for (int i = 0; i < n; ++i)
        avg += quadrature_variance(rho, std::numbers::pi * i / n) / n;
    CHECK(mean_variance(rho) == doctest::Approx(avg).epsilon(1e-10));
}

TEST_CASE("state fidelity") {
    DensityMatrix a = coherent_state(CoherentAmplitude{0.8}, kDim);
    DensityMatrix b = coherent_state(CoherentAmplitude{Complex(0.0, 0.8)}, kDim);
    CHECK(state_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-10));
    // |<alpha|beta>|^2 = exp(-|alpha - beta|^2)
    double expected = std::exp(-std::norm(Complex(0.8, -0.8)));
    CHECK(state_fidelity(a, b) == doctest::Approx(expected).epsilon(1e-6));
    DensityMatrix mixed = maximally_mixed(kDim);
    CHECK(state_fidelity(mixed, mixed) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hermite functions are orthonormal") {
    const int n_grid = 2001;
    const double L = 9.0;
    std::vector<double> xs(n_grid);
    for (int i = 0; i < n_grid; ++i) xs[i] = -L + 2 * L * i / (n_grid - 1.0);
    RealMatrix psi = hermite_psi(FockDim{10}, xs);
    double dx = 2 * L / (n_grid - 1.0);
    for (int m = 0; m < 11; ++m)
        for (int n = m; n < 11; ++n) {
            double s = 0;
            for (int i = 0; i < n_grid; ++i) s += psi(m, i) * psi(n, i) * dx;
            CHECK(s == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-6));
        }
}

TEST_CASE("wigner function of basic states") {
    // Vacuum: W(0,0) = 1/pi
    DensityMatrix vac = fock_state(0, FockDim{6});
    WignerGridSpec spec{-4, 4, -4, 4, 81, 81};
    WignerGrid grid = wigner(vac, spec);
    CHECK(grid.values(40, 40) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));
    CHECK(grid.values.maxCoeff() ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));

    // Single photon: W(0,0) = -1/pi (negativity at the origin)
    WignerGrid g1 = wigner(fock_state(1, FockDim{6}), spec);
    CHECK(g1.values(40, 40) ==
          doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-10));

    // Coherent state: displaced Gaussian, peak 1/pi at (sqrt(2) Re a, sqrt(2) Im a)
    DensityMatrix coh = coherent_state(CoherentAmplitude{1.0}, kDim);
    WignerGrid g2 = wigner(coh, WignerGridSpec{-4, 4, -4, 4, 161, 161});
    int imax = 0, jmax = 0;
    g2.values.maxCoeff(&imax, &jmax);
    CHECK(g2.x_axis[imax] == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
    CHECK(std::abs(g2.p_axis[jmax]) < 0.05);
    CHECK(g2.values(imax, jmax) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("wigner normalization") {
    DensityMatrix rho = squeezed_vacuum(SqueezingSpec{-3.0, 3.0, 0.9}, kDim);
    WignerGridSpec spec{-8, 8, -8, 8, 201, 201};
    WignerGrid grid = wigner(rho, spec);
    double dx = 16.0 / 200, dp = 16.0 / 200;
    CHECK(grid.values.sum() * dx * dp == doctest::Approx(1.0).epsilon(1e-4));
}
