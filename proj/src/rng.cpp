#include "csqpt/rng.hpp"

#include <cmath>
#include <numbers>

namespace csqpt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RandomStream::bits(std::uint64_t counter) const {
    // Three mixing rounds over (seed, stream, counter); stateless.
    std::uint64_t h = splitmix64(seed_);
    h = splitmix64(h ^ stream_);
    return splitmix64(h ^ counter);
}

double RandomStream::normal(std::uint64_t counter) const {
    // Box-Muller on two dedicated slots.
    double u1 = static_cast<double>(bits(2 * counter) >> 11) * 0x1.0p-53;
    double u2 = static_cast<double>(bits(2 * counter + 1) >> 11) * 0x1.0p-53;
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RandomStream::poisson(double mean, std::uint64_t counter) const {
    if (mean <= 0) return 0;
    // Each logical draw owns a window of 256 counter slots.
    const std::uint64_t base = counter * 256;
    if (mean < 30.0) {
        // Inversion by sequential search; one uniform.
        double u = uniform(base);
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 2000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    // Normal-rejection against the exact pmf (transformed rejection).
    const double s = std::sqrt(mean);
    const double logmean = std::log(mean);
    auto log_pmf = [&](double k) {
        return k * logmean - mean - std::lgamma(k + 1.0);
    };
    for (std::uint64_t attempt = 0; attempt < 85; ++attempt) {
        double z = std::sqrt(-2.0 * std::log(
                       std::max(uniform(base + 3 * attempt), 0x1.0p-53))) *
                   std::cos(2.0 * std::numbers::pi *
                            uniform(base + 3 * attempt + 1));
        double cand = std::floor(mean + s * z + 0.5);
        if (cand < 0) continue;
        // Envelope: normal density scaled by a safe constant.
        double log_env = -0.5 * z * z - std::log(s) + 0.6;
        double u = uniform(base + 3 * attempt + 2);
        if (std::log(std::max(u, 0x1.0p-53)) + log_env -
                0.5 * std::log(2.0 * std::numbers::pi) <=
            log_pmf(cand)) {
            return static_cast<std::uint64_t>(cand);
        }
    }
    // Window exhausted (vanishing probability): fall back to the mode.
    return static_cast<std::uint64_t>(std::floor(mean));
}

std::uint64_t substream(std::uint64_t parent, std::uint64_t label) {
    return splitmix64(splitmix64(parent ^ 0xa5a5a5a5a5a5a5a5ULL) ^ label);
}

}  // namespace csqpt
