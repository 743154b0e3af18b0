#pragma once

#include <cstdint>

namespace csqpt {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, stream, counter), so sampling order and thread layout never
/// change the output.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    std::uint64_t bits(std::uint64_t counter) const;

    /// Uniform double in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on two counter slots.
    double normal(std::uint64_t counter) const;

    /// Poisson draw with the given mean (inversion for small means,
    /// PTRD-style rejection otherwise).
    std::uint64_t poisson(double mean, std::uint64_t counter) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Derives a child stream id from a parent id and a label, for named
/// sub-streams (per probe, per resample, ...).
std::uint64_t substream(std::uint64_t parent, std::uint64_t label);

}  // namespace csqpt
