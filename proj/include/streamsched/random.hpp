#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace streamsched {

// Mixes a base seed with a stream index so independent consumers (workflow
// generator, network sampler, GA runs) draw from decorrelated sequences.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Seeded mt19937_64 with the handful of draws the library needs.
class random_stream {
public:
    explicit random_stream(std::uint64_t seed) : engine_(seed) {}

    // Continuous uniform over [lo, hi].
    double uniform(double lo, double hi);

    // Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n);

    // Uniform integer in [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi);

    bool bernoulli(double p);

    std::mt19937_64 & engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace streamsched
