#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace posers {

/// Derives an independent sub-seed for stream `stream` of master seed `seed`.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);

/// Thin wrapper over mt19937_64 with the draws the simulators need.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

    /// Uniform real in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Fills `out` with uniform A/C/G/T, two random bits per letter.
    void fill_letters(std::span<char> out);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace posers
