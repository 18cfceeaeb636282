#pragma once

#include <cstddef>
#include <cstdint>

namespace posers::math {

/// Probability that a uniformly random region carries a disallowed letter at
/// every restricted position: (3/4)^k1 (1/2)^k2 (1/4)^k3. Switches to
/// log-space once k1+k2+k3 exceeds 64.
double missing_rate(std::size_t k1, std::size_t k2, std::size_t k3);

/// Number of all-disallowed K-tuples, 3^k1 * 2^k2. Throws OverflowError
/// beyond 64 bits.
std::uint64_t forbidden_tuple_count(std::size_t k1, std::size_t k2, std::size_t k3);

/// Smallest n with (1-p)^n <= epsilon, i.e. ceil(ln(epsilon) / ln(1-p)).
std::uint64_t required_sample_size(double p, double epsilon);

/// ceil(n * 3K / 2): sample size that still detects a single falsely
/// predicted SPOL, whose non-authentic rate is at least 2p/(3K).
std::uint64_t adjusted_sample_size(std::uint64_t n, std::size_t k);

struct Proportions {
    double allowed;     // expected share of each allowed letter
    double disallowed;  // expected share of each disallowed letter
    double deviation;   // allowed - 1/4 = (4-i)/(4iK)
};

/// Expected letter shares at a restricted position with i allowed letters in
/// an equal-ratio mixture of K single-position libraries.
Proportions expected_proportions(int i, std::size_t k);

/// floor((1-p) 4^K / n): products one design can tag with n reads each.
std::uint64_t product_capacity(double p, std::size_t k, std::uint64_t n);

/// Harmonic number by direct (compensated) summation.
long double harmonic_exact(std::uint64_t x);
/// ln x + gamma + 1/(2x) - 1/(12x^2).
long double harmonic_asymptotic(long double x);
inline constexpr std::uint64_t kHarmonicCrossover = 10'000'000;
/// harmonic_exact up to the crossover, harmonic_asymptotic above it.
long double harmonic(std::uint64_t x);

/// Expected number of uniform draws from 4^K coupons until all but
/// round(p 4^K) have been seen: 4^K (harm(4^K) - harm(round(p 4^K))).
/// Throws DomainError if round(p 4^K) < 1.
double max_total_sequences(double p, std::size_t k);

struct DesignStats {
    double p = 0;
    std::uint64_t n = 0;
    std::uint64_t n_adjusted = 0;
    std::uint64_t capacity = 0;       // P
    double max_sequences = 0;         // U
    std::uint64_t forbidden_tuples = 0;
};

DesignStats design_stats(std::size_t k1, std::size_t k2, std::size_t k3, double epsilon);

}  // namespace posers::math
