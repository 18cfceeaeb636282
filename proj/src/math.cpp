#include "posers/math.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "posers/error.hpp"

namespace posers::math {

double missing_rate(std::size_t k1, std::size_t k2, std::size_t k3) {
    if (k1 + k2 + k3 <= 64)
        return std::pow(0.75, static_cast<double>(k1)) * std::pow(0.5, static_cast<double>(k2)) *
               std::pow(0.25, static_cast<double>(k3));
    const long double log_p = static_cast<long double>(k1) * std::log(0.75L) +
                              static_cast<long double>(k2) * std::log(0.5L) +
                              static_cast<long double>(k3) * std::log(0.25L);
    return static_cast<double>(std::exp(log_p));
}

std::uint64_t forbidden_tuple_count(std::size_t k1, std::size_t k2, std::size_t /*k3*/) {
    std::uint64_t count = 1;
    auto mul = [&](std::uint64_t factor, std::size_t times) {
        for (std::size_t i = 0; i < times; ++i) {
            if (count > std::numeric_limits<std::uint64_t>::max() / factor)
                throw OverflowError("3^k1 * 2^k2 exceeds 64 bits");
            count *= factor;
        }
    };
    mul(3, k1);
    mul(2, k2);
    return count;
}

std::uint64_t required_sample_size(double p, double epsilon) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("missing rate must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    const long double log_q = std::log1p(-static_cast<long double>(p));
    const long double log_eps = std::log(static_cast<long double>(epsilon));
    auto n = static_cast<std::uint64_t>(std::ceil(log_eps / log_q));
    if (n == 0) n = 1;
    // Snap to the exact boundary: (1-p)^n <= eps < (1-p)^(n-1).
    while (n > 1 && static_cast<long double>(n - 1) * log_q <= log_eps) --n;
    while (static_cast<long double>(n) * log_q > log_eps) ++n;
    return n;
}

std::uint64_t adjusted_sample_size(std::uint64_t n, std::size_t k) {
    if (n == 0 || k == 0) throw DomainError("adjusted sample size needs n >= 1 and K >= 1");
    // ceil(3nK/2) = m + ceil(m/2) with m = nK
    std::uint64_t m = 0, out = 0;
    if (__builtin_mul_overflow(n, static_cast<std::uint64_t>(k), &m) ||
        __builtin_add_overflow(m, m / 2 + (m & 1u), &out))
        throw OverflowError("adjusted sample size exceeds 64 bits");
    return out;
}

Proportions expected_proportions(int i, std::size_t k) {
    if (i < 1 || i > 3) throw DomainError("i must be 1, 2 or 3");
    if (k == 0) throw DomainError("K must be >= 1");
    const double kk = static_cast<double>(k);
    const double disallowed = (1.0 - 1.0 / kk) / 4.0;
    const double allowed = disallowed + 1.0 / (i * kk);
    return {allowed, disallowed, (4.0 - i) / (4.0 * i * kk)};
}

namespace {

long double pow4(std::size_t k) { return std::ldexp(1.0L, static_cast<int>(2 * k)); }

// sum_{i=lo+1}^{hi} 1/i, smallest terms first, compensated.
long double harmonic_range(std::uint64_t lo, std::uint64_t hi) {
    long double sum = 0.0L, comp = 0.0L;
    for (std::uint64_t i = hi; i > lo; --i) {
        const long double y = 1.0L / static_cast<long double>(i) - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

std::uint64_t product_capacity(double p, std::size_t k, std::uint64_t n) {
    if (n == 0) throw DomainError("n must be >= 1");
    if (k > 31) throw OverflowError("4^K too large for product capacity");
    const long double value = (1.0L - p) * pow4(k) / static_cast<long double>(n);
    return static_cast<std::uint64_t>(std::floor(value));
}

long double harmonic_exact(std::uint64_t x) { return harmonic_range(0, x); }

long double harmonic_asymptotic(long double x) {
    return std::log(x) + std::numbers::egamma_v<long double> + 1.0L / (2.0L * x) - 1.0L / (12.0L * x * x);
}

long double harmonic(std::uint64_t x) {
    return x <= kHarmonicCrossover ? harmonic_exact(x) : harmonic_asymptotic(static_cast<long double>(x));
}

double max_total_sequences(double p, std::size_t k) {
    if (k == 0) throw DomainError("K must be >= 1");
    if (k > 31) throw OverflowError("4^K too large");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("missing rate must lie in (0,1]");
    const auto total = static_cast<std::uint64_t>(pow4(k));
    const auto missing = static_cast<std::uint64_t>(std::llround(static_cast<long double>(p) * pow4(k)));
    if (missing < 1) throw DomainError("round(p * 4^K) < 1");
    if (missing >= total) return 0.0;

    long double diff;
    if (total <= kHarmonicCrossover) {
        diff = harmonic_range(missing, total);
    } else if (missing <= kHarmonicCrossover) {
        diff = harmonic_asymptotic(static_cast<long double>(total)) - harmonic_exact(missing);
    } else {
        // Both asymptotic: subtract term by term to keep the leading logs from cancelling.
        const long double t = static_cast<long double>(total), m = static_cast<long double>(missing);
        diff = std::log(t / m) + (1.0L / (2.0L * t) - 1.0L / (2.0L * m)) -
               (1.0L / (12.0L * t * t) - 1.0L / (12.0L * m * m));
    }
    return static_cast<double>(static_cast<long double>(total) * diff);
}

DesignStats design_stats(std::size_t k1, std::size_t k2, std::size_t k3, double epsilon) {
    DesignStats s;
    const std::size_t k = k1 + k2 + k3;
    if (k == 0) throw DomainError("a design needs at least one restricted position");
    s.p = missing_rate(k1, k2, k3);
    s.n = required_sample_size(s.p, epsilon);
    s.n_adjusted = adjusted_sample_size(s.n, k);
    s.capacity = product_capacity(s.p, k, s.n);
    s.max_sequences = max_total_sequences(s.p, k);
    s.forbidden_tuples = forbidden_tuple_count(k1, k2, k3);
    return s;
}

}  // namespace posers::math
