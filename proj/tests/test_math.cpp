#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "posers/error.hpp"
#include "posers/math.hpp"
#include "posers/rng.hpp"

using namespace posers;
using namespace posers::math;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool same_sig_digits(double value, double expected, int digits) {
    char a[64], b[64];
    std::snprintf(a, sizeof a, "%.*e", digits - 1, value);
    std::snprintf(b, sizeof b, "%.*e", digits - 1, expected);
    return std::string(a) == b;
}

}  // namespace

TEST_CASE("missing_rate examples") {
    CHECK(same_sig_digits(missing_rate(10, 10, 0), 5.4994e-5, 5));
    CHECK(missing_rate(0, 0, 1) == 0.25);
    CHECK(missing_rate(1, 1, 1) == 0.09375);
    CHECK(missing_rate(0, 0, 0) == 1.0);
}

TEST_CASE("missing_rate matches the rational oracle, including log-space") {
    for (unsigned k1 : {0u, 1u, 7u, 30u, 80u})
        for (unsigned k2 : {0u, 3u, 40u})
            for (unsigned k3 : {0u, 2u, 25u}) {
                const double want = oracle::to_float(oracle::missing_rate(k1, k2, k3)).convert_to<double>();
                CHECK(rel(missing_rate(k1, k2, k3), want) < 1e-12);
            }
}

TEST_CASE("missing_rate is non-increasing in each argument") {
    for (std::size_t a = 0; a < 12; ++a)
        for (std::size_t b = 0; b < 12; ++b)
            for (std::size_t c = 0; c < 12; ++c) {
                const double p = missing_rate(a, b, c);
                CHECK(missing_rate(a + 1, b, c) <= p);
                CHECK(missing_rate(a, b + 1, c) <= p);
                CHECK(missing_rate(a, b, c + 1) <= p);
            }
}

TEST_CASE("forbidden_tuple_count") {
    CHECK(forbidden_tuple_count(10, 10, 0) == 60466176u);
    CHECK(forbidden_tuple_count(0, 0, 5) == 1u);
    CHECK(forbidden_tuple_count(1, 1, 0) == 6u);
    CHECK(forbidden_tuple_count(40, 0, 0) == 12157665459056928801ull);
    CHECK_THROWS_AS(forbidden_tuple_count(41, 0, 0), OverflowError);
    CHECK_THROWS_AS(forbidden_tuple_count(0, 64, 0), OverflowError);
    // Counting consistency with the probability.
    for (std::size_t k1 = 0; k1 < 10; ++k1)
        for (std::size_t k2 = 0; k2 < 10; ++k2)
            for (std::size_t k3 = 0; k3 < 6; ++k3) {
                const double ratio =
                    static_cast<double>(forbidden_tuple_count(k1, k2, k3)) / std::pow(4.0, double(k1 + k2 + k3));
                CHECK(rel(ratio, missing_rate(k1, k2, k3)) < 1e-12);
            }
}

TEST_CASE("required_sample_size examples") {
    CHECK(required_sample_size(0.5, 0.25) == 2u);
    CHECK(required_sample_size(0.09375, 0.01) == 47u);
    const auto n = required_sample_size(missing_rate(10, 10, 0), 1e-6);
    CHECK(n == oracle::required_sample_size(oracle::missing_rate(10, 10, 0), oracle::Float("1e-6")));
    CHECK(same_sig_digits(double(n), 2.5121e5, 5));
    CHECK_THROWS_AS(required_sample_size(0.0, 1e-6), DomainError);
    CHECK_THROWS_AS(required_sample_size(1.0, 1e-6), DomainError);
    CHECK_THROWS_AS(required_sample_size(0.5, 0.0), DomainError);
}

TEST_CASE("required_sample_size is the exact ceiling boundary") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        const unsigned k1 = rng.below(12), k2 = rng.below(12), k3 = rng.below(4);
        if (k1 + k2 + k3 == 0) continue;
        const auto pr = oracle::missing_rate(k1, k2, k3);
        const double p = oracle::to_float(pr).convert_to<double>();
        const double eps = std::pow(10.0, -1.0 - double(rng.below(8)));
        const auto n = required_sample_size(p, eps);
        CHECK(n == oracle::required_sample_size(pr, oracle::Float(eps)));
        // (1-p)^n <= eps < (1-p)^(n-1)
        const oracle::Float q = 1 - oracle::to_float(pr);
        CHECK(pow(q, oracle::Float(n)) <= oracle::Float(eps));
        if (n > 1) CHECK(pow(q, oracle::Float(n - 1)) > oracle::Float(eps));
    }
}

TEST_CASE("required_sample_size 47 detects with probability >= 99%") {
    // Monte-Carlo: libraries of 47 uniform reads against a (1,1,1) design.
    Rng rng(5);
    const int trials = 200000;
    int silent = 0;
    for (int t = 0; t < trials; ++t) {
        bool any = false;
        for (int r = 0; r < 47 && !any; ++r) any = rng.below(64) < 6;
        silent += !any;
    }
    const double f = double(silent) / trials;
    CHECK(f <= 0.01 + 3 * std::sqrt(0.01 * 0.99 / trials));
}

TEST_CASE("adjusted_sample_size") {
    CHECK(adjusted_sample_size(251210, 20) == 7536300u);
    CHECK(adjusted_sample_size(100, 2) == 300u);
    CHECK(adjusted_sample_size(47, 3) == 212u);
    CHECK(adjusted_sample_size(1, 1) == 2u);
    CHECK_THROWS_AS(adjusted_sample_size(0, 3), DomainError);
    CHECK_THROWS_AS(adjusted_sample_size(3, 0), DomainError);
    CHECK_THROWS_AS(adjusted_sample_size(UINT64_MAX / 2, 3), OverflowError);
    Rng rng(4);
    for (int t = 0; t < 1000; ++t) {
        const std::uint64_t n = 1 + rng.below(1'000'000'000);
        const std::size_t k = 1 + rng.below(100);
        const oracle::cpp_int num = oracle::cpp_int(n) * 3 * k;
        CHECK(oracle::cpp_int(adjusted_sample_size(n, k)) == (num + 1) / 2);
    }
}

TEST_CASE("expected_proportions") {
    auto p2 = expected_proportions(2, 20);
    CHECK(p2.allowed == doctest::Approx(0.2625).epsilon(1e-15));
    CHECK(p2.disallowed == doctest::Approx(0.2375).epsilon(1e-15));
    auto p1 = expected_proportions(1, 20);
    CHECK(p1.allowed == doctest::Approx(0.2875).epsilon(1e-15));
    CHECK(p1.deviation == doctest::Approx(0.0375).epsilon(1e-15));
    auto single = expected_proportions(1, 1);
    CHECK(single.allowed == 1.0);
    CHECK(single.disallowed == 0.0);
    for (int i = 1; i <= 3; ++i)
        for (std::size_t k = 1; k < 200; ++k) {
            const auto e = expected_proportions(i, k);
            CHECK(std::abs(i * e.allowed + (4 - i) * e.disallowed - 1.0) <= 4e-16);
            CHECK(e.deviation == doctest::Approx(double(4 - i) / (4.0 * i * k)));
        }
    CHECK_THROWS_AS(expected_proportions(0, 20), DomainError);
    CHECK_THROWS_AS(expected_proportions(4, 20), DomainError);
    CHECK_THROWS_AS(expected_proportions(2, 0), DomainError);
}

TEST_CASE("product_capacity") {
    const double p = missing_rate(10, 10, 0);
    const auto n = required_sample_size(p, 1e-6);
    CHECK(same_sig_digits(double(product_capacity(p, 20, n)), 4.3766e6, 5));
    CHECK(product_capacity(0.0, 1, 4) == 1u);
    CHECK(product_capacity(0.09375, 3, 47) == 1u);
    // P n <= (1-p) 4^K < (P+1) n
    const oracle::cpp_int total = (oracle::cpp_int(1) << 40) * oracle::cpp_int(1'000'000 - 55) / 1'000'000;
    const auto cap = product_capacity(p, 20, n);
    CHECK(oracle::cpp_int(cap) * n <= (oracle::cpp_int(1) << 40));
    CHECK(oracle::cpp_int(cap + 1) * n > total);
}

TEST_CASE("harmonic numbers") {
    for (std::uint64_t x : {1u, 2u, 4u, 16u, 100u, 4096u, 65536u}) {
        const double want = oracle::to_float(oracle::harmonic(x)).convert_to<double>();
        CHECK(rel(double(harmonic_exact(x)), want) < 1e-15);
    }
    CHECK(harmonic_exact(0) == 0);
    // Crossover agreement.
    const long double e = harmonic_exact(kHarmonicCrossover);
    const long double a = harmonic_asymptotic(static_cast<long double>(kHarmonicCrossover));
    CHECK(std::abs(double((e - a) / e)) < 1e-12);
    CHECK(harmonic(kHarmonicCrossover) == e);
}

TEST_CASE("max_total_sequences") {
    const double want =
        16 * oracle::to_float(oracle::harmonic(16) - oracle::harmonic(4)).convert_to<double>();
    CHECK(max_total_sequences(0.25, 2) == doctest::Approx(want).epsilon(1e-14));
    CHECK(max_total_sequences(0.25, 2) == doctest::Approx(20.76).epsilon(1e-3));
    CHECK(max_total_sequences(1.0, 3) == 0.0);
    // Exact path against the rational oracle for every 4^K <= 4^8.
    for (std::size_t k = 1; k <= 8; ++k) {
        const std::uint64_t q = std::uint64_t{1} << (2 * k);
        for (double p : {0.5, 0.25, 0.1, 1.0 / double(q)}) {
            const auto m = static_cast<std::uint64_t>(std::llround(p * double(q)));
            if (m < 1) continue;
            const double exact =
                double(q) * oracle::to_float(oracle::harmonic(q) - oracle::harmonic(m)).convert_to<double>();
            CHECK(rel(max_total_sequences(p, k), exact) < 1e-12);
        }
    }
    const double u = max_total_sequences(missing_rate(10, 10, 0), 20);
    CHECK(rel(u, 1.0784e13) < 1e-3);
    CHECK(rel(u / std::pow(4.0, 20), 9.8083) < 1e-4);
    CHECK_THROWS_AS(max_total_sequences(1e-9, 4), DomainError);
}

TEST_CASE("design_stats ties the quantities together") {
    const auto s = design_stats(10, 10, 0, 1e-6);
    CHECK(s.p == missing_rate(10, 10, 0));
    CHECK(s.n == required_sample_size(s.p, 1e-6));
    CHECK(s.n_adjusted == adjusted_sample_size(s.n, 20));
    CHECK(s.capacity == product_capacity(s.p, 20, s.n));
    CHECK(s.forbidden_tuples == 60466176u);
    CHECK(double(s.capacity) * double(s.n) <= (1 - s.p) * std::pow(4.0, 20));
}
