// Serial vs OpenMP timings for the per-read kernels.
//
//   bench_kernels [reads] [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "posers/core.hpp"
#include "posers/kernels.hpp"
#include "posers/synth.hpp"

using namespace posers;
using Clock = std::chrono::steady_clock;

namespace {

double best_ms(int repeats, const std::function<void()>& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool same) {
    std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t reads = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2'000'000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

    const auto design = generate_design({40, 10, 10, 0, 1e-6}, 7);
    synth::SynthConfig config;
    config.total_reads = reads;
    config.include_flanks = false;
    config.seed = 99;
    const auto regions = synth::synth_cpol_regions(design, config);
    const auto rules = kernels::CompiledRules::from(design);

    std::printf("reads=%llu L=%zu K=%zu threads=%d repeats=%d\n", static_cast<unsigned long long>(reads),
                design.length, design.rules.size(), omp_get_max_threads(), repeats);
    std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    bool all_same = true;
    {
        std::uint64_t a = 0, b = 0;
        const double s = best_ms(repeats, [&] { a = kernels::serial::count_non_authentic(rules, regions); });
        const double p = best_ms(repeats, [&] { b = kernels::parallel::count_non_authentic(rules, regions); });
        row("count_non_authentic", s, p, a == b);
        all_same &= a == b;
    }
    {
        kernels::SvCounts a, b;
        const double s = best_ms(repeats, [&] { a = kernels::serial::sv_counts(rules, regions); });
        const double p = best_ms(repeats, [&] { b = kernels::parallel::sv_counts(rules, regions); });
        row("sv_counts", s, p, a == b);
        all_same &= a == b;
    }
    {
        kernels::LetterCounts a, b;
        const double s = best_ms(repeats, [&] { a = kernels::serial::letter_counts(regions); });
        const double p = best_ms(repeats, [&] { b = kernels::parallel::letter_counts(regions); });
        row("letter_counts", s, p, a == b);
        all_same &= a == b;
    }
    {
        RegionBlock a(design.length), b(design.length);
        const double s = best_ms(repeats, [&] { a = synth::synth_cpol_regions(design, config, kernels::Exec::serial); });
        const double p = best_ms(repeats, [&] { b = synth::synth_cpol_regions(design, config, kernels::Exec::parallel); });
        const bool same = a.to_strings() == b.to_strings();
        row("synth_cpol", s, p, same);
        all_same &= same;
    }
    return all_same ? 0 : 1;
}
