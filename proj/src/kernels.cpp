#include "posers/kernels.hpp"

namespace posers::kernels {

CompiledRules CompiledRules::from(std::size_t length, std::span<const PositionRule> rules) {
    CompiledRules c;
    c.length = length;
    c.positions.reserve(rules.size());
    c.masks.reserve(rules.size());
    for (const auto& r : rules) {
        c.positions.push_back(static_cast<std::uint32_t>(r.position));
        c.masks.push_back(static_cast<std::uint8_t>(r.allowed.mask()));
    }
    return c;
}

CompiledRules CompiledRules::from(const Design& design) { return from(design.length, design.rules); }

void SvCounts::merge(const SvCounts& other) {
    for (std::size_t r = 0; r < exclusive.size(); ++r) {
        exclusive[r] += other.exclusive[r];
        for (int x = 0; x < 4; ++x) letters[r][x] += other.letters[r][x];
    }
}

void LetterCounts::merge(const LetterCounts& o) {
    for (std::size_t p = 0; p < counts.size(); ++p) {
        for (int x = 0; x < 4; ++x) counts[p][x] += o.counts[p][x];
        other[p] += o.other[p];
    }
    reads += o.reads;
}

namespace {

void tally_exclusive(const CompiledRules& rules, std::string_view region, SvCounts& out) {
    const long r = rules.exclusive_rule(region);
    if (r < 0) return;
    ++out.exclusive[r];
    const int x = letter_index(region[rules.positions[r]]);
    if (x >= 0) ++out.letters[r][x];
}

void tally_letters(std::string_view region, LetterCounts& out) {
    for (std::size_t p = 0; p < region.size(); ++p) {
        const int x = letter_index(region[p]);
        if (x >= 0)
            ++out.counts[p][x];
        else
            ++out.other[p];
    }
    ++out.reads;
}

}  // namespace

namespace serial {

std::uint64_t count_non_authentic(const CompiledRules& rules, const RegionBlock& regions) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) n += rules.non_authentic(regions[i]);
    return n;
}

SvCounts sv_counts(const CompiledRules& rules, const RegionBlock& regions) {
    SvCounts out(rules.size());
    for (std::size_t i = 0; i < regions.size(); ++i) tally_exclusive(rules, regions[i], out);
    return out;
}

LetterCounts letter_counts(const RegionBlock& regions) {
    LetterCounts out(regions.length());
    for (std::size_t i = 0; i < regions.size(); ++i) tally_letters(regions[i], out);
    return out;
}

}  // namespace serial

namespace parallel {

std::uint64_t count_non_authentic(const CompiledRules& rules, const RegionBlock& regions) {
    const auto n = static_cast<std::int64_t>(regions.size());
    std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) total += rules.non_authentic(regions[static_cast<std::size_t>(i)]);
    return total;
}

SvCounts sv_counts(const CompiledRules& rules, const RegionBlock& regions) {
    const auto n = static_cast<std::int64_t>(regions.size());
    SvCounts out(rules.size());
#pragma omp parallel
    {
        SvCounts local(rules.size());
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) tally_exclusive(rules, regions[static_cast<std::size_t>(i)], local);
#pragma omp critical
        out.merge(local);
    }
    return out;
}

LetterCounts letter_counts(const RegionBlock& regions) {
    const auto n = static_cast<std::int64_t>(regions.size());
    LetterCounts out(regions.length());
#pragma omp parallel
    {
        LetterCounts local(regions.length());
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) tally_letters(regions[static_cast<std::size_t>(i)], local);
#pragma omp critical
        out.merge(local);
    }
    return out;
}

}  // namespace parallel

std::uint64_t count_non_authentic(const CompiledRules& rules, const RegionBlock& regions, Exec exec) {
    return exec == Exec::serial ? serial::count_non_authentic(rules, regions)
                                : parallel::count_non_authentic(rules, regions);
}

SvCounts sv_counts(const CompiledRules& rules, const RegionBlock& regions, Exec exec) {
    return exec == Exec::serial ? serial::sv_counts(rules, regions) : parallel::sv_counts(rules, regions);
}

LetterCounts letter_counts(const RegionBlock& regions, Exec exec) {
    return exec == Exec::serial ? serial::letter_counts(regions) : parallel::letter_counts(regions);
}

}  // namespace posers::kernels
