#pragma once

// Bulk per-read kernels. Each kernel has a serial reference implementation
// and an OpenMP implementation with identical results; tests compare the two
// and bench_kernels times them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "posers/core.hpp"
#include "posers/region_block.hpp"

namespace posers::kernels {

enum class Exec { serial, parallel };

/// Letter -> one-hot mask bit (A=1, C=2, G=4, T=8); 0 for anything else.
inline constexpr std::array<std::uint8_t, 256> kLetterBit = [] {
    std::array<std::uint8_t, 256> t{};
    t['A'] = 1;
    t['C'] = 2;
    t['G'] = 4;
    t['T'] = 8;
    return t;
}();

/// Design rules flattened into parallel arrays for the hot loops.
struct CompiledRules {
    std::size_t length = 0;
    std::vector<std::uint32_t> positions;
    std::vector<std::uint8_t> masks;

    static CompiledRules from(const Design& design);
    static CompiledRules from(std::size_t length, std::span<const PositionRule> rules);

    std::size_t size() const { return positions.size(); }

    /// True iff the region carries a disallowed letter at every rule.
    bool non_authentic(std::string_view region) const {
        for (std::size_t r = 0; r < positions.size(); ++r) {
            if (kLetterBit[static_cast<unsigned char>(region[positions[r]])] & masks[r]) return false;
        }
        return true;
    }

    /// Index of the only satisfied rule, or -1 if zero or several are satisfied.
    long exclusive_rule(std::string_view region) const {
        long hit = -1;
        for (std::size_t r = 0; r < positions.size(); ++r) {
            if (kLetterBit[static_cast<unsigned char>(region[positions[r]])] & masks[r]) {
                if (hit >= 0) return -1;
                hit = static_cast<long>(r);
            }
        }
        return hit;
    }
};

/// Per-rule tallies over SPOL-exclusive reads.
struct SvCounts {
    std::vector<std::uint64_t> exclusive;
    std::vector<std::array<std::uint64_t, 4>> letters;

    explicit SvCounts(std::size_t rules = 0) : exclusive(rules, 0), letters(rules, {0, 0, 0, 0}) {}
    void merge(const SvCounts& other);

    friend bool operator==(const SvCounts&, const SvCounts&) = default;
};

/// Per-position letter tallies; `other` counts non-ACGT characters.
struct LetterCounts {
    std::vector<std::array<std::uint64_t, 4>> counts;
    std::vector<std::uint64_t> other;
    std::uint64_t reads = 0;

    explicit LetterCounts(std::size_t length = 0) : counts(length, {0, 0, 0, 0}), other(length, 0) {}
    void merge(const LetterCounts& other_counts);

    friend bool operator==(const LetterCounts&, const LetterCounts&) = default;
};

namespace serial {
std::uint64_t count_non_authentic(const CompiledRules& rules, const RegionBlock& regions);
SvCounts sv_counts(const CompiledRules& rules, const RegionBlock& regions);
LetterCounts letter_counts(const RegionBlock& regions);
}  // namespace serial

namespace parallel {
std::uint64_t count_non_authentic(const CompiledRules& rules, const RegionBlock& regions);
SvCounts sv_counts(const CompiledRules& rules, const RegionBlock& regions);
LetterCounts letter_counts(const RegionBlock& regions);
}  // namespace parallel

std::uint64_t count_non_authentic(const CompiledRules& rules, const RegionBlock& regions, Exec exec);
SvCounts sv_counts(const CompiledRules& rules, const RegionBlock& regions, Exec exec);
LetterCounts letter_counts(const RegionBlock& regions, Exec exec);

}  // namespace posers::kernels
