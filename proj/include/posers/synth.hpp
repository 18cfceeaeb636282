#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "posers/core.hpp"
#include "posers/kernels.hpp"
#include "posers/region_block.hpp"

namespace posers::synth {

/// Substitution-only error model; a substituted base is drawn uniformly
/// among the three other letters.
struct ErrorModel {
    double substitution_rate = 0.0;
};

struct SynthConfig {
    std::uint64_t total_reads = 0;
    std::optional<std::vector<double>> ratios;  // overrides design.ratios
    ErrorModel errors;
    bool include_flanks = true;
    std::uint64_t seed = 0;
};

/// Largest-remainder apportionment of `total` over positive weights.
std::vector<std::uint64_t> apportion(std::uint64_t total, std::span<const double> weights);

/// Applies substitutions in place.
void apply_errors(RegionBlock& regions, const ErrorModel& errors, std::uint64_t seed);

/// Single-position library for rule `rule_index`: a uniform allowed letter at
/// the rule's position and uniform letters elsewhere.
RegionBlock synth_spol_regions(const Design& design, std::size_t rule_index, std::uint64_t count,
                               std::uint64_t seed, const ErrorModel& errors = {});
std::vector<SequenceRecord> synth_spol(const Design& design, std::size_t rule_index,
                                       std::uint64_t count, std::uint64_t seed,
                                       const ErrorModel& errors = {});

/// Weighted mixture of every SPOL, shuffled. SPOLs are generated from
/// per-rule sub-seeds, so the output does not depend on `exec`.
RegionBlock synth_cpol_regions(const Design& design, const SynthConfig& config,
                               kernels::Exec exec = kernels::Exec::parallel);
std::vector<SequenceRecord> synth_cpol(const Design& design, const SynthConfig& config);

/// I.i.d. uniform regions (the negative control).
RegionBlock synth_random_regions(std::size_t length, std::uint64_t count, std::uint64_t seed,
                                 kernels::Exec exec = kernels::Exec::parallel);
std::vector<SequenceRecord> synth_random(std::size_t length, std::uint64_t count,
                                         std::uint64_t seed);

/// Amplified copy: picks `source_reads` distinct source records, then
/// resamples them uniformly with replacement up to `total` records.
RegionBlock forge_pcr_regions(const RegionBlock& source, std::uint64_t source_reads,
                              std::uint64_t total, std::uint64_t seed);
std::vector<SequenceRecord> forge_pcr(std::span<const SequenceRecord> source,
                                      std::uint64_t source_reads, std::uint64_t total,
                                      std::uint64_t seed);

/// A CPOL built from a forger's predicted rules. An empty prediction yields a
/// fully random library.
RegionBlock forge_from_design_regions(const Design& predicted, std::uint64_t count,
                                      std::uint64_t seed, const ErrorModel& errors = {},
                                      kernels::Exec exec = kernels::Exec::parallel);
std::vector<SequenceRecord> forge_from_design(const Design& predicted, std::uint64_t count,
                                              std::uint64_t seed, const ErrorModel& errors = {});

/// Records named "<prefix>_<n>" (n from 1), sequences = regions.
std::vector<SequenceRecord> to_records(const RegionBlock& regions, std::string_view prefix);

}  // namespace posers::synth
