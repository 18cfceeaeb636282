#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posers/core.hpp"
#include "posers/kernels.hpp"
#include "posers/region_block.hpp"

namespace posers::attack {

struct FrequencyMatrix {
    std::size_t length = 0;
    std::vector<std::array<double, 4>> freq;  // row = position, column = A/C/G/T
    std::array<double, 4> average{};          // column means of freq
    std::uint64_t reads = 0;
};

FrequencyMatrix frequency_matrix(const RegionBlock& regions,
                                 kernels::Exec exec = kernels::Exec::parallel);
FrequencyMatrix frequency_matrix_from_counts(const kernels::LetterCounts& counts);

/// Infinite-sample letter shares of a design's CPOL (honours design.ratios).
FrequencyMatrix analytic_frequency_matrix(const Design& design);

/// Per-letter reweighting that maps a uniform row onto `composition`; models a
/// vendor-specific base-composition skew.
FrequencyMatrix apply_composition_bias(const FrequencyMatrix& fm,
                                       const std::array<double, 4>& composition);

/// Global base composition reported for the sequenced CPOL (A, C, G, T).
inline constexpr std::array<double, 4> kObservedVendorComposition{0.2068, 0.1883, 0.3093, 0.2957};

struct PredictedDesign {
    std::size_t length = 0;
    std::vector<PositionRule> rules;  // sorted by position
};

enum class Baseline {
    global_average,  // per-letter mean over all positions
    uniform,         // 1/4
};

/// (4-i)/(4 i K).
double prediction_threshold(std::size_t assumed_k, int assumed_i);

/// Flags a letter at a position when its share reaches baseline + threshold.
/// At most three letters per position (largest excess first) and at most
/// assumed_k positions (largest maximal excess first, ties to the lower index).
PredictedDesign predict_design(const FrequencyMatrix& fm, std::size_t assumed_k, int assumed_i,
                               Baseline baseline = Baseline::global_average);

enum class PositionCall { correct, fnp, fpn, fhp };

struct PositionAssessment {
    std::size_t position = 0;
    PositionCall call = PositionCall::correct;
    std::optional<AllowedSet> truth;
    std::optional<AllowedSet> predicted;
};

struct PredictionAssessment {
    std::vector<std::size_t> correct;
    std::vector<std::size_t> fnp;
    std::vector<std::size_t> fpn;
    std::vector<std::size_t> fhp;
    std::vector<PositionAssessment> lines;  // sorted by position

    /// True positions found at all (exactly or with an incomplete set).
    std::size_t positions_identified() const { return correct.size() + fhp.size(); }
};

/// correct: same set; fhp: strict subset of the true set; fpn: true position
/// missing or predicted with a disallowed letter; fnp: unrestricted position
/// predicted as restricted. Throws ValidationError on a length mismatch.
PredictionAssessment assess_prediction(const Design& truth, const PredictedDesign& predicted);

/// Wraps a prediction into a design using `like`'s flanks (for forge_from_design).
Design to_design(const PredictedDesign& predicted, const Design& like);
PredictedDesign from_design(const Design& design);

struct RestrictionCandidate {
    std::vector<std::size_t> positions;
    std::vector<std::string> forbidden;  // tuples never observed, sorted

    friend bool operator==(const RestrictionCandidate&, const RestrictionCandidate&) = default;
};

struct EnumerateOptions {
    bool minimal_only = false;  // drop supersets of already reported position sets
    double work_limit = 1e9;
};

/// sum_k C(L, k) (N + 4^k) for k = 1..max_k, in tuple checks.
double enumeration_cost(std::size_t length, std::size_t max_k, std::size_t regions);

/// For every position subset of size 1..max_k, the letter tuples absent from
/// the input. Throws GuardError when enumeration_cost exceeds the limit.
std::vector<RestrictionCandidate> enumerate_restrictions(const RegionBlock& unique_regions,
                                                         std::size_t max_k,
                                                         const EnumerateOptions& options = {});

}  // namespace posers::attack
