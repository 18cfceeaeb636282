#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posers/core.hpp"
#include "posers/ingest.hpp"
#include "posers/kernels.hpp"
#include "posers/region_block.hpp"

namespace posers::auth {

enum class ReadVerdict { authentic, non_authentic };

/// non_authentic iff the region carries a disallowed letter at every rule.
/// Throws ValidationError on a length or alphabet mismatch.
ReadVerdict classify_read(const Design& design, std::string_view region);

enum class ScVerdict { pass, fail, insufficient_sample };

struct ScReport {
    std::uint64_t examined = 0;
    std::uint64_t non_authentic = 0;
    double empirical_rate = 0.0;
    std::uint64_t required_n = 0;
    double tolerance = 0.0;
    ScVerdict verdict = ScVerdict::insufficient_sample;

    friend bool operator==(const ScReport&, const ScReport&) = default;
};

/// fail if non_authentic/examined > tolerance, else insufficient_sample if
/// examined < required_n, else pass.
ScReport sc_report(std::uint64_t examined, std::uint64_t non_authentic, std::uint64_t required_n,
                   double tolerance);

/// Sample combination test over (deduplicated) regions.
ScReport sc_test(const Design& design, const RegionBlock& regions, std::uint64_t required_n,
                 double tolerance = 0.0, kernels::Exec exec = kernels::Exec::parallel);

enum class SvStatus { pass, fail, inconclusive };

struct SvPosition {
    std::size_t rule_index = 0;
    std::size_t position = 0;
    AllowedSet allowed = AllowedSet::from_mask(0xF);
    std::uint64_t exclusive_reads = 0;
    unsigned observed_mask = 0;
    std::array<std::uint64_t, 4> letter_counts{};
    SvStatus status = SvStatus::inconclusive;

    friend bool operator==(const SvPosition&, const SvPosition&) = default;
};

struct SvReport {
    std::vector<SvPosition> positions;
    SvStatus overall = SvStatus::inconclusive;
    std::uint64_t min_evidence = 0;

    friend bool operator==(const SvReport&, const SvReport&) = default;
};

/// Smallest per-letter evidence m such that an authentic position with i = 2
/// or 3 allowed letters shows a missing letter among m*i exclusive reads
/// with probability at most alpha (union bound i((i-1)/i)^(m i)).
std::uint64_t sv_evidence_for_false_alarm(double alpha);

/// Default per-letter evidence: sv_evidence_for_false_alarm(1e-6) = 13.
inline constexpr std::uint64_t kDefaultSvEvidence = 13;

/// A position passes when every allowed letter shows up among its exclusive
/// reads, fails when at least min_evidence * |allowed| exclusive reads exist
/// and a letter is still missing, and is inconclusive otherwise.
SvReport sv_report(const Design& design, const kernels::SvCounts& counts,
                   std::uint64_t min_evidence);

SvReport sv_test(const Design& design, const RegionBlock& regions,
                 std::uint64_t min_evidence = kDefaultSvEvidence,
                 kernels::Exec exec = kernels::Exec::parallel);

enum class Verdict { authentic, forged, inconclusive };

struct CrossRunFinding {
    std::string other_run;
    std::string other_product;
    std::uint64_t shared = 0;
};

struct AuthOptions {
    /// Defaults to the adjusted sample size for `epsilon`.
    std::optional<std::uint64_t> required_n;
    double epsilon = 1e-6;
    double tolerance = 0.0;
    std::uint64_t min_evidence = kDefaultSvEvidence;
    ingest::FilterOptions filter;
    std::string run_id = "run";
    kernels::Exec exec = kernels::Exec::parallel;
};

struct AuthReport {
    ingest::FilterReport filter;
    ingest::DuplicationProfile duplication;
    ScReport sc;
    SvReport sv;
    std::vector<CrossRunFinding> cross_run;
    Verdict verdict = Verdict::inconclusive;
    ingest::RunDigest digest;
};

/// forged if SC fails, SV fails, or any cross-run finding exists;
/// inconclusive if SC lacks samples; authentic otherwise.
Verdict combine_verdict(const ScReport& sc, const SvReport& sv,
                        std::span<const CrossRunFinding> cross_run);

/// Default required sample size for a design: adjusted_sample_size(n(p, eps), K).
std::uint64_t default_required_n(const Design& design, double epsilon);

/// Full pipeline on already-filtered regions.
AuthReport authenticate_regions(const Design& design, const RegionBlock& regions,
                                const ingest::FilterReport& filter, const AuthOptions& options);

/// Filter -> dedup -> SC -> SV on a FASTQ/FASTA stream. Throws
/// ValidationError for designs without rules.
AuthReport authenticate(const Design& design, std::istream& reads, const AuthOptions& options);

/// Adds cross-run findings against other runs' digests and recomputes the verdict.
void apply_cross_run(AuthReport& report, std::span<const CrossRunFinding> findings);

}  // namespace posers::auth
