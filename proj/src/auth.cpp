#include "posers/auth.hpp"

#include <cmath>

#include "posers/error.hpp"
#include "posers/math.hpp"

namespace posers::auth {

ReadVerdict classify_read(const Design& design, std::string_view region) {
    if (region.size() != design.length)
        throw ValidationError("region length " + std::to_string(region.size()) + " != L = " +
                              std::to_string(design.length));
    if (!is_acgt(region)) throw ValidationError("region contains a non-ACGT character");
    for (const auto& rule : design.rules)
        if (rule.allowed.contains_index(letter_index(region[rule.position]))) return ReadVerdict::authentic;
    return ReadVerdict::non_authentic;
}

ScReport sc_report(std::uint64_t examined, std::uint64_t non_authentic, std::uint64_t required_n, double tolerance) {
    ScReport r;
    r.examined = examined;
    r.non_authentic = non_authentic;
    r.required_n = required_n;
    r.tolerance = tolerance;
    r.empirical_rate = examined > 0 ? static_cast<double>(non_authentic) / static_cast<double>(examined) : 0.0;
    if (examined > 0 && r.empirical_rate > tolerance)
        r.verdict = ScVerdict::fail;
    else if (examined == 0 || examined < required_n)
        r.verdict = ScVerdict::insufficient_sample;
    else
        r.verdict = ScVerdict::pass;
    return r;
}

ScReport sc_test(const Design& design, const RegionBlock& regions, std::uint64_t required_n, double tolerance,
                 kernels::Exec exec) {
    if (!regions.empty() && regions.length() != design.length)
        throw ValidationError("region length does not match the design");
    const auto rules = kernels::CompiledRules::from(design);
    return sc_report(regions.size(), kernels::count_non_authentic(rules, regions, exec), required_n, tolerance);
}

std::uint64_t sv_evidence_for_false_alarm(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    for (std::uint64_t m = 1;; ++m) {
        bool ok = true;
        for (int i = 2; i <= 3; ++i) {
            const double bound = i * std::pow((i - 1.0) / i, static_cast<double>(m * i));
            if (bound > alpha) ok = false;
        }
        if (ok) return m;
    }
}

SvReport sv_report(const Design& design, const kernels::SvCounts& counts, std::uint64_t min_evidence) {
    SvReport report;
    report.min_evidence = min_evidence;
    bool any_fail = false, all_pass = !design.rules.empty();
    for (std::size_t j = 0; j < design.rules.size(); ++j) {
        SvPosition pos;
        pos.rule_index = j;
        pos.position = design.rules[j].position;
        pos.allowed = design.rules[j].allowed;
        pos.exclusive_reads = counts.exclusive[j];
        pos.letter_counts = counts.letters[j];
        for (int x = 0; x < 4; ++x)
            if (pos.letter_counts[x] > 0) pos.observed_mask |= 1u << x;
        const auto need = min_evidence * static_cast<std::uint64_t>(pos.allowed.size());
        if (pos.observed_mask == pos.allowed.mask())
            pos.status = SvStatus::pass;
        else if (pos.exclusive_reads > 0 && pos.exclusive_reads >= need)
            pos.status = SvStatus::fail;
        else
            pos.status = SvStatus::inconclusive;
        any_fail |= pos.status == SvStatus::fail;
        all_pass &= pos.status == SvStatus::pass;
        report.positions.push_back(pos);
    }
    report.overall = any_fail ? SvStatus::fail : all_pass ? SvStatus::pass : SvStatus::inconclusive;
    return report;
}

SvReport sv_test(const Design& design, const RegionBlock& regions, std::uint64_t min_evidence, kernels::Exec exec) {
    if (!regions.empty() && regions.length() != design.length)
        throw ValidationError("region length does not match the design");
    const auto rules = kernels::CompiledRules::from(design);
    return sv_report(design, kernels::sv_counts(rules, regions, exec), min_evidence);
}

Verdict combine_verdict(const ScReport& sc, const SvReport& sv, std::span<const CrossRunFinding> cross_run) {
    if (sc.verdict == ScVerdict::fail || sv.overall == SvStatus::fail || !cross_run.empty()) return Verdict::forged;
    if (sc.verdict == ScVerdict::insufficient_sample) return Verdict::inconclusive;
    return Verdict::authentic;
}

std::uint64_t default_required_n(const Design& design, double epsilon) {
    const auto p = math::missing_rate(design.count_with_cardinality(1), design.count_with_cardinality(2),
                                      design.count_with_cardinality(3));
    return math::adjusted_sample_size(math::required_sample_size(p, epsilon), design.rules.size());
}

AuthReport authenticate_regions(const Design& design, const RegionBlock& regions, const ingest::FilterReport& filter,
                                const AuthOptions& options) {
    require_valid(design);
    if (design.rules.empty()) throw ValidationError("cannot authenticate against a design without restricted positions");
    AuthReport report;
    report.filter = filter;
    auto deduped = ingest::dedup(regions);
    report.duplication = deduped.profile;
    const auto required = options.required_n ? *options.required_n : default_required_n(design, options.epsilon);
    report.sc = sc_test(design, deduped.unique, required, options.tolerance, options.exec);
    report.sv = sv_test(design, deduped.unique, options.min_evidence, options.exec);
    report.digest = ingest::make_run_digest(options.run_id, deduped.unique, regions.size());
    report.verdict = combine_verdict(report.sc, report.sv, report.cross_run);
    return report;
}

AuthReport authenticate(const Design& design, std::istream& reads, const AuthOptions& options) {
    require_valid(design);
    if (design.rules.empty()) throw ValidationError("cannot authenticate against a design without restricted positions");
    ingest::FilterReport filter;
    const auto regions = ingest::filter_stream(reads, design, options.filter, filter);
    return authenticate_regions(design, regions, filter, options);
}

void apply_cross_run(AuthReport& report, std::span<const CrossRunFinding> findings) {
    report.cross_run.insert(report.cross_run.end(), findings.begin(), findings.end());
    report.verdict = combine_verdict(report.sc, report.sv, report.cross_run);
}

}  // namespace posers::auth
