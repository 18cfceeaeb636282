#include "posers/report.hpp"

#include <cstdio>

namespace posers::report {

std::string_view to_string(auth::ScVerdict v) {
    switch (v) {
        case auth::ScVerdict::pass: return "pass";
        case auth::ScVerdict::fail: return "fail";
        case auth::ScVerdict::insufficient_sample: return "insufficient_sample";
    }
    return "?";
}

std::string_view to_string(auth::SvStatus s) {
    switch (s) {
        case auth::SvStatus::pass: return "pass";
        case auth::SvStatus::fail: return "fail";
        case auth::SvStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view to_string(auth::Verdict v) {
    switch (v) {
        case auth::Verdict::authentic: return "authentic";
        case auth::Verdict::forged: return "forged";
        case auth::Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view to_string(attack::PositionCall c) {
    switch (c) {
        case attack::PositionCall::correct: return "correct";
        case attack::PositionCall::fnp: return "FNP";
        case attack::PositionCall::fpn: return "FPN";
        case attack::PositionCall::fhp: return "FHP";
    }
    return "?";
}

namespace {

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5g", v);
    return buf;
}

std::string code_or_dash(const std::optional<AllowedSet>& s) {
    return s ? std::string(1, iupac_code_of(*s)) : std::string("-");
}

std::string letters_of_mask(unsigned mask) {
    std::string out;
    for (int x = 0; x < 4; ++x)
        if (mask & (1u << x)) out.push_back(kLetters[x]);
    return out.empty() ? "-" : out;
}

}  // namespace

void render_stats(std::ostream& out, const DesignParams& params, const math::DesignStats& s, Format format) {
    if (format == Format::kv) {
        out << "L=" << params.length << "\nk1=" << params.k1 << "\nk2=" << params.k2 << "\nk3=" << params.k3
            << "\nepsilon=" << sci(params.epsilon) << "\np=" << sci(s.p) << "\nn=" << s.n
            << "\nn_adjusted=" << s.n_adjusted << "\ncapacity=" << s.capacity << "\nmax_sequences=" << sci(s.max_sequences)
            << "\nforbidden_tuples=" << s.forbidden_tuples << '\n';
        return;
    }
    out << "design: L=" << params.length << " K1=" << params.k1 << " K2=" << params.k2 << " K3=" << params.k3
        << " epsilon=" << sci(params.epsilon) << '\n'
        << "  missing rate p            " << sci(s.p) << '\n'
        << "  required sample size n    " << s.n << '\n'
        << "  adjusted sample size      " << s.n_adjusted << '\n'
        << "  product capacity P        " << s.capacity << '\n'
        << "  max producible sequences  " << sci(s.max_sequences) << '\n'
        << "  forbidden tuples          " << s.forbidden_tuples << '\n';
}

void render_rules(std::ostream& out, const Design& design, Format format) {
    for (const auto& r : design.rules) {
        if (format == Format::kv)
            out << "rule." << r.position + 1 << '=' << iupac_code_of(r.allowed) << '\n';
        else
            out << "  position " << r.position + 1 << ": " << iupac_code_of(r.allowed) << " (" << r.allowed.letters()
                << ")\n";
    }
}

void render_filter(std::ostream& out, const ingest::FilterReport& f, Format format) {
    if (format == Format::kv) {
        out << "filter.total=" << f.total() << "\nfilter.kept=" << f.kept
            << "\nfilter.rejected_wrong_length=" << f.rejected_wrong_length
            << "\nfilter.rejected_flank_mismatch=" << f.rejected_flank_mismatch
            << "\nfilter.rejected_ambiguous_base=" << f.rejected_ambiguous_base << '\n';
        return;
    }
    out << "filter: " << f.total() << " reads, " << f.kept << " kept, " << f.rejected_wrong_length
        << " wrong length, " << f.rejected_flank_mismatch << " flank mismatch, " << f.rejected_ambiguous_base
        << " ambiguous\n";
}

void render_duplication(std::ostream& out, const ingest::DuplicationProfile& d, Format format) {
    const auto total = d.total_reads();
    if (format == Format::kv) {
        out << "duplication.reads=" << total << "\nduplication.unique=" << d.unique_count << '\n';
        for (const auto& [rank, n] : d.histogram) out << "duplication.rank." << rank << '=' << n << '\n';
        return;
    }
    out << "duplication: " << total << " reads, " << d.unique_count << " unique\n";
    for (const auto& [rank, n] : d.histogram) {
        char pct[32];
        std::snprintf(pct, sizeof pct, "%.2f%%", total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0);
        out << "  occurrence " << rank << ": " << n << " (" << pct << ")\n";
    }
}

void render_auth(std::ostream& out, const auth::AuthReport& r, Format format) {
    render_filter(out, r.filter, format);
    render_duplication(out, r.duplication, format);
    if (format == Format::kv) {
        out << "sc.examined=" << r.sc.examined << "\nsc.non_authentic=" << r.sc.non_authentic
            << "\nsc.rate=" << sci(r.sc.empirical_rate) << "\nsc.required_n=" << r.sc.required_n
            << "\nsc.tolerance=" << sci(r.sc.tolerance) << "\nsc.verdict=" << to_string(r.sc.verdict)
            << "\nsv.min_evidence=" << r.sv.min_evidence << "\nsv.overall=" << to_string(r.sv.overall) << '\n';
        for (const auto& p : r.sv.positions) {
            const auto key = "sv.pos." + std::to_string(p.position + 1);
            out << key << ".allowed=" << iupac_code_of(p.allowed) << '\n'
                << key << ".exclusive=" << p.exclusive_reads << '\n'
                << key << ".observed=" << letters_of_mask(p.observed_mask) << '\n'
                << key << ".status=" << to_string(p.status) << '\n';
        }
        out << "cross_run.count=" << r.cross_run.size() << '\n';
        for (std::size_t i = 0; i < r.cross_run.size(); ++i)
            out << "cross_run." << i + 1 << ".product=" << r.cross_run[i].other_product << '\n'
                << "cross_run." << i + 1 << ".run=" << r.cross_run[i].other_run << '\n'
                << "cross_run." << i + 1 << ".shared=" << r.cross_run[i].shared << '\n';
        out << "verdict=" << to_string(r.verdict) << '\n';
        return;
    }
    out << "SC test: " << r.sc.non_authentic << " non-authentic among " << r.sc.examined << " unique regions (rate "
        << sci(r.sc.empirical_rate) << ", required " << r.sc.required_n << ") -> " << to_string(r.sc.verdict) << '\n';
    out << "SV test: " << to_string(r.sv.overall) << " (evidence " << r.sv.min_evidence << " per letter)\n";
    for (const auto& p : r.sv.positions)
        out << "  position " << p.position + 1 << " [" << iupac_code_of(p.allowed) << "] exclusive=" << p.exclusive_reads
            << " observed=" << letters_of_mask(p.observed_mask) << " -> " << to_string(p.status) << '\n';
    if (!r.cross_run.empty()) {
        out << "cross-run duplicates:\n";
        for (const auto& f : r.cross_run)
            out << "  " << f.shared << " sequences shared with " << f.other_product << " (run " << f.other_run << ")\n";
    }
    out << "verdict: " << to_string(r.verdict) << '\n';
}

void render_prediction(std::ostream& out, const attack::PredictedDesign& p, Format format) {
    if (format == Format::kv) {
        out << "predicted.L=" << p.length << "\npredicted.K=" << p.rules.size() << '\n';
        for (const auto& r : p.rules) out << "predicted.rule." << r.position + 1 << '=' << iupac_code_of(r.allowed) << '\n';
        return;
    }
    out << "predicted design: " << p.rules.size() << " restricted positions\n";
    for (const auto& r : p.rules)
        out << "  position " << r.position + 1 << ": " << iupac_code_of(r.allowed) << " (" << r.allowed.letters() << ")\n";
}

void render_assessment(std::ostream& out, const attack::PredictionAssessment& a, Format format) {
    if (format == Format::kv) {
        out << "assessment.correct=" << a.correct.size() << "\nassessment.fnp=" << a.fnp.size()
            << "\nassessment.fpn=" << a.fpn.size() << "\nassessment.fhp=" << a.fhp.size()
            << "\nassessment.identified=" << a.positions_identified() << '\n';
        for (const auto& l : a.lines)
            out << "assessment.pos." << l.position + 1 << '=' << to_string(l.call) << '\n';
        return;
    }
    out << "assessment: " << a.correct.size() << " correct, " << a.fnp.size() << " FNP, " << a.fpn.size() << " FPN, "
        << a.fhp.size() << " FHP\n";
    for (const auto& l : a.lines)
        out << "  position " << l.position + 1 << ": truth " << code_or_dash(l.truth) << " predicted "
            << code_or_dash(l.predicted) << " -> " << to_string(l.call) << '\n';
}

void render_enumeration(std::ostream& out, const std::vector<attack::RestrictionCandidate>& candidates, Format format) {
    if (format == Format::kv) out << "candidates=" << candidates.size() << '\n';
    else out << candidates.size() << " position sets with unobserved combinations\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::string positions;
        for (auto p : candidates[i].positions) positions += (positions.empty() ? "" : ",") + std::to_string(p + 1);
        std::string tuples;
        for (const auto& t : candidates[i].forbidden) tuples += (tuples.empty() ? "" : ",") + t;
        if (format == Format::kv)
            out << "candidate." << i + 1 << ".positions=" << positions << '\n'
                << "candidate." << i + 1 << ".forbidden=" << tuples << '\n';
        else
            out << "  {" << positions << "}: " << candidates[i].forbidden.size() << " missing [" << tuples << "]\n";
    }
}

void render_registry(std::ostream& out, const std::vector<registry::RegistryEntry>& entries, Format format) {
    if (format == Format::kv) out << "batches=" << entries.size() << '\n';
    for (const auto& e : entries) {
        std::string products, flagged;
        for (const auto& p : e.products) products += (products.empty() ? "" : ",") + p;
        for (const auto& p : e.flagged) flagged += (flagged.empty() ? "" : ",") + p;
        if (format == Format::kv) {
            const auto key = "batch." + e.batch_id;
            out << key << ".design=" << e.design_ref << '\n' << key << ".products=" << products << '\n'
                << key << ".runs=" << e.runs.size() << '\n' << key << ".flagged=" << flagged << '\n';
        } else {
            out << "batch " << e.batch_id << " (design " << e.design_ref << "): " << e.products.size()
                << " products, " << e.runs.size() << " runs\n";
            for (const auto& r : e.runs)
                out << "  run " << r.run_id << " product " << r.product_id << " at " << r.timestamp << '\n';
            if (!e.flagged.empty()) out << "  flagged as counterfeit: " << flagged << '\n';
        }
    }
}

}  // namespace posers::report
