#include "posers/attack.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <numeric>

#include "posers/error.hpp"

namespace posers::attack {

namespace {

void fill_average(FrequencyMatrix& fm) {
    fm.average = {0, 0, 0, 0};
    if (fm.length == 0) return;
    for (const auto& row : fm.freq)
        for (int x = 0; x < 4; ++x) fm.average[x] += row[x];
    for (auto& a : fm.average) a /= static_cast<double>(fm.length);
}

}  // namespace

FrequencyMatrix frequency_matrix_from_counts(const kernels::LetterCounts& counts) {
    FrequencyMatrix fm;
    fm.length = counts.counts.size();
    fm.reads = counts.reads;
    fm.freq.resize(fm.length);
    for (std::size_t p = 0; p < fm.length; ++p) {
        const auto& c = counts.counts[p];
        const double total = static_cast<double>(c[0] + c[1] + c[2] + c[3]);
        for (int x = 0; x < 4; ++x) fm.freq[p][x] = total > 0 ? static_cast<double>(c[x]) / total : 0.25;
    }
    fill_average(fm);
    return fm;
}

FrequencyMatrix frequency_matrix(const RegionBlock& regions, kernels::Exec exec) {
    return frequency_matrix_from_counts(kernels::letter_counts(regions, exec));
}

FrequencyMatrix analytic_frequency_matrix(const Design& design) {
    require_valid(design);
    FrequencyMatrix fm;
    fm.length = design.length;
    fm.freq.assign(design.length, {0.25, 0.25, 0.25, 0.25});
    if (!design.rules.empty()) {
        std::vector<double> weights = design.ratios ? *design.ratios : std::vector<double>(design.rules.size(), 1.0);
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        for (std::size_t j = 0; j < design.rules.size(); ++j) {
            const double share = weights[j] / total;
            const auto& rule = design.rules[j];
            const double i = rule.allowed.size();
            for (int x = 0; x < 4; ++x)
                fm.freq[rule.position][x] = (1.0 - share) / 4.0 + (rule.allowed.contains_index(x) ? share / i : 0.0);
        }
    }
    fill_average(fm);
    return fm;
}

FrequencyMatrix apply_composition_bias(const FrequencyMatrix& fm, const std::array<double, 4>& composition) {
    FrequencyMatrix out = fm;
    for (auto& row : out.freq) {
        double sum = 0.0;
        for (int x = 0; x < 4; ++x) sum += row[x] * composition[x];
        for (int x = 0; x < 4; ++x) row[x] = row[x] * composition[x] / sum;
    }
    fill_average(out);
    return out;
}

double prediction_threshold(std::size_t assumed_k, int assumed_i) {
    if (assumed_k == 0) throw DomainError("assumed K must be >= 1");
    if (assumed_i < 1 || assumed_i > 3) throw DomainError("assumed i must be 1, 2 or 3");
    return (4.0 - assumed_i) / (4.0 * assumed_i * static_cast<double>(assumed_k));
}

PredictedDesign predict_design(const FrequencyMatrix& fm, std::size_t assumed_k, int assumed_i, Baseline baseline) {
    constexpr double kSlack = 1e-12;
    const double threshold = prediction_threshold(assumed_k, assumed_i);
    std::array<double, 4> base{0.25, 0.25, 0.25, 0.25};
    if (baseline == Baseline::global_average) base = fm.average;

    struct Candidate {
        std::size_t position;
        unsigned mask;
        double best_excess;
    };
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < fm.length; ++p) {
        std::vector<std::pair<double, int>> flagged;
        for (int x = 0; x < 4; ++x) {
            const double excess = fm.freq[p][x] - base[x];
            if (excess >= threshold - kSlack) flagged.emplace_back(excess, x);
        }
        if (flagged.empty()) continue;
        std::stable_sort(flagged.begin(), flagged.end(), [](auto a, auto b) { return a.first > b.first; });
        if (flagged.size() > 3) flagged.resize(3);
        unsigned mask = 0;
        for (auto [e, x] : flagged) mask |= 1u << x;
        candidates.push_back({p, mask, flagged.front().first});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.best_excess > b.best_excess; });
    if (candidates.size() > assumed_k) candidates.resize(assumed_k);

    PredictedDesign out;
    out.length = fm.length;
    for (const auto& c : candidates) out.rules.push_back({c.position, AllowedSet::from_mask(c.mask)});
    std::sort(out.rules.begin(), out.rules.end(),
              [](const PositionRule& a, const PositionRule& b) { return a.position < b.position; });
    return out;
}

PredictionAssessment assess_prediction(const Design& truth, const PredictedDesign& predicted) {
    if (truth.length != predicted.length)
        throw ValidationError("prediction length " + std::to_string(predicted.length) + " != design length " +
                              std::to_string(truth.length));
    std::map<std::size_t, AllowedSet> true_rules, predicted_rules;
    for (const auto& r : truth.rules) true_rules.emplace(r.position, r.allowed);
    for (const auto& r : predicted.rules) predicted_rules.emplace(r.position, r.allowed);

    PredictionAssessment out;
    std::map<std::size_t, PositionAssessment> lines;
    for (const auto& [pos, allowed] : true_rules) {
        PositionAssessment line{pos, PositionCall::correct, allowed, std::nullopt};
        auto it = predicted_rules.find(pos);
        if (it == predicted_rules.end()) {
            line.call = PositionCall::fpn;
        } else {
            line.predicted = it->second;
            const unsigned pred = it->second.mask(), real = allowed.mask();
            if (pred & ~real)
                line.call = PositionCall::fpn;
            else if (pred != real)
                line.call = PositionCall::fhp;
        }
        lines.emplace(pos, line);
    }
    for (const auto& [pos, allowed] : predicted_rules)
        if (!true_rules.contains(pos)) lines.emplace(pos, PositionAssessment{pos, PositionCall::fnp, std::nullopt, allowed});

    for (const auto& [pos, line] : lines) {
        switch (line.call) {
            case PositionCall::correct: out.correct.push_back(pos); break;
            case PositionCall::fnp: out.fnp.push_back(pos); break;
            case PositionCall::fpn: out.fpn.push_back(pos); break;
            case PositionCall::fhp: out.fhp.push_back(pos); break;
        }
        out.lines.push_back(line);
    }
    return out;
}

Design to_design(const PredictedDesign& predicted, const Design& like) {
    Design d;
    d.id = like.id + "-predicted";
    d.length = predicted.length;
    d.rules = predicted.rules;
    d.flank5 = like.flank5;
    d.flank3 = like.flank3;
    d.seed = like.seed;
    return d;
}

PredictedDesign from_design(const Design& design) { return {design.length, design.rules}; }

namespace {

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

bool is_superset_of_any(const std::vector<std::size_t>& subset, const std::vector<std::vector<std::size_t>>& found) {
    for (const auto& f : found)
        if (std::includes(subset.begin(), subset.end(), f.begin(), f.end())) return true;
    return false;
}

}  // namespace

double enumeration_cost(std::size_t length, std::size_t max_k, std::size_t regions) {
    double cost = 0.0;
    for (std::size_t k = 1; k <= max_k && k <= length; ++k)
        cost += binomial(length, k) * (static_cast<double>(regions) + std::pow(4.0, static_cast<double>(k)));
    return cost;
}

std::vector<RestrictionCandidate> enumerate_restrictions(const RegionBlock& unique_regions, std::size_t max_k,
                                                         const EnumerateOptions& options) {
    const std::size_t length = unique_regions.length();
    const double cost = enumeration_cost(length, max_k, unique_regions.size());
    if (cost > options.work_limit) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "enumeration refused: estimated %.3g tuple checks exceeds the limit of %.3g",
                      cost, options.work_limit);
        throw GuardError(buf);
    }
    for (std::size_t i = 0; i < unique_regions.size(); ++i)
        if (!is_acgt(unique_regions[i])) throw ValidationError("enumeration input must contain only A/C/G/T");

    std::vector<RestrictionCandidate> out;
    std::vector<std::vector<std::size_t>> found;
    for (std::size_t k = 1; k <= max_k && k <= length; ++k) {
        // Lexicographic k-subsets of [0, length).
        std::vector<std::size_t> subset(k);
        std::iota(subset.begin(), subset.end(), std::size_t{0});
        std::vector<char> seen(std::size_t{1} << (2 * k));
        while (true) {
            if (!(options.minimal_only && is_superset_of_any(subset, found))) {
                std::fill(seen.begin(), seen.end(), 0);
                for (std::size_t i = 0; i < unique_regions.size(); ++i) {
                    const auto region = unique_regions[i];
                    std::size_t index = 0;
                    for (auto p : subset) index = (index << 2) | static_cast<std::size_t>(letter_index(region[p]));
                    seen[index] = 1;
                }
                RestrictionCandidate candidate{subset, {}};
                for (std::size_t index = 0; index < seen.size(); ++index) {
                    if (seen[index]) continue;
                    std::string tuple(k, 'A');
                    for (std::size_t t = 0; t < k; ++t) tuple[k - 1 - t] = kLetters[(index >> (2 * t)) & 3u];
                    candidate.forbidden.push_back(std::move(tuple));
                }
                if (!candidate.forbidden.empty()) {
                    found.push_back(subset);
                    out.push_back(std::move(candidate));
                }
            }
            // Advance to the next subset.
            std::size_t i = k;
            while (i > 0 && subset[i - 1] == length - k + i - 1) --i;
            if (i == 0) break;
            ++subset[i - 1];
            for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace posers::attack
