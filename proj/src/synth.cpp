#include "posers/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "posers/error.hpp"
#include "posers/rng.hpp"

namespace posers::synth {

using kernels::Exec;

std::vector<std::uint64_t> apportion(std::uint64_t total, std::span<const double> weights) {
    if (weights.empty()) throw ValidationError("apportion needs at least one weight");
    long double sum = 0.0L;
    for (double w : weights) {
        if (!(w > 0.0)) throw ValidationError("ratios must be positive");
        sum += w;
    }
    std::vector<std::uint64_t> out(weights.size());
    std::vector<std::pair<long double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const long double quota = static_cast<long double>(total) * weights[i] / sum;
        out[i] = static_cast<std::uint64_t>(std::floor(quota));
        assigned += out[i];
        remainders.emplace_back(quota - std::floor(quota), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[remainders[i % remainders.size()].second];
    return out;
}

namespace {

void check_rule_index(const Design& design, std::size_t rule_index) {
    if (rule_index >= design.rules.size())
        throw ValidationError("rule index " + std::to_string(rule_index) + " out of range (" +
                              std::to_string(design.rules.size()) + " rules)");
}

// Writes `count` SPOL regions for one rule into block[offset, offset+count).
void fill_spol(RegionBlock& block, std::size_t offset, std::uint64_t count, const PositionRule& rule,
               std::uint64_t seed) {
    Rng rng(seed);
    const std::string allowed = rule.allowed.letters();
    for (std::uint64_t i = 0; i < count; ++i) {
        auto region = block.mutable_region(offset + i);
        rng.fill_letters(region);
        region[rule.position] = allowed[rng.below(allowed.size())];
    }
}

void apply_errors_slice(RegionBlock& block, std::size_t offset, std::uint64_t count, const ErrorModel& errors,
                        std::uint64_t seed) {
    if (errors.substitution_rate == 0.0) return;
    Rng rng(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
        for (char& c : block.mutable_region(offset + i)) {
            if (rng.uniform() >= errors.substitution_rate) continue;
            const int x = letter_index(c);
            c = kLetters[x < 0 ? rng.below(4) : (x + 1 + rng.below(3)) % 4];
        }
    }
}

std::vector<double> effective_ratios(const Design& design, const std::optional<std::vector<double>>& override) {
    const auto& src = override ? override : design.ratios;
    if (!src) return std::vector<double>(design.rules.size(), 1.0);
    if (src->size() != design.rules.size())
        throw ValidationError("ratios has " + std::to_string(src->size()) + " entries for " +
                              std::to_string(design.rules.size()) + " rules");
    return *src;
}

RegionBlock gather(const RegionBlock& src, const std::vector<std::size_t>& order, Exec exec) {
    RegionBlock out(src.length());
    out.resize(order.size());
    const auto n = static_cast<std::int64_t>(order.size());
    const std::size_t len = src.length();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto from = src[order[static_cast<std::size_t>(i)]];
        std::copy_n(from.data(), len, out.mutable_region(static_cast<std::size_t>(i)).data());
    }
    return out;
}

}  // namespace

void apply_errors(RegionBlock& regions, const ErrorModel& errors, std::uint64_t seed) {
    if (!(errors.substitution_rate >= 0.0 && errors.substitution_rate < 1.0))
        throw ValidationError("substitution rate must lie in [0,1)");
    apply_errors_slice(regions, 0, regions.size(), errors, seed);
}

RegionBlock synth_spol_regions(const Design& design, std::size_t rule_index, std::uint64_t count,
                               std::uint64_t seed, const ErrorModel& errors) {
    check_rule_index(design, rule_index);
    if (!(errors.substitution_rate >= 0.0 && errors.substitution_rate < 1.0))
        throw ValidationError("substitution rate must lie in [0,1)");
    RegionBlock block(design.length);
    block.resize(count);
    fill_spol(block, 0, count, design.rules[rule_index], seed);
    apply_errors_slice(block, 0, count, errors, mix_seed(seed, "err"));
    return block;
}

std::vector<SequenceRecord> synth_spol(const Design& design, std::size_t rule_index, std::uint64_t count,
                                       std::uint64_t seed, const ErrorModel& errors) {
    return to_records(synth_spol_regions(design, rule_index, count, seed, errors),
                      "spol" + std::to_string(rule_index + 1));
}

RegionBlock synth_cpol_regions(const Design& design, const SynthConfig& config, Exec exec) {
    require_valid(design);
    if (design.rules.empty()) throw ValidationError("a CPOL needs at least one rule");
    if (!(config.errors.substitution_rate >= 0.0 && config.errors.substitution_rate < 1.0))
        throw ValidationError("substitution rate must lie in [0,1)");
    const auto weights = effective_ratios(design, config.ratios);
    const auto counts = apportion(config.total_reads, weights);

    std::vector<std::size_t> offsets(counts.size() + 1, 0);
    for (std::size_t j = 0; j < counts.size(); ++j) offsets[j + 1] = offsets[j] + counts[j];

    RegionBlock mixed(design.length);
    mixed.resize(config.total_reads);
    const auto rules = static_cast<std::int64_t>(design.rules.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::int64_t j = 0; j < rules; ++j) {
        const auto r = static_cast<std::size_t>(j);
        const auto spol_seed = mix_seed(config.seed, r);
        fill_spol(mixed, offsets[r], counts[r], design.rules[r], spol_seed);
        apply_errors_slice(mixed, offsets[r], counts[r], config.errors, mix_seed(spol_seed, "err"));
    }

    std::vector<std::size_t> order(config.total_reads);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffle_engine(mix_seed(config.seed, "mix"));
    std::shuffle(order.begin(), order.end(), shuffle_engine);
    return gather(mixed, order, exec);
}

std::vector<SequenceRecord> synth_cpol(const Design& design, const SynthConfig& config) {
    return to_records(synth_cpol_regions(design, config), "cpol");
}

RegionBlock synth_random_regions(std::size_t length, std::uint64_t count, std::uint64_t seed, Exec exec) {
    if (length == 0) throw ValidationError("L must be >= 1");
    constexpr std::uint64_t kChunk = 1u << 16;
    RegionBlock block(length);
    block.resize(count);
    const auto chunks = static_cast<std::int64_t>((count + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::int64_t c = 0; c < chunks; ++c) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(count, begin + kChunk);
        for (std::uint64_t i = begin; i < end; ++i) rng.fill_letters(block.mutable_region(i));
    }
    return block;
}

std::vector<SequenceRecord> synth_random(std::size_t length, std::uint64_t count, std::uint64_t seed) {
    return to_records(synth_random_regions(length, count, seed), "random");
}

RegionBlock forge_pcr_regions(const RegionBlock& source, std::uint64_t source_reads, std::uint64_t total,
                              std::uint64_t seed) {
    if (source_reads > source.size())
        throw ValidationError("forger pool of " + std::to_string(source_reads) + " reads exceeds the " +
                              std::to_string(source.size()) + " available");
    if (total < source_reads) throw ValidationError("total must be at least the number of source reads");
    std::mt19937_64 engine(mix_seed(seed, "pcr"));

    std::vector<std::size_t> all(source.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> pool;
    pool.reserve(source_reads);
    std::sample(all.begin(), all.end(), std::back_inserter(pool), source_reads, engine);

    // Every accessible molecule once, plus uniform amplification draws.
    std::vector<std::size_t> order = pool;
    order.reserve(total);
    if (!pool.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        while (order.size() < total) order.push_back(pool[pick(engine)]);
    }
    std::shuffle(order.begin(), order.end(), engine);
    return gather(source, order, Exec::serial);
}

std::vector<SequenceRecord> forge_pcr(std::span<const SequenceRecord> source, std::uint64_t source_reads,
                                      std::uint64_t total, std::uint64_t seed) {
    if (source_reads > source.size())
        throw ValidationError("forger pool of " + std::to_string(source_reads) + " reads exceeds the " +
                              std::to_string(source.size()) + " available");
    if (source.empty()) return {};
    // Records may carry flanks, so work on whole sequences of equal length.
    const std::size_t len = source.front().seq.size();
    RegionBlock block(len);
    block.reserve(source.size());
    for (const auto& r : source) block.push_back(r.seq);
    return to_records(forge_pcr_regions(block, source_reads, total, seed), "pcr");
}

RegionBlock forge_from_design_regions(const Design& predicted, std::uint64_t count, std::uint64_t seed,
                                      const ErrorModel& errors, Exec exec) {
    if (predicted.rules.empty()) {
        auto block = synth_random_regions(predicted.length, count, seed, exec);
        apply_errors(block, errors, mix_seed(seed, "err"));
        return block;
    }
    SynthConfig config;
    config.total_reads = count;
    config.errors = errors;
    config.seed = seed;
    return synth_cpol_regions(predicted, config, exec);
}

std::vector<SequenceRecord> forge_from_design(const Design& predicted, std::uint64_t count, std::uint64_t seed,
                                              const ErrorModel& errors) {
    return to_records(forge_from_design_regions(predicted, count, seed, errors), "forged");
}

std::vector<SequenceRecord> to_records(const RegionBlock& regions, std::string_view prefix) {
    std::vector<SequenceRecord> out;
    out.reserve(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i)
        out.push_back({std::string(prefix) + "_" + std::to_string(i + 1), std::string(regions[i]), std::nullopt});
    return out;
}

}  // namespace posers::synth
