#include "posers/core.hpp"

#include <algorithm>
#include <cstdio>
#include <bit>
#include <numeric>
#include <set>

#include "posers/error.hpp"
#include "posers/rng.hpp"

namespace posers {

const std::string_view kDefaultFlank5 =
    "ATTGACCAACACTACTAACTTACATTTAACGTCATGCAATCTTCGAGAAGCAATGACAACGATGCCTTTGGTTATTTGAT";
const std::string_view kDefaultFlank3 =
    "ACTGAGATAGCAATATGATAAAGATGTTATTGAACGAGTGGAATGCATAGAGACAGGAATCGTCCTTGTACTGCGTCTAA";

namespace {

// Indexed by mask (bit 0 = A, 1 = C, 2 = G, 3 = T).
constexpr std::array<char, 16> kIupacByMask{
    '\0', 'A', 'C', 'M', 'G', 'R', 'S', 'V', 'T', 'W', 'Y', 'H', 'K', 'D', 'B', 'N'};

}  // namespace

std::optional<Nucleotide> nucleotide_of(char c) {
    const int i = letter_index(c);
    if (i < 0) return std::nullopt;
    return static_cast<Nucleotide>(i);
}

bool is_acgt(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return letter_index(c) >= 0; });
}

AllowedSet AllowedSet::from_mask(unsigned mask) {
    if (mask == 0 || mask > 0xF) throw ValidationError("allowed set mask out of range: " + std::to_string(mask));
    return AllowedSet(static_cast<std::uint8_t>(mask));
}

AllowedSet AllowedSet::of(std::initializer_list<Nucleotide> members) {
    unsigned mask = 0;
    for (auto n : members) mask |= 1u << static_cast<unsigned>(n);
    return from_mask(mask);
}

AllowedSet AllowedSet::from_letters(std::string_view letters) {
    unsigned mask = 0;
    for (char c : letters) {
        const int i = letter_index(c);
        if (i < 0) throw ValidationError(std::string("not a nucleotide: '") + c + "'");
        mask |= 1u << i;
    }
    return from_mask(mask);
}

int AllowedSet::size() const { return std::popcount(static_cast<unsigned>(mask_)); }

std::string AllowedSet::letters() const {
    std::string out;
    for (int i = 0; i < 4; ++i)
        if (contains_index(i)) out.push_back(kLetters[i]);
    return out;
}

char iupac_code_of(AllowedSet allowed) { return kIupacByMask[allowed.mask()]; }

AllowedSet allowed_set_of(char code) {
    for (unsigned mask = 1; mask < 16; ++mask)
        if (kIupacByMask[mask] == code) return AllowedSet::from_mask(mask);
    throw InvalidCodeError(std::string("invalid degenerate code '") + code + "'");
}

std::size_t Design::count_with_cardinality(int cardinality) const {
    return static_cast<std::size_t>(std::count_if(rules.begin(), rules.end(), [&](const PositionRule& r) {
        return r.allowed.size() == cardinality;
    }));
}

void validate_params(const DesignParams& params) {
    if (params.length == 0) throw ValidationError("L must be positive");
    if (params.k() > params.length)
        throw ValidationError("k1+k2+k3 = " + std::to_string(params.k()) + " exceeds L = " +
                              std::to_string(params.length));
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0))
        throw ValidationError("epsilon must lie in (0,1)");
}

Design generate_design(const DesignParams& params, std::uint64_t seed, std::string_view flank5,
                       std::string_view flank3) {
    validate_params(params);
    if (!is_acgt(flank5) || !is_acgt(flank3)) throw ValidationError("flanks must contain only A/C/G/T");

    Rng rng(mix_seed(seed, "design"));
    std::vector<std::size_t> remaining(params.length);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});

    Design design;
    design.length = params.length;
    design.flank5 = std::string(flank5);
    design.flank3 = std::string(flank3);
    design.seed = seed;

    // Staged draws without replacement: K1 positions, then K2 from what is
    // left, then K3.
    const std::array<std::pair<std::size_t, int>, 3> stages{
        {{params.k1, 1}, {params.k2, 2}, {params.k3, 3}}};
    for (const auto& [count, cardinality] : stages) {
        std::vector<unsigned> masks;
        for (unsigned m = 1; m < 16; ++m)
            if (std::popcount(m) == cardinality) masks.push_back(m);
        for (std::size_t c = 0; c < count; ++c) {
            const auto pick = rng.below(remaining.size());
            const std::size_t position = remaining[pick];
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
            const unsigned mask = masks[rng.below(masks.size())];
            design.rules.push_back({position, AllowedSet::from_mask(mask)});
        }
    }
    std::sort(design.rules.begin(), design.rules.end(),
              [](const PositionRule& a, const PositionRule& b) { return a.position < b.position; });

    char buf[64];
    std::snprintf(buf, sizeof buf, "L%zu-K%zu.%zu.%zu-%016llx", params.length, params.k1, params.k2,
                  params.k3, static_cast<unsigned long long>(seed));
    design.id = buf;
    return design;
}

std::vector<std::string> validate_design(const Design& design) {
    std::vector<std::string> violations;
    if (design.length == 0) violations.push_back("L must be positive");
    if (design.rules.size() > design.length)
        violations.push_back("more rules (" + std::to_string(design.rules.size()) + ") than positions (" +
                             std::to_string(design.length) + ")");
    std::set<std::size_t> seen;
    for (const auto& rule : design.rules) {
        if (rule.position >= design.length)
            violations.push_back("position " + std::to_string(rule.position) + " out of range");
        if (!seen.insert(rule.position).second)
            violations.push_back("duplicate position " + std::to_string(rule.position));
        if (rule.allowed.size() == 4)
            violations.push_back("rule at position " + std::to_string(rule.position) + " is not a restriction");
    }
    if (!is_acgt(design.flank5)) violations.push_back("flank5 contains a non-ACGT character");
    if (!is_acgt(design.flank3)) violations.push_back("flank3 contains a non-ACGT character");
    if (design.ratios) {
        if (design.ratios->size() != design.rules.size())
            violations.push_back("ratios has " + std::to_string(design.ratios->size()) + " entries for " +
                                 std::to_string(design.rules.size()) + " rules");
        for (double w : *design.ratios)
            if (!(w > 0.0)) {
                violations.push_back("ratios must be positive");
                break;
            }
    }
    return violations;
}

void require_valid(const Design& design) {
    const auto violations = validate_design(design);
    if (violations.empty()) return;
    std::string msg = "invalid design:";
    for (const auto& v : violations) msg += " " + v + ";";
    throw ValidationError(msg);
}

}  // namespace posers
