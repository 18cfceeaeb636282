#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posers {

enum class Nucleotide : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::array<char, 4> kLetters{'A', 'C', 'G', 'T'};

constexpr char to_char(Nucleotide n) { return kLetters[static_cast<std::size_t>(n)]; }

/// Index 0..3 for A/C/G/T, -1 for anything else (including lowercase and N).
constexpr int letter_index(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return -1;
    }
}

std::optional<Nucleotide> nucleotide_of(char c);

bool is_acgt(std::string_view s);

/// Nonempty subset of {A,C,G,T}, stored as a 4-bit mask (bit i = kLetters[i]).
class AllowedSet {
public:
    static AllowedSet from_mask(unsigned mask);
    static AllowedSet of(std::initializer_list<Nucleotide> members);
    /// Parses plain letters such as "CT"; throws on anything outside ACGT.
    static AllowedSet from_letters(std::string_view letters);

    unsigned mask() const { return mask_; }
    int size() const;
    bool contains(Nucleotide n) const { return (mask_ >> static_cast<unsigned>(n)) & 1u; }
    bool contains_index(int i) const { return i >= 0 && ((mask_ >> i) & 1u); }
    std::string letters() const;

    friend bool operator==(AllowedSet, AllowedSet) = default;

private:
    explicit AllowedSet(std::uint8_t mask) : mask_(mask) {}
    std::uint8_t mask_;
};

/// Standard single-letter degenerate (IUPAC) code for the set.
char iupac_code_of(AllowedSet allowed);

/// Inverse of iupac_code_of. Throws InvalidCodeError for any other character.
AllowedSet allowed_set_of(char code);

struct PositionRule {
    std::size_t position = 0;  // 0-based index into the design region
    AllowedSet allowed = AllowedSet::from_mask(0xF);

    friend bool operator==(const PositionRule&, const PositionRule&) = default;
};

/// The secret: region length, restricted positions, and the constant flanks.
struct Design {
    std::string id;
    std::size_t length = 0;
    std::vector<PositionRule> rules;
    std::string flank5;
    std::string flank3;
    std::optional<std::vector<double>> ratios;
    std::uint64_t seed = 0;

    std::size_t count_with_cardinality(int cardinality) const;

    friend bool operator==(const Design&, const Design&) = default;
};

struct DesignParams {
    std::size_t length = 0;
    std::size_t k1 = 0;
    std::size_t k2 = 0;
    std::size_t k3 = 0;
    double epsilon = 1e-6;

    std::size_t k() const { return k1 + k2 + k3; }
};

struct SequenceRecord {
    std::string id;
    std::string seq;
    std::optional<std::string> quality;

    friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

/// 80-nt constitutive sequences used by default on either side of the region.
extern const std::string_view kDefaultFlank5;
extern const std::string_view kDefaultFlank3;

/// Throws ValidationError if the parameters are inconsistent.
void validate_params(const DesignParams& params);

/// Draws the restricted positions in stages (one-letter rules first, then
/// two-letter rules from the remaining positions, then three-letter rules)
/// and a uniformly random allowed set for each. Rules are returned sorted by
/// position; the result is a pure function of the arguments.
Design generate_design(const DesignParams& params, std::uint64_t seed,
                       std::string_view flank5 = kDefaultFlank5,
                       std::string_view flank3 = kDefaultFlank3);

/// Every violated Design invariant, as human-readable messages. Empty = ok.
std::vector<std::string> validate_design(const Design& design);

/// Throws ValidationError listing every violation.
void require_valid(const Design& design);

}  // namespace posers
