#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "posers/core.hpp"
#include "posers/region_block.hpp"

namespace posers::ingest {

struct FilterReport {
    std::uint64_t kept = 0;
    std::uint64_t rejected_wrong_length = 0;
    std::uint64_t rejected_flank_mismatch = 0;
    std::uint64_t rejected_ambiguous_base = 0;

    std::uint64_t total() const {
        return kept + rejected_wrong_length + rejected_flank_mismatch + rejected_ambiguous_base;
    }
    friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

enum class Rejection { wrong_length, flank_mismatch, ambiguous_base };

struct FilterOptions {
    std::size_t max_flank_mismatch = 2;
    bool reverse_complement = true;
};

std::string reverse_complement(std::string_view seq);

/// The L-letter design region of a read, or why it was rejected. A read must
/// be exactly flank5 + L + flank3 long, with each flank within
/// max_flank_mismatch substitutions, on either strand.
std::variant<std::string, Rejection> extract_design_region(const SequenceRecord& record,
                                                           const Design& design,
                                                           const FilterOptions& options = {});

/// Streams records through extract_design_region, tallying a FilterReport.
class RegionFilter {
public:
    RegionFilter(const Design& design, FilterOptions options = {});

    /// Appends the region to `out` if kept.
    void add(const SequenceRecord& record, RegionBlock& out);
    const FilterReport& report() const { return report_; }

private:
    const Design& design_;
    FilterOptions options_;
    FilterReport report_;
};

/// Reads every record of a FASTQ/FASTA stream and returns the kept regions.
RegionBlock filter_stream(std::istream& in, const Design& design, const FilterOptions& options,
                          FilterReport& report);

/// histogram[r] = reads that were the r-th occurrence of their sequence.
struct DuplicationProfile {
    std::map<std::uint64_t, std::uint64_t> histogram;
    std::uint64_t unique_count = 0;

    std::uint64_t total_reads() const;
    friend bool operator==(const DuplicationProfile&, const DuplicationProfile&) = default;
};

struct DedupResult {
    RegionBlock unique;  // sorted lexicographically
    DuplicationProfile profile;
};

/// Exact-string deduplicator. Memory grows with the number of distinct
/// regions; partial results merge associatively.
class Deduplicator {
public:
    explicit Deduplicator(std::size_t length) : length_(length) {}

    void add(std::string_view region);
    void add(const RegionBlock& regions);
    void merge(const Deduplicator& other);
    DedupResult finish() const;

    std::size_t unique_count() const { return counts_.size(); }

private:
    std::size_t length_;
    std::unordered_map<std::string, std::uint64_t> counts_;
};

DedupResult dedup(const RegionBlock& regions);

/// Unique design regions seen in one sequencing run.
struct RunDigest {
    std::string run_id;
    std::size_t length = 0;
    std::vector<std::string> sequences;  // sorted, unique
    std::uint64_t read_count = 0;

    friend bool operator==(const RunDigest&, const RunDigest&) = default;
};

RunDigest make_run_digest(std::string run_id, const RegionBlock& unique_regions,
                          std::uint64_t read_count);

/// Exact intersection; throws ValidationError if the region lengths differ.
std::vector<std::string> cross_run_shared(const RunDigest& a, const RunDigest& b);

void write_run_digest(std::ostream& out, const RunDigest& digest);
RunDigest read_run_digest(std::istream& in);

}  // namespace posers::ingest
