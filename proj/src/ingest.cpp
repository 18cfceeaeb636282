#include "posers/ingest.hpp"

#include <algorithm>

#include "posers/error.hpp"
#include "posers/fastx.hpp"

namespace posers::ingest {

std::string reverse_complement(std::string_view seq) {
    std::string out(seq.rbegin(), seq.rend());
    for (char& c : out) {
        switch (c) {
            case 'A': c = 'T'; break;
            case 'C': c = 'G'; break;
            case 'G': c = 'C'; break;
            case 'T': c = 'A'; break;
            default: c = 'N'; break;
        }
    }
    return out;
}

namespace {

std::size_t hamming_within(std::string_view a, std::string_view b, std::size_t limit) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i] && ++d > limit) break;
    return d;
}

bool flanks_match(std::string_view seq, const Design& design, std::size_t max_mismatch) {
    const std::string_view f5 = design.flank5, f3 = design.flank3;
    return hamming_within(seq.substr(0, f5.size()), f5, max_mismatch) <= max_mismatch &&
           hamming_within(seq.substr(seq.size() - f3.size()), f3, max_mismatch) <= max_mismatch;
}

}  // namespace

std::variant<std::string, Rejection> extract_design_region(const SequenceRecord& record, const Design& design,
                                                           const FilterOptions& options) {
    const std::size_t expected = design.flank5.size() + design.length + design.flank3.size();
    if (record.seq.size() != expected) return Rejection::wrong_length;

    std::string_view chosen;
    std::string rc;
    if (flanks_match(record.seq, design, options.max_flank_mismatch)) {
        chosen = record.seq;
    } else if (options.reverse_complement) {
        rc = reverse_complement(record.seq);
        if (!flanks_match(rc, design, options.max_flank_mismatch)) return Rejection::flank_mismatch;
        chosen = rc;
    } else {
        return Rejection::flank_mismatch;
    }
    const auto region = chosen.substr(design.flank5.size(), design.length);
    if (!is_acgt(region)) return Rejection::ambiguous_base;
    return std::string(region);
}

RegionFilter::RegionFilter(const Design& design, FilterOptions options) : design_(design), options_(options) {}

void RegionFilter::add(const SequenceRecord& record, RegionBlock& out) {
    auto result = extract_design_region(record, design_, options_);
    if (auto* region = std::get_if<std::string>(&result)) {
        out.push_back(*region);
        ++report_.kept;
        return;
    }
    switch (std::get<Rejection>(result)) {
        case Rejection::wrong_length: ++report_.rejected_wrong_length; break;
        case Rejection::flank_mismatch: ++report_.rejected_flank_mismatch; break;
        case Rejection::ambiguous_base: ++report_.rejected_ambiguous_base; break;
    }
}

RegionBlock filter_stream(std::istream& in, const Design& design, const FilterOptions& options,
                          FilterReport& report) {
    RegionFilter filter(design, options);
    RegionBlock regions(design.length);
    FastxReader reader(in);
    SequenceRecord record;
    while (reader.next(record)) filter.add(record, regions);
    report = filter.report();
    return regions;
}

std::uint64_t DuplicationProfile::total_reads() const {
    std::uint64_t n = 0;
    for (const auto& [rank, count] : histogram) n += count;
    return n;
}

void Deduplicator::add(std::string_view region) {
    if (region.size() != length_) throw ValidationError("region length mismatch in dedup");
    auto [it, inserted] = counts_.try_emplace(std::string(region), 0);
    ++it->second;
}

void Deduplicator::add(const RegionBlock& regions) {
    for (std::size_t i = 0; i < regions.size(); ++i) add(regions[i]);
}

void Deduplicator::merge(const Deduplicator& other) {
    if (other.length_ != length_ && !other.counts_.empty()) throw ValidationError("region length mismatch in dedup");
    for (const auto& [seq, count] : other.counts_) counts_[seq] += count;
}

DedupResult Deduplicator::finish() const {
    DedupResult result{RegionBlock(length_), {}};
    std::vector<const std::pair<const std::string, std::uint64_t>*> entries;
    entries.reserve(counts_.size());
    for (const auto& e : counts_) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->first < b->first; });

    // The r-th occurrence of a sequence exists iff its multiplicity is >= r,
    // so the rank histogram follows from the multiplicities alone.
    std::map<std::uint64_t, std::uint64_t> multiplicity;
    result.unique.reserve(entries.size());
    for (const auto* e : entries) {
        result.unique.push_back(e->first);
        ++multiplicity[e->second];
    }
    std::uint64_t at_least = counts_.size();
    for (const auto& [m, n] : multiplicity) {
        const std::uint64_t first_rank = result.profile.histogram.empty() ? 1 : result.profile.histogram.rbegin()->first + 1;
        for (std::uint64_t r = first_rank; r <= m; ++r) result.profile.histogram[r] = at_least;
        at_least -= n;
    }
    result.profile.unique_count = counts_.size();
    return result;
}

DedupResult dedup(const RegionBlock& regions) {
    Deduplicator d(regions.length());
    d.add(regions);
    return d.finish();
}

RunDigest make_run_digest(std::string run_id, const RegionBlock& unique_regions, std::uint64_t read_count) {
    RunDigest digest;
    digest.run_id = std::move(run_id);
    digest.length = unique_regions.length();
    digest.sequences = unique_regions.to_strings();
    std::sort(digest.sequences.begin(), digest.sequences.end());
    digest.sequences.erase(std::unique(digest.sequences.begin(), digest.sequences.end()), digest.sequences.end());
    digest.read_count = read_count;
    return digest;
}

std::vector<std::string> cross_run_shared(const RunDigest& a, const RunDigest& b) {
    if (a.length != b.length)
        throw ValidationError("digests have different region lengths (" + std::to_string(a.length) + " vs " +
                              std::to_string(b.length) + ")");
    std::vector<std::string> shared;
    std::set_intersection(a.sequences.begin(), a.sequences.end(), b.sequences.begin(), b.sequences.end(),
                          std::back_inserter(shared));
    return shared;
}

namespace {
constexpr std::string_view kDigestMagic = "#posers-digest v1";
}

void write_run_digest(std::ostream& out, const RunDigest& digest) {
    out << kDigestMagic << '\n'
        << "run_id\t" << digest.run_id << '\n'
        << "length\t" << digest.length << '\n'
        << "reads\t" << digest.read_count << '\n'
        << "count\t" << digest.sequences.size() << '\n';
    for (const auto& s : digest.sequences) out << s << '\n';
    if (!out) throw Error("digest write failed");
}

RunDigest read_run_digest(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(std::string("digest: truncated before ") + what);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    next("header");
    if (line.rfind("#posers-digest", 0) != 0) throw ParseError("digest: missing header");
    if (line != kDigestMagic) throw VersionError("digest: unsupported version '" + line + "'");
    auto keyed = [&](const char* key) {
        next(key);
        const std::string prefix = std::string(key) + "\t";
        if (line.rfind(prefix, 0) != 0)
            throw ParseError("digest line " + std::to_string(lineno) + ": expected '" + key + "'");
        return line.substr(prefix.size());
    };
    RunDigest d;
    try {
        d.run_id = keyed("run_id");
        d.length = std::stoull(keyed("length"));
        d.read_count = std::stoull(keyed("reads"));
        const auto count = std::stoull(keyed("count"));
        d.sequences.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            next("sequence list end");
            if (line.size() != d.length || !is_acgt(line))
                throw ParseError("digest line " + std::to_string(lineno) + ": bad sequence");
            if (!d.sequences.empty() && !(d.sequences.back() < line))
                throw ParseError("digest line " + std::to_string(lineno) + ": sequences not sorted/unique");
            d.sequences.push_back(line);
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("digest line " + std::to_string(lineno) + ": expected a number");
    } catch (const std::out_of_range&) {
        throw ParseError("digest line " + std::to_string(lineno) + ": number out of range");
    }
    return d;
}

}  // namespace posers::ingest
