#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "posers/core.hpp"

namespace posers {

enum class LibraryFormat { fasta, fastq };

/// Streaming FASTQ/FASTA reader. The format is taken from the first
/// non-blank line ('@' or '>'). FASTA sequences may span several lines;
/// FASTQ records must be exactly four lines.
class FastxReader {
public:
    explicit FastxReader(std::istream& in) : in_(in) {}

    /// Reads the next record; false at end of input. Throws ParseError with
    /// the offending line number.
    bool next(SequenceRecord& record);

    std::size_t line() const { return line_; }

private:
    bool getline(std::string& out);
    bool next_fastq(SequenceRecord& record);
    bool next_fasta(SequenceRecord& record);

    std::istream& in_;
    std::size_t line_ = 0;
    std::string pending_;
    bool has_pending_ = false;
    int format_ = 0;  // 0 unknown, 1 fastq, 2 fasta
};

std::vector<SequenceRecord> parse_fastx(std::istream& in);

void write_record(std::ostream& out, const SequenceRecord& record, LibraryFormat format);

/// Writes every record, wrapped in the design's flanks when requested. FASTQ
/// qualities are a constant 'I'.
void write_library(std::ostream& out, std::span<const SequenceRecord> records,
                   const Design& design, bool include_flanks, LibraryFormat format);

}  // namespace posers
