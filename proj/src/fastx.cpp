#include "posers/fastx.hpp"

#include "posers/error.hpp"

namespace posers {

bool FastxReader::getline(std::string& out) {
    if (has_pending_) {
        out = std::move(pending_);
        has_pending_ = false;
        return true;
    }
    if (!std::getline(in_, out)) return false;
    ++line_;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return true;
}

bool FastxReader::next(SequenceRecord& record) {
    if (format_ == 0) {
        std::string first;
        do {
            if (!getline(first)) return false;
        } while (first.empty());
        if (first[0] == '@')
            format_ = 1;
        else if (first[0] == '>')
            format_ = 2;
        else
            throw ParseError("line " + std::to_string(line_) + ": expected '@' or '>' at start of record");
        pending_ = std::move(first);
        has_pending_ = true;
    }
    return format_ == 1 ? next_fastq(record) : next_fasta(record);
}

bool FastxReader::next_fastq(SequenceRecord& record) {
    std::string header;
    do {
        if (!getline(header)) return false;
    } while (header.empty());
    const auto header_line = line_;
    if (header[0] != '@')
        throw ParseError("line " + std::to_string(header_line) + ": expected '@' header");
    std::string seq, plus, qual;
    if (!getline(seq)) throw ParseError("line " + std::to_string(header_line) + ": truncated record (no sequence)");
    if (!getline(plus)) throw ParseError("line " + std::to_string(line_ + 1) + ": truncated record (no '+' line)");
    if (plus.empty() || plus[0] != '+') throw ParseError("line " + std::to_string(line_) + ": missing '+' separator");
    if (!getline(qual)) throw ParseError("line " + std::to_string(line_ + 1) + ": truncated record (no quality)");
    if (qual.size() != seq.size())
        throw ParseError("line " + std::to_string(line_) + ": quality length " + std::to_string(qual.size()) +
                         " != sequence length " + std::to_string(seq.size()));
    record.id = header.substr(1);
    record.seq = std::move(seq);
    record.quality = std::move(qual);
    return true;
}

bool FastxReader::next_fasta(SequenceRecord& record) {
    std::string header;
    do {
        if (!getline(header)) return false;
    } while (header.empty());
    if (header[0] != '>') throw ParseError("line " + std::to_string(line_) + ": expected '>' header");
    record.id = header.substr(1);
    record.seq.clear();
    record.quality.reset();
    std::string line;
    while (getline(line)) {
        if (!line.empty() && line[0] == '>') {
            pending_ = std::move(line);
            has_pending_ = true;
            break;
        }
        record.seq += line;
    }
    return true;
}

std::vector<SequenceRecord> parse_fastx(std::istream& in) {
    FastxReader reader(in);
    std::vector<SequenceRecord> out;
    SequenceRecord r;
    while (reader.next(r)) out.push_back(r);
    return out;
}

void write_record(std::ostream& out, const SequenceRecord& record, LibraryFormat format) {
    if (format == LibraryFormat::fasta) {
        out << '>' << record.id << '\n' << record.seq << '\n';
        return;
    }
    out << '@' << record.id << '\n' << record.seq << "\n+\n";
    if (record.quality)
        out << *record.quality << '\n';
    else
        out << std::string(record.seq.size(), 'I') << '\n';
}

void write_library(std::ostream& out, std::span<const SequenceRecord> records, const Design& design,
                   bool include_flanks, LibraryFormat format) {
    SequenceRecord flanked;
    for (const auto& r : records) {
        if (!include_flanks) {
            write_record(out, r, format);
            continue;
        }
        flanked.id = r.id;
        flanked.seq = design.flank5 + r.seq + design.flank3;
        flanked.quality.reset();
        write_record(out, flanked, format);
    }
    if (!out) throw Error("write failed");
}

}  // namespace posers
