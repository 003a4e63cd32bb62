#include "dnasim/seqio.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dnasim/errors.hpp"

namespace dnasim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    return in;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void write_fasta(std::ostream& out, const FastaRecord& rec, std::size_t width) {
    out << '>' << rec.id;
    if (!rec.comment.empty()) out << ' ' << rec.comment;
    out << '\n';
    const std::string& s = rec.seq.str();
    for (std::size_t i = 0; i < s.size(); i += width) {
        out.write(s.data() + i, static_cast<std::streamsize>(std::min(width, s.size() - i)));
        out << '\n';
    }
}

void write_fasta(const std::filesystem::path& path, std::span<const FastaRecord> records) {
    auto out = open_out(path);
    for (const auto& r : records) write_fasta(out, r);
}

std::vector<FastaRecord> read_fasta(std::istream& in) {
    std::vector<FastaRecord> out;
    std::string line;
    std::string seq;
    bool open = false;
    auto flush = [&]() {
        if (open) out.back().seq = DnaSequence(std::move(seq));
        seq.clear();
    };
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        if (line[0] == '>') {
            flush();
            FastaRecord rec;
            const auto space = line.find(' ');
            rec.id = line.substr(1, space == std::string::npos ? std::string::npos : space - 1);
            if (space != std::string::npos) rec.comment = line.substr(space + 1);
            out.push_back(std::move(rec));
            open = true;
        } else {
            if (!open) throw IngestError("FASTA sequence data before the first header");
            seq += line;
        }
    }
    flush();
    return out;
}

std::vector<FastaRecord> read_fasta(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_fasta(in);
}

void write_reads_fastq(std::ostream& out, const ReadSet& reads, const std::string& prefix) {
    std::string qual;
    for (std::size_t i = 0; i < reads.reads.size(); ++i) {
        const Read& r = reads.reads[i];
        qual.assign(r.bases.size(), 'I');
        out << '@' << prefix << '_' << i << " offset=" << r.true_offset << " source=" << r.source_id << '\n'
            << r.bases.str() << "\n+\n"
            << qual << '\n';
    }
}

void write_reads_fastq(const std::filesystem::path& path, const ReadSet& reads, const std::string& prefix) {
    auto out = open_out(path);
    write_reads_fastq(out, reads, prefix);
}

ReadSet read_reads_fastq(std::istream& in, std::size_t reference_length) {
    ReadSet rs;
    rs.reference_length = reference_length;
    std::string header, seq, plus, qual;
    while (std::getline(in, header)) {
        strip_cr(header);
        if (header.empty()) continue;
        if (header[0] != '@' || !std::getline(in, seq) || !std::getline(in, plus) || !std::getline(in, qual)) {
            throw IngestError("malformed FASTQ record near '" + header + "'");
        }
        strip_cr(seq);
        strip_cr(plus);
        strip_cr(qual);
        if (plus.empty() || plus[0] != '+' || qual.size() != seq.size()) {
            throw IngestError("malformed FASTQ record near '" + header + "'");
        }
        Read r;
        r.bases = DnaSequence(seq);
        std::istringstream fields(header.substr(1));
        std::string tok;
        fields >> tok;  // read id
        while (fields >> tok) {
            if (tok.rfind("offset=", 0) == 0) r.true_offset = std::stoull(tok.substr(7));
            if (tok.rfind("source=", 0) == 0) r.source_id = std::stoull(tok.substr(7));
        }
        rs.reads.push_back(std::move(r));
    }
    return rs;
}

void write_bitstream(std::ostream& out, const BitStream& bits) {
    std::uint64_t n = bits.size();
    unsigned char prefix[8];
    for (int i = 0; i < 8; ++i) prefix[i] = static_cast<unsigned char>(n >> (8 * i));
    out.write(reinterpret_cast<const char*>(prefix), 8);
    std::string packed((bits.size() + 7) / 8, '\0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) packed[i / 8] = static_cast<char>(packed[i / 8] | (0x80 >> (i % 8)));
    }
    out.write(packed.data(), static_cast<std::streamsize>(packed.size()));
}

void write_bitstream(const std::filesystem::path& path, const BitStream& bits) {
    auto out = open_out(path);
    write_bitstream(out, bits);
}

BitStream read_bitstream(std::istream& in) {
    unsigned char prefix[8];
    if (!in.read(reinterpret_cast<char*>(prefix), 8)) throw IngestError("truncated bit-stream length prefix");
    std::uint64_t n = 0;
    for (int i = 7; i >= 0; --i) n = (n << 8) | prefix[i];
    std::string packed((n + 7) / 8, '\0');
    if (!in.read(packed.data(), static_cast<std::streamsize>(packed.size()))) {
        throw IngestError("truncated bit-stream payload (expected " + std::to_string(n) + " bits)");
    }
    BitStream bits(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits.set(i, (static_cast<unsigned char>(packed[i / 8]) >> (7 - i % 8)) & 1U);
    }
    return bits;
}

BitStream read_bitstream(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_bitstream(in);
}

}  // namespace dnasim
