#pragma once
// FASTA / FASTQ-like / packed bit-stream serialization.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dnasim/sequence.hpp"
#include "dnasim/sequencing.hpp"

namespace dnasim {

struct FastaRecord {
    std::string id;
    std::string comment;  // rest of the header line after the first space
    DnaSequence seq;
};

inline constexpr std::size_t kFastaWidth = 80;

void write_fasta(std::ostream& out, const FastaRecord& rec, std::size_t width = kFastaWidth);
void write_fasta(const std::filesystem::path& path, std::span<const FastaRecord> records);
std::vector<FastaRecord> read_fasta(std::istream& in);
std::vector<FastaRecord> read_fasta(const std::filesystem::path& path);

// `@<prefix>_<i> offset=<n> source=<id>`, sequence, `+`, uniform 'I' qualities.
void write_reads_fastq(std::ostream& out, const ReadSet& reads, const std::string& prefix = "read");
void write_reads_fastq(const std::filesystem::path& path, const ReadSet& reads, const std::string& prefix = "read");
ReadSet read_reads_fastq(std::istream& in, std::size_t reference_length);

// 8-byte little-endian bit count, then bits packed MSB-first into bytes.
void write_bitstream(std::ostream& out, const BitStream& bits);
void write_bitstream(const std::filesystem::path& path, const BitStream& bits);
BitStream read_bitstream(std::istream& in);
BitStream read_bitstream(const std::filesystem::path& path);

}  // namespace dnasim
