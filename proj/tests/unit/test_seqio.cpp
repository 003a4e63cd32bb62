#include <sstream>

#include "doctest.h"
#include "dnasim/errors.hpp"
#include "dnasim/seqio.hpp"
#include "support.hpp"

using namespace dnasim;

TEST_SUITE("seqio") {
    TEST_CASE("FASTA wraps at 80 columns and round trips") {
        RandomSource rng(1);
        const FastaRecord rec{"payload_00000", "sub=0.05 ins=0.02 del=0.02", testing::random_dna(rng, 205)};
        std::ostringstream out;
        write_fasta(out, rec);
        const std::string text = out.str();
        std::istringstream lines(text);
        std::string header, l1, l2, l3;
        std::getline(lines, header);
        std::getline(lines, l1);
        std::getline(lines, l2);
        std::getline(lines, l3);
        CHECK(header == ">payload_00000 sub=0.05 ins=0.02 del=0.02");
        CHECK(l1.size() == 80);
        CHECK(l2.size() == 80);
        CHECK(l3.size() == 45);

        std::istringstream in(text + text);
        const auto back = read_fasta(in);
        REQUIRE(back.size() == 2);
        CHECK(back[0].id == rec.id);
        CHECK(back[0].comment == rec.comment);
        CHECK(back[0].seq == rec.seq);
    }

    TEST_CASE("FASTA tolerates CRLF and blank lines; rejects orphan sequence") {
        std::istringstream in(">a\r\nACGT\r\n\r\nAC\r\n>b\r\n\r\n");
        const auto recs = read_fasta(in);
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].seq.str() == "ACGTAC");
        CHECK(recs[1].seq.empty());
        std::istringstream orphan("ACGT\n>a\nAC\n");
        CHECK_THROWS_AS(read_fasta(orphan), IngestError);
        std::istringstream bad(">a\nACGN\n");
        CHECK_THROWS_AS(read_fasta(bad), IngestError);
    }

    TEST_CASE("FASTA file helpers") {
        testing::TempDir dir("fasta");
        const std::vector<FastaRecord> recs = {{"x", "", DnaSequence("ACGT")}, {"y", "c=1", DnaSequence("TT")}};
        write_fasta(dir / "a.fa", recs);
        const auto back = read_fasta(dir / "a.fa");
        REQUIRE(back.size() == 2);
        CHECK(back[1].comment == "c=1");
        CHECK_THROWS_AS(read_fasta(dir / "missing.fa"), IngestError);
    }

    TEST_CASE("reads round trip through the FASTQ-like format") {
        ReadSet rs;
        rs.reference_length = 100;
        rs.reads.push_back({DnaSequence("ACGTACGT"), 12, 7});
        rs.reads.push_back({DnaSequence("TTGA"), 0, 3});
        std::ostringstream out;
        write_reads_fastq(out, rs, "read");
        CHECK(out.str().rfind("@read_0 offset=12 source=7\nACGTACGT\n+\nIIIIIIII\n", 0) == 0);
        std::istringstream in(out.str());
        const ReadSet back = read_reads_fastq(in, 100);
        REQUIRE(back.reads.size() == 2);
        CHECK(back.reads[0].bases == rs.reads[0].bases);
        CHECK(back.reads[0].true_offset == 12);
        CHECK(back.reads[0].source_id == 7);
        CHECK(back.reads[1].bases.str() == "TTGA");
        CHECK(back.reference_length == 100);

        std::istringstream broken("@read_0 offset=1 source=0\nACGT\n");
        CHECK_THROWS_AS(read_reads_fastq(broken, 10), IngestError);
    }

    TEST_CASE("bit stream file format") {
        const BitStream b = BitStream::from_string("1010000011");
        std::ostringstream out;
        write_bitstream(out, b);
        const std::string bytes = out.str();
        REQUIRE(bytes.size() == 8 + 2);
        CHECK(static_cast<unsigned char>(bytes[0]) == 10);  // little-endian length
        for (int i = 1; i < 8; ++i) CHECK(bytes[static_cast<std::size_t>(i)] == 0);
        CHECK(static_cast<unsigned char>(bytes[8]) == 0xA0);  // MSB first
        CHECK(static_cast<unsigned char>(bytes[9]) == 0xC0);
        std::istringstream in(bytes);
        CHECK(read_bitstream(in) == b);
        std::istringstream cut(bytes.substr(0, 9));
        CHECK_THROWS_AS(read_bitstream(cut), IngestError);
        std::istringstream empty("");
        CHECK_THROWS_AS(read_bitstream(empty), IngestError);
    }
}
