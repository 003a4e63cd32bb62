#pragma once
// Platform-specific read simulation and alignment-then-vote consensus.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dnasim/channel.hpp"
#include "dnasim/pcr.hpp"
#include "dnasim/random.hpp"
#include "dnasim/sequence.hpp"

namespace dnasim {

enum class Platform { Illumina, Nanopore };

std::string_view platform_name(Platform p) noexcept;
Platform parse_platform(std::string_view name);  // ConfigError on unknown names

struct SequencingProfile {
    Platform platform = Platform::Nanopore;
    NoiseProfile read_noise{0.03, 0.03, 0.04};
    std::size_t read_length = 0;  // illumina only; nanopore reads are full-length
    std::size_t depth = 11;

    static SequencingProfile illumina();
    static SequencingProfile nanopore();
    void validate() const;
};

struct Read {
    DnaSequence bases;
    std::size_t true_offset = 0;  // start of the source fragment in reference coordinates
    std::uint64_t source_id = 0;  // pool molecule id
};

struct ReadSet {
    std::vector<Read> reads;
    std::size_t reference_length = 0;
    double indel_rate = 0.0;  // ins + del of the read noise; sizes the alignment band
};

// Reads needed so every reference position has expected coverage `depth`.
// Start positions are uniform over [-(read_length-1), reference_length-1] and
// fragments are clipped to the molecule, so coverage is flat up to the ends.
std::size_t illumina_read_count(std::size_t depth, std::size_t reference_length, std::size_t read_length);

ReadSet simulate_sequencing_reads(const MoleculePool& pool, const SequencingProfile& profile, RandomSource& rng);

struct ConsensusOptions {
    std::size_t passes = 2;      // alignment + vote rounds
    std::size_t min_band = 16;
    double band_factor = 3.0;    // band = max(min_band, band_factor * expected indels per read)
};

struct ConsensusStats {
    std::vector<std::size_t> changed_columns;  // per pass: inserted + deleted + substituted columns
};

// Greedy read tiling: at every uncovered position, take the placed read that
// reaches furthest. This seeds the consensus and is the no-consensus ablation.
DnaSequence tile_reads(const ReadSet& reads);

// Places reads at their true offsets, aligns each to the working consensus
// with a banded semi-global DP and votes per column over {A,C,G,T,gap} and per
// slot over insertion / no insertion. Ties: A < C < G < T, keep beats delete.
DnaSequence consensus_decode(const ReadSet& reads, const ConsensusOptions& options = {},
                             ConsensusStats* stats = nullptr);

}  // namespace dnasim
