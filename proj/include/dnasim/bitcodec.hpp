#pragma once
// Bit stream <-> nucleotide conversion.
//
// Plain codec: fixed 2-bit mapping 00->A, 01->C, 10->G, 11->T.
//
// Constrained codec: a state-dependent rotation code. At every output position
// the encoder derives, from the bases already emitted, the set of bases that
// keep the homopolymer run within max_homopolymer and keep the GC window
// reachable inside [gc_low, gc_high]. The set is listed in a rotated base order
// (the rotation advances with the previous base and the position). With all
// four bases admissible the base carries two bits; with two or three it carries
// one; with a single admissible base it is forced and carries none. The decoder
// rebuilds the same sets from the received bases, so decoding is exact on
// noiseless input and the output length is |bits|/2 whenever no constraint binds.

#include <cstddef>

#include "dnasim/sequence.hpp"

namespace dnasim {

struct ConstrainedCodecConfig {
    int max_homopolymer = 3;
    int gc_window = 50;
    double gc_low = 0.40;
    double gc_high = 0.60;

    void validate() const;  // ConfigError on violated invariants

    // Integer GC-count bounds for one full window.
    int min_gc_count() const;
    int max_gc_count() const;

    friend bool operator==(const ConstrainedCodecConfig&, const ConstrainedCodecConfig&) = default;
};

// Throws FramingError on odd-length input.
DnaSequence bits_to_dna(const BitStream& bits);
BitStream dna_to_bits(const DnaSequence& seq);

// Throws FramingError on odd-length input and EncodingInfeasible when no base
// satisfies both constraints at some position.
DnaSequence encode_constrained(const BitStream& bits, const ConstrainedCodecConfig& cfg);
// Exact inverse on noiseless input; best-effort on corrupted input.
BitStream decode_constrained(const DnaSequence& seq, const ConstrainedCodecConfig& cfg);

// Predicates used by tests and by the pipeline's sanity checks.
std::size_t longest_homopolymer(const DnaSequence& seq) noexcept;
// True when every full window of `window` bases has GC count in the config bounds.
bool gc_windows_in_band(const DnaSequence& seq, const ConstrainedCodecConfig& cfg) noexcept;

}  // namespace dnasim
