#pragma once
// Unit-cost edit-distance dynamic programs.
//
// All banded routines restrict the DP to cells whose column index j lies in
// [anchor + i - band, anchor + i + band] for read row i.

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace dnasim {

inline constexpr std::size_t kOutsideBand = std::numeric_limits<std::size_t>::max();

// Quadratic reference DP, O(|a|*|b|) time, O(min) memory.
std::size_t edit_distance_full(std::string_view a, std::string_view b);

// Global distance restricted to |j - i| <= band. Equals edit_distance_full
// whenever the true distance is <= band; kOutsideBand if |len(a)-len(b)| > band.
std::size_t banded_edit_distance(std::string_view a, std::string_view b, std::size_t band);

// Exact Levenshtein distance: banded passes with doubling band, exact by the
// band-exit argument, with a full-DP fallback once the band covers the matrix.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// One read placed against a reference (consensus) sequence. Each reference
// column in [ref_begin, ref_end) receives the aligned read base (0..3) or kGap.
struct ReadAlignment {
    static constexpr std::int8_t kGap = 4;

    struct Insertion {
        std::size_t before_column;  // bases sit between before_column-1 and before_column
        std::int8_t first_base;
        std::uint32_t length;
    };

    std::size_t ref_begin = 0;
    std::size_t ref_end = 0;
    std::size_t distance = 0;
    std::vector<std::int8_t> columns;    // size ref_end - ref_begin
    std::vector<Insertion> insertions;   // interior slots only, ascending
};

// Semi-global banded aligner: every read base is aligned, reference overhangs
// on either side are free. Buffers are reused across calls, so keep one per thread.
class BandedAligner {
public:
    // anchor: reference column where the read's first base is expected.
    ReadAlignment align(std::string_view read, std::string_view ref, std::size_t anchor, std::size_t band);

private:
    std::vector<std::int32_t> prev_;
    std::vector<std::int32_t> cur_;
    std::vector<std::uint8_t> trace_;
};

}  // namespace dnasim
