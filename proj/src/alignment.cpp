#include "dnasim/alignment.hpp"

#include <algorithm>

#include "dnasim/sequence.hpp"

namespace dnasim {

namespace {

constexpr std::int32_t kInf = 1 << 29;

enum : std::uint8_t { kDiag = 0, kUp = 1, kLeft = 2 };

struct BandResult {
    std::int32_t cost = kInf;
    long end_column = -1;
    long end_k = -1;
};

// Row buffers are indexed by k = d + band + 1, with INF sentinels at 0 and 2*band+2.
template <bool kTrace, bool kFreeEnds>
BandResult banded_dp(std::string_view read, std::string_view ref, long anchor, long band,
                     std::vector<std::int32_t>& prev, std::vector<std::int32_t>& cur,
                     std::vector<std::uint8_t>* trace) {
    const long m = static_cast<long>(read.size());
    const long n = static_cast<long>(ref.size());
    const long width = 2 * band + 1;
    prev.assign(static_cast<std::size_t>(width + 2), kInf);
    cur.assign(static_cast<std::size_t>(width + 2), kInf);
    if constexpr (kTrace) trace->assign(static_cast<std::size_t>((m + 1) * width), kLeft);

    // Row 0.
    for (long k = 1; k <= width; ++k) {
        const long j = anchor + (k - band - 1);
        if (j < 0 || j > n) continue;
        prev[k] = kFreeEnds ? 0 : static_cast<std::int32_t>(j);
    }

    for (long i = 1; i <= m; ++i) {
        const long base = anchor + i;
        const long k_lo = std::max<long>(1, band + 1 - base);
        const long k_hi = std::min<long>(width, band + 1 + n - base);
        std::fill(cur.begin(), cur.end(), kInf);
        const char rb = read[static_cast<std::size_t>(i - 1)];
        std::uint8_t* tb = nullptr;
        if constexpr (kTrace) tb = trace->data() + i * width - 1;  // tb[k] for k in 1..width
        for (long k = k_lo; k <= k_hi; ++k) {
            const long j = base + (k - band - 1);
            std::int32_t best = kInf;
            std::uint8_t code = kLeft;
            if (j >= 1) {
                best = prev[k] + (rb != ref[static_cast<std::size_t>(j - 1)] ? 1 : 0);
                code = kDiag;
            }
            const std::int32_t left = cur[k - 1] + 1;
            if (left < best) {
                best = left;
                code = kLeft;
            }
            const std::int32_t up = prev[k + 1] + 1;
            if (up < best) {
                best = up;
                code = kUp;
            }
            cur[k] = std::min(best, kInf);
            if constexpr (kTrace) tb[k] = code;
        }
        std::swap(prev, cur);
    }

    BandResult res;
    if constexpr (kFreeEnds) {
        for (long k = 1; k <= width; ++k) {
            const long j = anchor + m + (k - band - 1);
            if (j < 0 || j > n) continue;
            if (prev[k] < res.cost) {
                res.cost = prev[k];
                res.end_column = j;
                res.end_k = k;
            }
        }
    } else {
        const long k = n - anchor - m + band + 1;
        if (k >= 1 && k <= width) {
            res.cost = prev[k];
            res.end_column = n;
            res.end_k = k;
        }
    }
    return res;
}

}  // namespace

std::size_t edit_distance_full(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1] ? 1 : 0)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::size_t banded_edit_distance(std::string_view a, std::string_view b, std::size_t band) {
    const std::size_t diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    if (diff > band) return kOutsideBand;
    // A band wider than the longer string adds nothing.
    const std::size_t cap = std::max(a.size(), b.size()) + 1;
    const long w = static_cast<long>(std::min(band, cap));
    std::vector<std::int32_t> prev, cur;
    const BandResult r = banded_dp<false, false>(a, b, 0, w, prev, cur, nullptr);
    if (r.cost >= kInf) return kOutsideBand;
    return static_cast<std::size_t>(r.cost);
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    // Common prefix and suffix never change the distance.
    std::size_t p = 0;
    while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
    a.remove_prefix(p);
    b.remove_prefix(p);
    std::size_t s = 0;
    while (s < a.size() && s < b.size() && a[a.size() - 1 - s] == b[b.size() - 1 - s]) ++s;
    a.remove_suffix(s);
    b.remove_suffix(s);
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();

    const std::size_t longer = std::max(a.size(), b.size());
    const std::size_t diff = longer - std::min(a.size(), b.size());
    std::size_t band = std::max<std::size_t>(16, diff);
    while (band < longer) {
        const std::size_t d = banded_edit_distance(a, b, band);
        if (d <= band) return d;
        band *= 2;
    }
    return edit_distance_full(a, b);
}

ReadAlignment BandedAligner::align(std::string_view read, std::string_view ref, std::size_t anchor,
                                   std::size_t band) {
    ReadAlignment out;
    const std::size_t cap = std::max(read.size(), ref.size()) + 1;
    const long w = static_cast<long>(std::min(band, cap));
    const long a = static_cast<long>(std::min(anchor, ref.size()));
    if (read.empty()) {
        out.ref_begin = out.ref_end = static_cast<std::size_t>(a);
        return out;
    }
    const BandResult r = banded_dp<true, true>(read, ref, a, w, prev_, cur_, &trace_);
    if (r.cost >= kInf) {
        // Read cannot be placed inside the band; it contributes no votes.
        out.ref_begin = out.ref_end = static_cast<std::size_t>(a);
        out.distance = kOutsideBand;
        return out;
    }

    const long width = 2 * w + 1;
    long i = static_cast<long>(read.size());
    long j = r.end_column;
    long k = r.end_k;
    out.distance = static_cast<std::size_t>(r.cost);
    out.columns.reserve(static_cast<std::size_t>(j - a + w));
    while (i > 0) {
        const std::uint8_t code = trace_[static_cast<std::size_t>(i * width + k - 1)];
        if (code == kDiag) {
            out.columns.push_back(static_cast<std::int8_t>(base_index(read[static_cast<std::size_t>(i - 1)])));
            --i;
            --j;
        } else if (code == kUp) {
            const auto slot = static_cast<std::size_t>(j);
            const auto rb = static_cast<std::int8_t>(base_index(read[static_cast<std::size_t>(i - 1)]));
            if (!out.insertions.empty() && out.insertions.back().before_column == slot) {
                out.insertions.back().first_base = rb;
                ++out.insertions.back().length;
            } else {
                out.insertions.push_back({slot, rb, 1});
            }
            --i;
            ++k;
        } else {
            out.columns.push_back(ReadAlignment::kGap);
            --j;
            --k;
        }
    }
    out.ref_begin = static_cast<std::size_t>(j);
    out.ref_end = static_cast<std::size_t>(r.end_column);
    std::reverse(out.columns.begin(), out.columns.end());
    std::reverse(out.insertions.begin(), out.insertions.end());
    std::erase_if(out.insertions, [&](const ReadAlignment::Insertion& ins) {
        return ins.before_column <= out.ref_begin || ins.before_column >= out.ref_end;
    });
    return out;
}

}  // namespace dnasim
