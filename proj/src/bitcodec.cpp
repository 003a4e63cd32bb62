#include "dnasim/bitcodec.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dnasim/errors.hpp"

namespace dnasim {

void ConstrainedCodecConfig::validate() const {
    if (max_homopolymer < 1) throw ConfigError("max_homopolymer must be >= 1");
    if (gc_window < 1) throw ConfigError("gc_window must be >= 1");
    if (!(gc_low >= 0.0 && gc_high <= 1.0 && gc_low < gc_high)) {
        throw ConfigError("gc band must satisfy 0 <= gc_low < gc_high <= 1");
    }
}

int ConstrainedCodecConfig::min_gc_count() const {
    return static_cast<int>(std::ceil(gc_low * gc_window - 1e-9));
}

int ConstrainedCodecConfig::max_gc_count() const {
    return static_cast<int>(std::floor(gc_high * gc_window + 1e-9));
}

DnaSequence bits_to_dna(const BitStream& bits) {
    if (bits.size() % 2 != 0) {
        throw FramingError("bit stream of length " + std::to_string(bits.size()) +
                           " is not a whole number of 2-bit symbols; pad before encoding");
    }
    std::string out(bits.size() / 2, 'A');
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = kBases[(bits[2 * i] << 1) | bits[2 * i + 1]];
    }
    return DnaSequence::unchecked(std::move(out));
}

BitStream dna_to_bits(const DnaSequence& seq) {
    BitStream out(2 * seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int v = base_index(seq[i]);
        out.set(2 * i, (v >> 1) & 1);
        out.set(2 * i + 1, v & 1);
    }
    return out;
}

namespace {

// Shared encoder/decoder state: everything the admissible set depends on.
class ConstraintState {
public:
    explicit ConstraintState(const ConstrainedCodecConfig& cfg)
        : max_run_(cfg.max_homopolymer),
          window_(cfg.gc_window),
          min_gc_(cfg.min_gc_count()),
          max_gc_(cfg.max_gc_count()) {}

    struct Admissible {
        std::array<int, 4> bases{};
        int count = 0;
    };

    Admissible admissible() const {
        Admissible a;
        const int trailing = static_cast<int>(std::min<std::size_t>(emitted_.size(), window_ - 1));
        const int remaining = window_ - trailing;
        const int start = (last_ + 1 + static_cast<int>(emitted_.size() & 3)) & 3;
        for (int k = 0; k < 4; ++k) {
            const int b = (start + k) & 3;
            if (b == last_ && run_ >= max_run_) continue;
            const int gc = trailing_gc_ + ((b == 1 || b == 2) ? 1 : 0);
            if (gc > max_gc_ || gc + (remaining - 1) < min_gc_) continue;
            a.bases[a.count++] = b;
        }
        return a;
    }

    // Rotation rank of a base regardless of admissibility (noisy decode fallback).
    int rotation_rank(int b) const {
        const int start = (last_ + 1 + static_cast<int>(emitted_.size() & 3)) & 3;
        return (b - start) & 3;
    }

    void push(int b) {
        if (emitted_.size() + 1 > static_cast<std::size_t>(window_ - 1)) {
            // The oldest trailing base leaves the window once it is full.
            const std::size_t k = emitted_.size();
            if (window_ > 1) {
                const std::size_t drop = k + 1 - static_cast<std::size_t>(window_ - 1) - 1;
                if (is_gc(kBases[emitted_[drop]])) --trailing_gc_;
            }
        }
        emitted_.push_back(static_cast<std::uint8_t>(b));
        if (window_ > 1 && is_gc(kBases[b])) ++trailing_gc_;
        run_ = (b == last_) ? run_ + 1 : 1;
        last_ = b;
    }

    std::size_t size() const noexcept { return emitted_.size(); }
    std::size_t window_begin() const noexcept {
        const std::size_t t = std::min<std::size_t>(emitted_.size(), window_ - 1);
        return emitted_.size() - t;
    }

private:
    int max_run_;
    int window_;
    int min_gc_;
    int max_gc_;
    std::vector<std::uint8_t> emitted_;
    int trailing_gc_ = 0;  // GC count over the last min(size, window-1) bases
    int last_ = 3;         // virtual predecessor so position 0 starts the rotation at A
    int run_ = 0;
};

}  // namespace

DnaSequence encode_constrained(const BitStream& bits, const ConstrainedCodecConfig& cfg) {
    cfg.validate();
    if (bits.size() % 2 != 0) {
        throw FramingError("bit stream of length " + std::to_string(bits.size()) +
                           " is not a whole number of 2-bit symbols; pad before encoding");
    }
    ConstraintState state(cfg);
    std::string out;
    out.reserve(bits.size() / 2 + bits.size() / 32 + 4);

    const std::size_t forced_limit = static_cast<std::size_t>(cfg.gc_window + cfg.max_homopolymer) + 8;
    std::size_t forced_streak = 0;
    std::size_t pos = 0;
    while (pos < bits.size()) {
        const auto adm = state.admissible();
        if (adm.count == 0 || forced_streak > forced_limit) {
            const std::size_t begin = state.window_begin();
            throw EncodingInfeasible("no base satisfies max_homopolymer=" + std::to_string(cfg.max_homopolymer) +
                                         " and GC band in window [" + std::to_string(begin) + ", " +
                                         std::to_string(state.size()) + "]",
                                     begin, state.size());
        }
        int b;
        if (adm.count == 4) {
            const int hi = bits[pos];
            const int lo = pos + 1 < bits.size() ? bits[pos + 1] : 0;  // pad; decoder drops the odd bit
            b = adm.bases[(hi << 1) | lo];
            pos += 2;
            forced_streak = 0;
        } else if (adm.count >= 2) {
            b = adm.bases[bits[pos]];
            pos += 1;
            forced_streak = 0;
        } else {
            b = adm.bases[0];
            ++forced_streak;
        }
        out.push_back(kBases[b]);
        state.push(b);
    }
    return DnaSequence::unchecked(std::move(out));
}

BitStream decode_constrained(const DnaSequence& seq, const ConstrainedCodecConfig& cfg) {
    cfg.validate();
    ConstraintState state(cfg);
    BitStream out;
    out.reserve(seq.size() * 2);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int b = base_index(seq[i]);
        const auto adm = state.admissible();
        int rank = -1;
        for (int k = 0; k < adm.count; ++k) {
            if (adm.bases[k] == b) rank = k;
        }
        if (adm.count == 4) {
            if (rank < 0) rank = state.rotation_rank(b);
            out.push_back((rank >> 1) & 1);
            out.push_back(rank & 1);
        } else if (adm.count >= 2) {
            if (rank < 0 || rank > 1) rank = state.rotation_rank(b);
            out.push_back(rank & 1);
        }
        state.push(b);
    }
    if (out.size() % 2 != 0) out.resize(out.size() - 1);
    return out;
}

std::size_t longest_homopolymer(const DnaSequence& seq) noexcept {
    std::size_t best = 0;
    std::size_t run = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        run = (i > 0 && seq[i] == seq[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

bool gc_windows_in_band(const DnaSequence& seq, const ConstrainedCodecConfig& cfg) noexcept {
    const std::size_t w = static_cast<std::size_t>(cfg.gc_window);
    if (seq.size() < w) return true;
    const int lo = cfg.min_gc_count();
    const int hi = cfg.max_gc_count();
    int gc = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (is_gc(seq[i])) ++gc;
        if (i >= w && is_gc(seq[i - w])) --gc;
        if (i + 1 >= w && (gc < lo || gc > hi)) return false;
    }
    return true;
}

}  // namespace dnasim
