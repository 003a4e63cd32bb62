#include "dnasim/sequencing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "dnasim/alignment.hpp"
#include "dnasim/errors.hpp"

namespace dnasim {

std::string_view platform_name(Platform p) noexcept {
    return p == Platform::Illumina ? "illumina" : "nanopore";
}

Platform parse_platform(std::string_view name) {
    if (name == "illumina") return Platform::Illumina;
    if (name == "nanopore") return Platform::Nanopore;
    throw ConfigError("unknown sequencing platform '" + std::string(name) + "'; available: {illumina, nanopore}");
}

SequencingProfile SequencingProfile::illumina() {
    return {Platform::Illumina, {0.002, 0.0001, 0.0001}, 150, 11};
}

SequencingProfile SequencingProfile::nanopore() {
    return {Platform::Nanopore, {0.03, 0.03, 0.04}, 0, 11};
}

void SequencingProfile::validate() const {
    read_noise.validate();
    if (depth < 1) throw ConfigError("sequencing depth must be >= 1");
    if (platform == Platform::Illumina && read_length < 1) throw ConfigError("illumina read_length must be >= 1");
}

std::size_t illumina_read_count(std::size_t depth, std::size_t reference_length, std::size_t read_length) {
    const std::size_t starts = reference_length + read_length - 1;
    return (depth * starts + read_length - 1) / read_length;
}

ReadSet simulate_sequencing_reads(const MoleculePool& pool, const SequencingProfile& profile, RandomSource& rng) {
    profile.validate();
    if (pool.empty()) throw StageError("cannot sequence an empty molecule pool");

    ReadSet out;
    out.reference_length = pool.nominal_length ? pool.nominal_length : pool.molecules.front().seq.size();
    out.indel_rate = profile.read_noise.ins_prob + profile.read_noise.del_prob;
    const IdsChannel noise(profile.read_noise);

    if (profile.platform == Platform::Nanopore) {
        out.reads.reserve(profile.depth);
        for (std::size_t r = 0; r < profile.depth; ++r) {
            const Molecule& m = pool.molecules[rng.below(pool.size())];
            out.reads.push_back({noise.apply(m.seq, rng), 0, m.id});
        }
        return out;
    }

    const std::size_t len = profile.read_length;
    const std::size_t count = illumina_read_count(profile.depth, out.reference_length, len);
    out.reads.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        const Molecule& m = pool.molecules[rng.below(pool.size())];
        const std::size_t usable = std::min(m.seq.size(), out.reference_length);
        if (len > usable) {
            throw StageError("illumina read_length " + std::to_string(len) + " exceeds molecule length " +
                             std::to_string(usable));
        }
        // start in [-(len-1), usable-1]
        const auto start = static_cast<long>(rng.below(usable + len - 1)) - static_cast<long>(len - 1);
        const std::size_t begin = static_cast<std::size_t>(std::max<long>(start, 0));
        const std::size_t end = std::min<std::size_t>(static_cast<std::size_t>(start + static_cast<long>(len)), usable);
        DnaSequence fragment = DnaSequence::unchecked(m.seq.str().substr(begin, end - begin));
        out.reads.push_back({noise.apply(fragment, rng), begin, m.id});
    }
    return out;
}

namespace {

// Piecewise map from reference coordinates to positions in the tiled sequence.
struct Tiling {
    struct Segment {
        std::size_t ref_begin;
        std::size_t ref_end;
        std::size_t out_begin;
    };
    std::string bases;
    std::vector<Segment> segments;

    std::size_t map(std::size_t ref_pos) const {
        for (const auto& s : segments) {
            if (ref_pos < s.ref_begin) return s.out_begin;
            if (ref_pos < s.ref_end) return s.out_begin + (ref_pos - s.ref_begin);
        }
        return bases.size();
    }
};

Tiling build_tiling(const ReadSet& rs) {
    Tiling t;
    std::vector<std::size_t> order(rs.reads.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rs.reads[a].true_offset < rs.reads[b].true_offset;
    });

    std::size_t cursor = 0;
    std::size_t next = 0;
    std::size_t best = rs.reads.size();
    std::size_t best_end = 0;
    for (;;) {
        while (next < order.size() && rs.reads[order[next]].true_offset <= cursor) {
            const Read& r = rs.reads[order[next]];
            const std::size_t end = r.true_offset + r.bases.size();
            if (best == rs.reads.size() || end > best_end) {
                best = order[next];
                best_end = end;
            }
            ++next;
        }
        if (best != rs.reads.size() && best_end > cursor) {
            const Read& r = rs.reads[best];
            const std::size_t from = cursor - r.true_offset;
            t.segments.push_back({cursor, best_end, t.bases.size()});
            t.bases.append(r.bases.str(), from, std::string::npos);
            cursor = best_end;
        } else if (next < order.size()) {
            cursor = rs.reads[order[next]].true_offset;  // coverage gap
        } else {
            break;
        }
    }
    return t;
}

struct ColumnVotes {
    std::array<std::uint32_t, 5> counts{};  // A C G T gap
};

struct SlotVotes {
    std::uint32_t inserted = 0;
    std::array<std::uint32_t, 4> first_base{};
};

template <std::size_t N>
int argmax_first(const std::array<std::uint32_t, N>& v, std::size_t limit) {
    int best = 0;
    for (std::size_t k = 1; k < limit; ++k) {
        if (v[k] > v[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    }
    return best;
}

}  // namespace

DnaSequence tile_reads(const ReadSet& reads) {
    if (reads.reads.empty()) throw StageError("cannot tile an empty read set");
    return DnaSequence::unchecked(build_tiling(reads).bases);
}

DnaSequence consensus_decode(const ReadSet& rs, const ConsensusOptions& options, ConsensusStats* stats) {
    if (rs.reads.empty()) throw StageError("consensus needs at least one read");

    Tiling tiling = build_tiling(rs);
    std::string cons = std::move(tiling.bases);
    std::vector<std::size_t> anchors(rs.reads.size());
    for (std::size_t r = 0; r < rs.reads.size(); ++r) anchors[r] = tiling.map(rs.reads[r].true_offset);

    BandedAligner aligner;
    std::vector<ColumnVotes> columns;
    std::vector<SlotVotes> slots;
    std::vector<std::int32_t> slot_cover;
    std::vector<std::size_t> begins(rs.reads.size());

    for (std::size_t pass = 0; pass < options.passes; ++pass) {
        const std::size_t n = cons.size();
        columns.assign(n, ColumnVotes{});
        slots.assign(n + 1, SlotVotes{});
        slot_cover.assign(n + 2, 0);

        for (std::size_t r = 0; r < rs.reads.size(); ++r) {
            const auto& read = rs.reads[r].bases.str();
            const double expected_indels = options.band_factor * rs.indel_rate * static_cast<double>(read.size());
            const auto band = std::max(options.min_band, static_cast<std::size_t>(std::ceil(expected_indels)));
            const ReadAlignment aln = aligner.align(read, cons, anchors[r], band);
            begins[r] = aln.ref_begin;
            for (std::size_t c = 0; c < aln.columns.size(); ++c) {
                ++columns[aln.ref_begin + c].counts[static_cast<std::size_t>(aln.columns[c])];
            }
            for (const auto& ins : aln.insertions) {
                ++slots[ins.before_column].inserted;
                ++slots[ins.before_column].first_base[static_cast<std::size_t>(ins.first_base)];
            }
            // Interior slots ref_begin+1 .. ref_end-1 are covered by this read.
            if (aln.ref_end > aln.ref_begin + 1) {
                ++slot_cover[aln.ref_begin + 1];
                --slot_cover[aln.ref_end];
            }
        }

        std::string next;
        next.reserve(n + n / 16 + 4);
        std::vector<std::size_t> remap(n + 1);
        std::size_t changed = 0;
        std::int32_t cover = 0;
        for (std::size_t j = 0; j <= n; ++j) {
            cover += slot_cover[j];
            const SlotVotes& s = slots[j];
            if (s.inserted > 0 && static_cast<std::int32_t>(s.inserted) * 2 > cover) {
                next.push_back(kBases[argmax_first(s.first_base, 4)]);
                ++changed;
            }
            remap[j] = next.size();
            if (j == n) break;
            const auto& v = columns[j].counts;
            const std::uint32_t total = v[0] + v[1] + v[2] + v[3] + v[4];
            if (total == 0) {
                next.push_back(cons[j]);
                continue;
            }
            const int b = argmax_first(v, 4);
            if (v[static_cast<std::size_t>(b)] >= v[4]) {
                next.push_back(kBases[b]);
                if (kBases[b] != cons[j]) ++changed;
            } else {
                ++changed;  // column deleted
            }
        }
        for (std::size_t r = 0; r < rs.reads.size(); ++r) anchors[r] = remap[std::min(begins[r], n)];
        cons = std::move(next);
        if (stats) stats->changed_columns.push_back(changed);
    }
    return DnaSequence::unchecked(std::move(cons));
}

}  // namespace dnasim
