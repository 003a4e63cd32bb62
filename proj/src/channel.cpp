#include "dnasim/channel.hpp"

#include <string>

#include "dnasim/errors.hpp"

namespace dnasim {

namespace {

void check_probability(const char* name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0,1], got " + std::to_string(p));
    }
}

}  // namespace

void NoiseProfile::validate() const {
    check_probability("sub_prob", sub_prob);
    check_probability("ins_prob", ins_prob);
    check_probability("del_prob", del_prob);
}

IdsChannel::IdsChannel(const NoiseProfile& profile) : profile_(profile) {
    profile_.validate();
    const double pd = profile.del_prob;
    const double ps = profile.sub_prob;
    const double pi = profile.ins_prob;
    const std::array<double, kOutcomes> mass = {
        pd * (1.0 - pi),                // deleted, no insertion
        pd * pi,                        // deleted, insertion after
        (1.0 - pd) * ps * (1.0 - pi),   // substituted
        (1.0 - pd) * ps * pi,           // substituted, insertion after
        (1.0 - pd) * (1.0 - ps) * pi,   // kept, insertion after
    };
    double acc = 0.0;
    for (int k = 0; k < kOutcomes; ++k) {
        acc += mass[k];
        const double scaled = (acc >= 1.0 ? 1.0 : acc) * 0x1.0p64;
        cumulative_[k] = static_cast<Wide>(scaled);
    }
    silent_ = (cumulative_[kOutcomes - 1] == 0);
}

DnaSequence IdsChannel::apply(const DnaSequence& seq, RandomSource& rng, NoiseTrace* trace) const {
    if (trace) {
        *trace = NoiseTrace{};
        trace->input_length = seq.size();
        trace->transcript.reserve(seq.size() + seq.size() / 8);
    }
    if (silent_) {
        if (trace) trace->transcript.assign(seq.size(), EditKind::Match);
        return seq;
    }

    std::string out;
    out.reserve(seq.size() + seq.size() / 8 + 8);
    const Wide any_event = cumulative_[kOutcomes - 1];

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const char base = seq[i];
        const Wide r = rng.next();
        if (r >= any_event) {
            out.push_back(base);
            if (trace) trace->transcript.push_back(EditKind::Match);
            continue;
        }
        int outcome = 0;
        while (r >= cumulative_[outcome]) ++outcome;

        const bool deleted = outcome == kDel || outcome == kDelIns;
        const bool substituted = outcome == kSub || outcome == kSubIns;
        const bool inserted = outcome == kDelIns || outcome == kSubIns || outcome == kIns;

        if (deleted) {
            if (trace) {
                ++trace->deletions;
                trace->transcript.push_back(EditKind::Delete);
            }
        } else if (substituted) {
            // One of the other three bases, uniformly.
            const int original = base_index(base);
            const int shift = 1 + static_cast<int>(rng.below(3));
            out.push_back(kBases[(original + shift) & 3]);
            if (trace) {
                ++trace->substitutions;
                trace->transcript.push_back(EditKind::Substitute);
            }
        } else {
            out.push_back(base);
            if (trace) trace->transcript.push_back(EditKind::Match);
        }
        if (inserted) {
            out.push_back(kBases[rng.below(4)]);
            if (trace) {
                ++trace->insertions;
                trace->transcript.push_back(EditKind::Insert);
            }
        }
    }
    return DnaSequence::unchecked(std::move(out));
}

DnaSequence apply_ids_noise(const DnaSequence& seq, const NoiseProfile& profile, RandomSource& rng,
                            NoiseTrace* trace) {
    return IdsChannel(profile).apply(seq, rng, trace);
}

double expected_length(std::size_t n, const NoiseProfile& profile) noexcept {
    return static_cast<double>(n) * (1.0 - profile.del_prob + profile.ins_prob);
}

}  // namespace dnasim
