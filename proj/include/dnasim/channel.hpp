#pragma once
// Insertion/deletion/substitution noise channel.

#include <array>
#include <cstdint>
#include <vector>

#include "dnasim/random.hpp"
#include "dnasim/sequence.hpp"

namespace dnasim {

// Per-base event probabilities. Field order (sub, ins, del) matches the config file.
struct NoiseProfile {
    double sub_prob = 0.05;
    double ins_prob = 0.02;
    double del_prob = 0.02;

    static constexpr NoiseProfile none() noexcept { return {0.0, 0.0, 0.0}; }
    bool is_zero() const noexcept { return sub_prob == 0.0 && ins_prob == 0.0 && del_prob == 0.0; }
    void validate() const;  // ConfigError unless every probability is in [0,1]

    friend bool operator==(const NoiseProfile&, const NoiseProfile&) = default;
};

enum class EditKind : std::uint8_t { Match, Substitute, Delete, Insert };

// Ground-truth record of what the channel did, in output order.
struct NoiseTrace {
    std::size_t substitutions = 0;
    std::size_t insertions = 0;
    std::size_t deletions = 0;
    std::size_t input_length = 0;
    std::vector<EditKind> transcript;  // Delete consumes input only, Insert emits output only
};

// Precomputed sampler for one profile. Each input base costs a single draw
// unless an event fires: the draw is compared against cumulative thresholds
// for the five outcomes {del, del+ins, sub, sub+ins, ins}. Each gate fires
// with exactly its configured probability: del and ins per input base, sub
// per base that survived deletion (so per input base it is (1 - del) * sub).
class IdsChannel {
public:
    explicit IdsChannel(const NoiseProfile& profile);

    DnaSequence apply(const DnaSequence& seq, RandomSource& rng, NoiseTrace* trace = nullptr) const;
    const NoiseProfile& profile() const noexcept { return profile_; }

private:
    __extension__ typedef unsigned __int128 Wide;
    enum Outcome : int { kDel, kDelIns, kSub, kSubIns, kIns, kOutcomes };

    NoiseProfile profile_;
    std::array<Wide, kOutcomes> cumulative_{};  // scaled by 2^64
    bool silent_ = true;
};

// Deletion pre-empts substitution for that base; insertion is an independent
// gate that fires even for deleted bases and appends one uniform random base.
DnaSequence apply_ids_noise(const DnaSequence& seq, const NoiseProfile& profile, RandomSource& rng,
                            NoiseTrace* trace = nullptr);

double expected_length(std::size_t n, const NoiseProfile& profile) noexcept;

}  // namespace dnasim
