#pragma once
// PCR amplification with polymerase-dependent copy errors that compound over cycles.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dnasim/channel.hpp"
#include "dnasim/random.hpp"
#include "dnasim/sequence.hpp"

namespace dnasim {

struct PolymeraseProfile {
    std::string name;
    NoiseProfile copy_noise;  // per base, per copy event

    void validate() const;  // every rate must be <= 1e-2

    friend bool operator==(const PolymeraseProfile&, const PolymeraseProfile&) = default;
};

struct Molecule {
    DnaSequence seq;
    std::uint32_t copy_depth = 0;  // error-prone copy events along this molecule's lineage
    std::uint64_t id = 0;
};

struct MoleculePool {
    std::vector<Molecule> molecules;
    std::size_t capacity = 4096;
    std::size_t nominal_length = 0;  // designed payload length, used as the read reference length
    std::uint64_t next_id = 0;

    static MoleculePool from_sequence(const DnaSequence& seq, std::size_t capacity = 4096);
    std::size_t size() const noexcept { return molecules.size(); }
    bool empty() const noexcept { return molecules.empty(); }
};

struct PcrConfig {
    std::size_t cycles = 12;
    PolymeraseProfile polymerase{"q5", {1e-6, 1e-7, 1e-7}};
    std::size_t capacity = 4096;
};

// Each cycle copies every molecule once through the polymerase noise; both
// strands persist. Pools above capacity are subsampled uniformly without
// replacement at cycle end.
MoleculePool simulate_pcr(const MoleculePool& pool, const PcrConfig& cfg, RandomSource& rng);

// Shipped defaults for taq, phusion and q5. Unknown names throw ConfigError.
PolymeraseProfile builtin_polymerase(std::string_view name);
std::vector<std::string> builtin_polymerase_names();

}  // namespace dnasim
