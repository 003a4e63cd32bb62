#include "dnasim/pcr.hpp"

#include <array>
#include <utility>

#include "dnasim/errors.hpp"

namespace dnasim {

namespace {

struct BuiltinPolymerase {
    std::string_view name;
    NoiseProfile noise;  // sub, ins, del
};

// Placeholder fidelities: only the ordering taq > phusion > q5 is meaningful.
constexpr std::array<BuiltinPolymerase, 3> kBuiltins = {{
    {"taq", {1e-4, 1e-5, 1e-5}},
    {"phusion", {5e-6, 5e-7, 5e-7}},
    {"q5", {1e-6, 1e-7, 1e-7}},
}};

constexpr double kMaxCopyRate = 1e-2;

}  // namespace

void PolymeraseProfile::validate() const {
    copy_noise.validate();
    if (copy_noise.sub_prob > kMaxCopyRate || copy_noise.ins_prob > kMaxCopyRate ||
        copy_noise.del_prob > kMaxCopyRate) {
        throw ConfigError("polymerase '" + name + "' copy rates must each be <= 1e-2");
    }
}

MoleculePool MoleculePool::from_sequence(const DnaSequence& seq, std::size_t capacity) {
    MoleculePool pool;
    pool.capacity = capacity;
    pool.nominal_length = seq.size();
    pool.molecules.push_back({seq, 0, 0});
    pool.next_id = 1;
    return pool;
}

MoleculePool simulate_pcr(const MoleculePool& pool, const PcrConfig& cfg, RandomSource& rng) {
    cfg.polymerase.validate();
    if (cfg.capacity == 0) throw ConfigError("pcr capacity must be positive");
    if (cfg.cycles == 0) return pool;
    if (pool.empty()) throw StageError("cannot amplify an empty molecule pool");
    if (cfg.capacity < pool.size()) {
        throw ConfigError("pcr capacity " + std::to_string(cfg.capacity) + " is below the initial pool size " +
                          std::to_string(pool.size()));
    }

    MoleculePool out = pool;
    out.capacity = cfg.capacity;
    const IdsChannel polymerase(cfg.polymerase.copy_noise);

    for (std::size_t c = 0; c < cfg.cycles; ++c) {
        const std::size_t existing = out.molecules.size();
        out.molecules.reserve(existing * 2);
        for (std::size_t i = 0; i < existing; ++i) {
            const Molecule& parent = out.molecules[i];
            Molecule copy{polymerase.apply(parent.seq, rng), parent.copy_depth + 1, out.next_id++};
            out.molecules.push_back(std::move(copy));
        }
        if (out.molecules.size() > cfg.capacity) {
            // Partial Fisher-Yates: the first `capacity` slots become a uniform sample.
            auto& m = out.molecules;
            for (std::size_t i = 0; i < cfg.capacity; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(m.size() - i));
                if (j != i) std::swap(m[i], m[j]);
            }
            m.resize(cfg.capacity);
        }
    }
    return out;
}

PolymeraseProfile builtin_polymerase(std::string_view name) {
    for (const auto& b : kBuiltins) {
        if (b.name == name) return {std::string(b.name), b.noise};
    }
    std::string known;
    for (const auto& b : kBuiltins) {
        if (!known.empty()) known += ", ";
        known += b.name;
    }
    throw ConfigError("unknown polymerase '" + std::string(name) + "'; available: {" + known + "}");
}

std::vector<std::string> builtin_polymerase_names() {
    std::vector<std::string> names;
    for (const auto& b : kBuiltins) names.emplace_back(b.name);
    return names;
}

}  // namespace dnasim
