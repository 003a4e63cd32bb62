#pragma once
// Pipeline configuration: a sectioned key = value file with CLI overrides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnasim/bitcodec.hpp"
#include "dnasim/channel.hpp"
#include "dnasim/pcr.hpp"
#include "dnasim/sequencing.hpp"

namespace dnasim {

enum class CodecScheme { Plain, Constrained };
enum class DatasetSource { Idx, Synthetic };

// Optional per-field rate overrides on top of a named builtin profile.
struct RateOverrides {
    std::optional<double> sub_prob;
    std::optional<double> ins_prob;
    std::optional<double> del_prob;

    NoiseProfile apply(NoiseProfile base) const;
    friend bool operator==(const RateOverrides&, const RateOverrides&) = default;
};

struct PipelineConfig {
    struct Run {
        std::uint64_t seed = 20240613;
        std::string output_dir;  // empty: $DNASIM_OUTPUT_DIR, then ./dnasim_out
        std::size_t workers = 0;  // 0: hardware concurrency
        friend bool operator==(const Run&, const Run&) = default;
    } run;

    struct Dataset {
        DatasetSource source = DatasetSource::Idx;
        std::string images = "data/train-images-idx3-ubyte";
        std::string labels;  // optional IDX1 label file
        std::string indices = "0-1499";
        std::uint64_t synthetic_seed = 7;
        friend bool operator==(const Dataset&, const Dataset&) = default;
    } dataset;

    struct Codec {
        CodecScheme scheme = CodecScheme::Plain;
        ConstrainedCodecConfig constrained;
        friend bool operator==(const Codec&, const Codec&) = default;
    } codec;

    struct Channel {
        bool enabled = true;
        NoiseProfile noise;  // defaults 0.05 / 0.02 / 0.02
        friend bool operator==(const Channel&, const Channel&) = default;
    } channel;

    struct Pcr {
        bool enabled = true;
        std::string polymerase = "q5";
        std::size_t cycles = 12;
        std::size_t capacity = 4096;
        RateOverrides overrides;
        friend bool operator==(const Pcr&, const Pcr&) = default;
    } pcr;

    struct Sequencing {
        bool enabled = true;
        Platform platform = Platform::Nanopore;
        std::size_t depth = 11;
        std::size_t read_length = 150;
        RateOverrides overrides;
        bool consensus = true;
        std::size_t consensus_passes = 2;
        friend bool operator==(const Sequencing&, const Sequencing&) = default;
    } sequencing;

    struct Metrics {
        bool ber = true;
        bool levenshtein = true;
        bool psnr = true;
        bool ssim = true;
        friend bool operator==(const Metrics&, const Metrics&) = default;
    } metrics;

    struct Artifacts {
        bool fasta = true;
        bool reads = true;
        bool pool = false;
        bool images = true;
        friend bool operator==(const Artifacts&, const Artifacts&) = default;
    } artifacts;

    struct Export {
        std::size_t token_length = 3136;
        double validation_fraction = 0.2;
        friend bool operator==(const Export&, const Export&) = default;
    } export_;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;

    // Resolved stage parameters.
    PolymeraseProfile polymerase_profile() const;
    PcrConfig pcr_config() const;
    SequencingProfile sequencing_profile() const;

    void validate() const;  // ConfigError on the first violated invariant
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string render_config(const PipelineConfig& cfg);

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
};
// Every field in render order.
std::vector<ConfigEntry> config_entries(const PipelineConfig& cfg);

// Applies one `section.key=value` override.
void apply_override(PipelineConfig& cfg, std::string_view assignment);

// "0-9,12,20-22" -> explicit index list (ranges inclusive).
std::vector<std::size_t> parse_index_list(std::string_view list);

// 64-bit FNV-1a digest, hex encoded.
std::string fnv1a_hex(std::string_view data);

std::string_view codec_name(CodecScheme s) noexcept;

}  // namespace dnasim
