#pragma once
// End-to-end orchestration: dataset -> encode -> channel -> PCR -> sequencing
// -> consensus -> decode -> metrics, plus report and interchange writers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dnasim/config.hpp"
#include "dnasim/dataset.hpp"
#include "dnasim/metrics.hpp"

namespace dnasim {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::size_t kPositionBin = 64;  // bits per positional-error histogram bin

struct StageTimings {
    double encode = 0, channel = 0, pcr = 0, sequencing = 0, consensus = 0, decode = 0, metrics = 0;
    StageTimings& operator+=(const StageTimings& o);
};

// Every intermediate of one payload's trip through the enabled stages.
struct PayloadSimulation {
    BitStream bits;
    DnaSequence encoded;
    DnaSequence noisy;  // after the storage channel
    std::optional<std::size_t> first_indel_base;
    std::size_t pool_size = 0;
    std::optional<MoleculePool> pool;  // kept only when requested
    std::optional<ReadSet> reads;
    DnaSequence recovered;  // sequence handed to the decoder
    BitStream decoded;
    GrayImage reconstructed;
    StageTimings timings;
};

// Stage seeds are derived from payload_seed, so toggling one stage leaves the
// randomness of the others unchanged.
PayloadSimulation simulate_payload(const PipelineConfig& cfg, const GrayImage& image, std::uint64_t payload_seed,
                                   bool keep_pool = false);

std::uint64_t payload_seed(std::uint64_t run_seed, std::size_t payload_index) noexcept;

struct PayloadResult {
    std::size_t position = 0;     // order within the run
    std::size_t image_index = 0;  // index into the dataset
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::size_t bits_in = 0, nt_encoded = 0, nt_noisy = 0, pool_size = 0, reads = 0, nt_recovered = 0, bits_out = 0;
    std::optional<std::size_t> first_indel_bit;
    MetricReport metrics;
    std::vector<std::uint32_t> positional_errors;  // per kPositionBin bits
    StageTimings timings;
};

struct Aggregate {
    std::string metric;
    std::size_t count = 0;
    double mean = 0, median = 0, p95 = 0;
};

// Mean / median / linearly interpolated 95th percentile.
Aggregate aggregate(std::string metric, std::vector<double> values);

struct RunReport {
    PipelineConfig config;
    std::filesystem::path output_dir;
    std::vector<PayloadResult> rows;
    std::vector<Aggregate> aggregates;
    std::vector<std::string> simplifications;
    StageTimings timings;
    std::size_t failed = 0;
};

struct LoadedImages {
    std::vector<std::size_t> indices;
    std::vector<GrayImage> images;
    std::vector<int> labels;  // -1 when no label file is configured
};
LoadedImages load_payload_images(const PipelineConfig& cfg);

std::filesystem::path resolve_output_dir(const PipelineConfig& cfg);

// Writes report.json, report.jsonl, summary.csv, ber_by_position.csv,
// config.ini, timings.json and the per-payload artifacts.
RunReport run_pipeline(const PipelineConfig& cfg);

struct ExportSummary {
    std::filesystem::path pairs_file;
    std::filesystem::path manifest_file;
    std::size_t records = 0;
};

// (noisy tokens padded with N to export.token_length, clean target bits) per image.
ExportSummary export_training_pairs(const PipelineConfig& cfg);

// Recomputes aggregates from report.jsonl and compares them with report.json.
struct ReportCheck {
    std::size_t rows = 0;
    std::vector<std::string> mismatches;
    bool ok() const noexcept { return mismatches.empty(); }
};
ReportCheck verify_run_directory(const std::filesystem::path& dir);

}  // namespace dnasim
