#include "dnasim/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "dnasim/bitcodec.hpp"
#include "dnasim/channel.hpp"
#include "dnasim/errors.hpp"
#include "dnasim/pcr.hpp"
#include "dnasim/random.hpp"
#include "dnasim/seqio.hpp"
#include "dnasim/sequencing.hpp"
#include "json.hpp"

namespace dnasim {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum StageSalt : std::uint64_t { kChannelSalt = 1, kPcrSalt = 2, kSequencingSalt = 3, kPickSalt = 4 };

class StageClock {
public:
    explicit StageClock(double& slot) : slot_(slot), start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        slot_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    StageClock(const StageClock&) = delete;
    StageClock& operator=(const StageClock&) = delete;

private:
    double& slot_;
    std::chrono::steady_clock::time_point start_;
};

json number_or_string(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from_json(const json& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        throw IngestError("unexpected string '" + s + "' where a number was expected");
    }
    if (j.is_null()) return NAN;
    return j.get<double>();
}

std::string padded(std::size_t n, int width = 5) {
    std::string s = std::to_string(n);
    if (s.size() < static_cast<std::size_t>(width)) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

std::string profile_comment(const NoiseProfile& p) {
    std::ostringstream o;
    o << "sub=" << p.sub_prob << " ins=" << p.ins_prob << " del=" << p.del_prob;
    return o.str();
}

std::optional<std::size_t> first_indel_input_position(const NoiseTrace& trace) {
    std::size_t consumed = 0;
    for (const EditKind k : trace.transcript) {
        if (k == EditKind::Delete || k == EditKind::Insert) return consumed;
        ++consumed;  // Match and Substitute consume one input base
    }
    return std::nullopt;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The echoed configuration leaves out where and how wide a run executes, so
// identical experiments produce identical reports.
PipelineConfig experiment_view(const PipelineConfig& cfg) {
    PipelineConfig echo = cfg;
    echo.run.output_dir.clear();
    echo.run.workers = 0;
    return echo;
}

json config_json(const PipelineConfig& cfg) {
    json out = json::object();
    for (const auto& e : config_entries(cfg)) out[e.section][e.key] = e.value;
    return out;
}

std::size_t worker_count(const PipelineConfig& cfg, std::size_t jobs) {
    std::size_t n = cfg.run.workers ? cfg.run.workers : std::max(1U, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs fn(i) for i in [0, n) over a bounded set of threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {"ber", "bit_accuracy", "levenshtein", "normalized_levenshtein",
                                                   "psnr_db", "ssim"};
    return names;
}

bool metric_enabled(const PipelineConfig::Metrics& m, const std::string& name) {
    if (name == "ber" || name == "bit_accuracy") return m.ber;
    if (name == "levenshtein" || name == "normalized_levenshtein") return m.levenshtein;
    if (name == "psnr_db") return m.psnr;
    return m.ssim;
}

double metric_value(const MetricReport& r, const std::string& name) {
    if (name == "ber") return r.ber;
    if (name == "bit_accuracy") return r.bit_accuracy;
    if (name == "levenshtein") return static_cast<double>(r.levenshtein);
    if (name == "normalized_levenshtein") return r.normalized_levenshtein;
    if (name == "psnr_db") return r.psnr_db;
    return r.ssim;
}

json row_json(const PayloadResult& r, int label, const PipelineConfig::Metrics& toggles) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["position"] = r.position;
    j["image_index"] = r.image_index;
    j["label"] = label >= 0 ? json(label) : json(nullptr);
    j["seed"] = r.seed;
    j["status"] = r.ok ? "ok" : "failed";
    j["error"] = r.ok ? json(nullptr) : json(r.error);
    j["bits_in"] = r.bits_in;
    j["nt_encoded"] = r.nt_encoded;
    j["nt_noisy"] = r.nt_noisy;
    j["first_indel_bit"] = r.first_indel_bit ? json(*r.first_indel_bit) : json(nullptr);
    j["pool_size"] = r.pool_size;
    j["reads"] = r.reads;
    j["nt_recovered"] = r.nt_recovered;
    j["bits_out"] = r.bits_out;
    for (const auto& name : metric_names()) {
        if (!r.ok || !metric_enabled(toggles, name)) {
            j[name] = nullptr;
        } else if (name == "levenshtein") {
            j[name] = r.metrics.levenshtein;
        } else {
            j[name] = number_or_string(metric_value(r.metrics, name));
        }
    }
    return j;
}

json aggregate_json(const Aggregate& a) {
    json j;
    j["metric"] = a.metric;
    j["count"] = a.count;
    j["mean"] = number_or_string(a.mean);
    j["median"] = number_or_string(a.median);
    j["p95"] = number_or_string(a.p95);
    return j;
}

std::vector<Aggregate> aggregates_from_rows(const std::vector<json>& rows) {
    std::vector<Aggregate> out;
    for (const auto& name : metric_names()) {
        std::vector<double> values;
        for (const auto& row : rows) {
            if (row.contains(name) && !row[name].is_null()) values.push_back(number_from_json(row[name]));
        }
        out.push_back(aggregate(name, std::move(values)));
    }
    return out;
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_payload_artifacts(const fs::path& dir, const PipelineConfig& cfg, std::size_t image_index,
                             const GrayImage& original, const PayloadSimulation& sim) {
    const std::string tag = padded(image_index);
    if (cfg.artifacts.fasta) {
        std::vector<FastaRecord> recs;
        recs.push_back({"encoded_" + tag, std::string("codec=") + std::string(codec_name(cfg.codec.scheme)),
                        sim.encoded});
        recs.push_back({"noisy_" + tag,
                        cfg.channel.enabled ? profile_comment(cfg.channel.noise) : std::string("channel=disabled"),
                        sim.noisy});
        recs.push_back({"recovered_" + tag, "", sim.recovered});
        write_fasta(dir / "fasta" / ("payload_" + tag + ".fa"), recs);
    }
    if (cfg.artifacts.reads && sim.reads) {
        write_reads_fastq(dir / "reads" / ("payload_" + tag + ".fq"), *sim.reads, "read_" + tag);
    }
    if (cfg.artifacts.pool && sim.pool) {
        std::vector<FastaRecord> recs;
        recs.reserve(sim.pool->size());
        for (const auto& m : sim.pool->molecules) {
            recs.push_back({"molecule_" + std::to_string(m.id), "copy_depth=" + std::to_string(m.copy_depth), m.seq});
        }
        write_fasta(dir / "pool" / ("payload_" + tag + ".fa"), recs);
    }
    if (cfg.artifacts.images) {
        write_pgm(dir / "images" / ("orig_" + tag + ".pgm"), original);
        write_pgm(dir / "images" / ("recon_" + tag + ".pgm"), sim.reconstructed);
    }
}

json timings_json(const StageTimings& t) {
    json j;
    j["encode"] = t.encode;
    j["channel"] = t.channel;
    j["pcr"] = t.pcr;
    j["sequencing"] = t.sequencing;
    j["consensus"] = t.consensus;
    j["decode"] = t.decode;
    j["metrics"] = t.metrics;
    return j;
}

}  // namespace

StageTimings& StageTimings::operator+=(const StageTimings& o) {
    encode += o.encode;
    channel += o.channel;
    pcr += o.pcr;
    sequencing += o.sequencing;
    consensus += o.consensus;
    decode += o.decode;
    metrics += o.metrics;
    return *this;
}

std::uint64_t payload_seed(std::uint64_t run_seed, std::size_t payload_index) noexcept {
    return derive_seed(run_seed, payload_index);
}

PayloadSimulation simulate_payload(const PipelineConfig& cfg, const GrayImage& image, std::uint64_t seed,
                                   bool keep_pool) {
    PayloadSimulation sim;
    {
        StageClock clock(sim.timings.encode);
        sim.bits = image_to_bits(image);
        sim.encoded = cfg.codec.scheme == CodecScheme::Plain ? bits_to_dna(sim.bits)
                                                              : encode_constrained(sim.bits, cfg.codec.constrained);
    }

    sim.noisy = sim.encoded;
    if (cfg.channel.enabled) {
        StageClock clock(sim.timings.channel);
        RandomSource rng(derive_seed(seed, kChannelSalt));
        NoiseTrace trace;
        sim.noisy = apply_ids_noise(sim.encoded, cfg.channel.noise, rng, &trace);
        sim.first_indel_base = first_indel_input_position(trace);
    }

    MoleculePool pool = MoleculePool::from_sequence(sim.noisy, cfg.pcr.capacity);
    if (cfg.pcr.enabled) {
        StageClock clock(sim.timings.pcr);
        RandomSource rng(derive_seed(seed, kPcrSalt));
        pool = simulate_pcr(pool, cfg.pcr_config(), rng);
    }
    sim.pool_size = pool.size();

    if (cfg.sequencing.enabled) {
        {
            StageClock clock(sim.timings.sequencing);
            RandomSource rng(derive_seed(seed, kSequencingSalt));
            sim.reads = simulate_sequencing_reads(pool, cfg.sequencing_profile(), rng);
        }
        StageClock clock(sim.timings.consensus);
        if (cfg.sequencing.consensus) {
            ConsensusOptions opt;
            opt.passes = cfg.sequencing.consensus_passes;
            sim.recovered = consensus_decode(*sim.reads, opt);
        } else {
            sim.recovered = tile_reads(*sim.reads);
        }
    } else if (cfg.pcr.enabled) {
        // Without sequencing the decoder sees one molecule drawn from the pool.
        RandomSource rng(derive_seed(seed, kPickSalt));
        sim.recovered = pool.molecules[rng.below(pool.size())].seq;
    } else {
        sim.recovered = sim.noisy;
    }

    {
        StageClock clock(sim.timings.decode);
        sim.decoded = cfg.codec.scheme == CodecScheme::Plain ? dna_to_bits(sim.recovered)
                                                              : decode_constrained(sim.recovered, cfg.codec.constrained);
        sim.reconstructed = bits_to_image(sim.decoded);
    }
    if (keep_pool) sim.pool = std::move(pool);
    return sim;
}

Aggregate aggregate(std::string metric, std::vector<double> values) {
    Aggregate a;
    a.metric = std::move(metric);
    a.count = values.size();
    if (values.empty()) {
        a.mean = a.median = a.p95 = NAN;
        return a;
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (const double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
        return values[lo] + (values[hi] - values[lo]) * frac;
    };
    a.median = quantile(0.5);
    a.p95 = quantile(0.95);
    return a;
}

LoadedImages load_payload_images(const PipelineConfig& cfg) {
    LoadedImages out;
    out.indices = parse_index_list(cfg.dataset.indices);
    if (cfg.dataset.source == DatasetSource::Synthetic) {
        out.images.reserve(out.indices.size());
        for (const std::size_t idx : out.indices) out.images.push_back(synthetic_digit(idx, cfg.dataset.synthetic_seed));
        out.labels.assign(out.indices.size(), -1);
        return out;
    }
    out.images = load_mnist(cfg.dataset.images, out.indices);
    if (cfg.dataset.labels.empty()) {
        out.labels.assign(out.indices.size(), -1);
    } else {
        for (const auto l : load_mnist_labels(cfg.dataset.labels, out.indices)) out.labels.push_back(l);
    }
    return out;
}

fs::path resolve_output_dir(const PipelineConfig& cfg) {
    if (!cfg.run.output_dir.empty()) return cfg.run.output_dir;
    if (const char* env = std::getenv("DNASIM_OUTPUT_DIR"); env && *env) return env;
    return "dnasim_out";
}

RunReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const LoadedImages data = load_payload_images(cfg);

    RunReport report;
    report.config = cfg;
    report.output_dir = resolve_output_dir(cfg);
    const fs::path& dir = report.output_dir;
    fs::create_directories(dir);
    if (cfg.artifacts.fasta) fs::create_directories(dir / "fasta");
    if (cfg.artifacts.reads && cfg.sequencing.enabled) fs::create_directories(dir / "reads");
    if (cfg.artifacts.pool) fs::create_directories(dir / "pool");
    if (cfg.artifacts.images) fs::create_directories(dir / "images");

    const std::size_t n = data.images.size();
    report.rows.resize(n);
    parallel_for(n, worker_count(cfg, n), [&](std::size_t i) {
        PayloadResult& row = report.rows[i];
        row.position = i;
        row.image_index = data.indices[i];
        row.seed = payload_seed(cfg.run.seed, row.image_index);
        try {
            const PayloadSimulation sim = simulate_payload(cfg, data.images[i], row.seed, cfg.artifacts.pool);
            row.timings = sim.timings;
            row.bits_in = sim.bits.size();
            row.nt_encoded = sim.encoded.size();
            row.nt_noisy = sim.noisy.size();
            if (sim.first_indel_base && cfg.codec.scheme == CodecScheme::Plain) {
                row.first_indel_bit = 2 * *sim.first_indel_base;
            }
            row.pool_size = sim.pool_size;
            row.reads = sim.reads ? sim.reads->reads.size() : 0;
            row.nt_recovered = sim.recovered.size();
            row.bits_out = sim.decoded.size();
            {
                StageClock clock(row.timings.metrics);
                const BitStream frame = normalize_frame(sim.decoded, sim.bits.size());
                if (cfg.metrics.ber) {
                    row.metrics.ber = bit_error_rate(sim.bits, sim.decoded);
                    row.metrics.bit_accuracy = 1.0 - row.metrics.ber;
                }
                if (cfg.metrics.levenshtein) {
                    row.metrics.levenshtein = levenshtein(sim.encoded, sim.recovered);
                    row.metrics.normalized_levenshtein = normalized_levenshtein(sim.encoded, sim.recovered);
                }
                if (cfg.metrics.psnr) row.metrics.psnr_db = psnr(data.images[i], sim.reconstructed);
                if (cfg.metrics.ssim) row.metrics.ssim = ssim(data.images[i], sim.reconstructed);
                row.positional_errors.assign((sim.bits.size() + kPositionBin - 1) / kPositionBin, 0);
                for (std::size_t b = 0; b < sim.bits.size(); ++b) {
                    if (sim.bits[b] != frame[b]) ++row.positional_errors[b / kPositionBin];
                }
            }
            write_payload_artifacts(dir, cfg, row.image_index, data.images[i], sim);
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
    });

    // Single serialization point: everything below runs on this thread in payload order.
    std::vector<json> rows;
    rows.reserve(n);
    std::string jsonl;
    for (const auto& r : report.rows) {
        if (!r.ok) ++report.failed;
        report.timings += r.timings;
        rows.push_back(row_json(r, data.labels[&r - report.rows.data()], cfg.metrics));
        jsonl += rows.back().dump();
        jsonl += '\n';
    }
    write_text(dir / "report.jsonl", jsonl);

    report.aggregates = aggregates_from_rows(rows);
    report.simplifications = {
        "idealized_read_placement: reads carry ground-truth offsets; no de-novo assembly",
        "frame_policy: decoded bits are tail-truncated or zero-padded to the source frame length",
        "inserted_bases_final: inserted bases are never revisited by later channel events",
        "pcr_lineage_model: every molecule is copied once per cycle; pool subsampled uniformly above capacity",
        "classification_accuracy: requires a trained classifier and is not computed here",
    };

    const PipelineConfig echo = experiment_view(cfg);
    const std::string echo_text = render_config(echo);
    json rj;
    rj["schema_version"] = kReportSchemaVersion;
    rj["generator"] = "dnasim";
    rj["rng"] = RandomSource::kAlgorithm;
    rj["seed"] = cfg.run.seed;
    rj["config_hash"] = fnv1a_hex(echo_text);
    rj["config"] = config_json(echo);
    rj["payloads"] = n;
    rj["failed"] = report.failed;
    rj["frame_bits"] = FrameConfig{}.max_seq_len;
    const SsimParams sp;
    rj["ssim_params"] = {{"window", sp.window}, {"sigma", sp.sigma}, {"k1", sp.k1}, {"k2", sp.k2},
                         {"dynamic_range", sp.dynamic_range}, {"gaussian", true}, {"valid_windows_only", true}};
    rj["simplifications"] = report.simplifications;
    json aggs = json::array();
    for (const auto& a : report.aggregates) aggs.push_back(aggregate_json(a));
    rj["aggregates"] = aggs;
    rj["bit_accuracy_note"] = "bit_accuracy = 1 - ber over the source frame";
    rj["classification_accuracy"] = nullptr;
    write_text(dir / "report.json", rj.dump(2) + "\n");

    std::string summary = "metric,count,mean,median,p95\n";
    for (const auto& a : report.aggregates) {
        summary += a.metric + ',' + std::to_string(a.count) + ',' + csv_number(a.mean) + ',' + csv_number(a.median) +
                   ',' + csv_number(a.p95) + '\n';
    }
    write_text(dir / "summary.csv", summary);

    std::vector<std::uint64_t> bins;
    std::size_t contributing = 0;
    std::size_t frame_bits = 0;
    for (const auto& r : report.rows) {
        if (!r.ok) continue;
        ++contributing;
        frame_bits = std::max(frame_bits, r.bits_in);
        if (bins.size() < r.positional_errors.size()) bins.resize(r.positional_errors.size(), 0);
        for (std::size_t b = 0; b < r.positional_errors.size(); ++b) bins[b] += r.positional_errors[b];
    }
    std::string hist = "bin,bit_begin,bit_end,errors,payloads,error_rate\n";
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const std::size_t begin = b * kPositionBin;
        const std::size_t end = std::min(begin + kPositionBin, frame_bits);
        const double rate = contributing ? static_cast<double>(bins[b]) /
                                               (static_cast<double>(contributing) * static_cast<double>(end - begin))
                                         : NAN;
        hist += std::to_string(b) + ',' + std::to_string(begin) + ',' + std::to_string(end) + ',' +
                std::to_string(bins[b]) + ',' + std::to_string(contributing) + ',' + csv_number(rate) + '\n';
    }
    write_text(dir / "ber_by_position.csv", hist);

    write_text(dir / "config.ini", echo_text);

    json tj;
    tj["note"] = "wall-clock seconds summed over payloads; not part of the reproducible report";
    tj["workers"] = worker_count(cfg, n);
    tj["stages"] = timings_json(report.timings);
    write_text(dir / "timings.json", tj.dump(2) + "\n");
    return report;
}

ExportSummary export_training_pairs(const PipelineConfig& cfg) {
    cfg.validate();
    if (cfg.export_.token_length == 0) throw ConfigError("export.token_length must be >= 1");
    const LoadedImages data = load_payload_images(cfg);
    const fs::path dir = resolve_output_dir(cfg) / "pairs";
    fs::create_directories(dir);

    const std::size_t n = data.images.size();
    std::vector<std::string> lines(n);
    parallel_for(n, worker_count(cfg, n), [&](std::size_t i) {
        const std::uint64_t seed = payload_seed(cfg.run.seed, data.indices[i]);
        std::string tokens;
        std::string target;
        try {
            const PayloadSimulation sim = simulate_payload(cfg, data.images[i], seed);
            tokens = sim.recovered.str().substr(0, cfg.export_.token_length);
            target = sim.bits.to_string();
        } catch (const Error& e) {
            throw StageError("payload " + std::to_string(data.indices[i]) + ": " + e.what());
        }
        tokens.resize(cfg.export_.token_length, 'N');
        lines[i] = std::to_string(i) + '\t' + std::to_string(data.indices[i]) + '\t' +
                   (data.labels[i] >= 0 ? std::to_string(data.labels[i]) : std::string("-")) + '\t' + tokens + '\t' +
                   target + '\n';
    });

    std::string body = "index\timage_index\tlabel\ttokens\ttarget\n";
    for (const auto& l : lines) body += l;
    ExportSummary out;
    out.pairs_file = dir / "pairs.tsv";
    out.manifest_file = dir / "manifest.json";
    out.records = n;
    write_text(out.pairs_file, body);

    const auto validation = static_cast<std::size_t>(std::llround(cfg.export_.validation_fraction * static_cast<double>(n)));
    const std::size_t train = n - validation;
    const std::string echo_text = render_config(experiment_view(cfg));
    json m;
    m["schema_version"] = kReportSchemaVersion;
    m["generator"] = "dnasim";
    m["rng"] = RandomSource::kAlgorithm;
    m["seed"] = cfg.run.seed;
    m["config_hash"] = fnv1a_hex(echo_text);
    m["config"] = config_json(experiment_view(cfg));
    m["records"] = n;
    m["token_length"] = cfg.export_.token_length;
    m["target_bits"] = FrameConfig{}.max_seq_len;
    m["vocabulary"] = {"A", "C", "G", "T", "N"};
    m["pad_token"] = "N";
    m["columns"] = {"index", "image_index", "label", "tokens", "target"};
    m["split"] = {{"policy", "by index"},
                  {"validation_fraction", cfg.export_.validation_fraction},
                  {"train", {{"begin", 0}, {"end", train}}},
                  {"validation", {{"begin", train}, {"end", n}}}};
    m["files"] = {{"pairs.tsv", {{"fnv1a64", fnv1a_hex(body)}, {"bytes", body.size()}}}};
    write_text(out.manifest_file, m.dump(2) + "\n");
    return out;
}

ReportCheck verify_run_directory(const fs::path& dir) {
    ReportCheck check;
    std::vector<json> rows;
    {
        std::istringstream in(read_text(dir / "report.jsonl"));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                rows.push_back(json::parse(line));
            } catch (const json::exception& e) {
                throw IngestError("report.jsonl line " + std::to_string(line_no) + ": " + e.what());
            }
            if (rows.back().value("schema_version", -1) != kReportSchemaVersion) {
                check.mismatches.push_back("line " + std::to_string(line_no) + ": unsupported schema_version");
            }
        }
    }
    check.rows = rows.size();

    json report;
    try {
        report = json::parse(read_text(dir / "report.json"));
    } catch (const json::exception& e) {
        throw IngestError(std::string("report.json: ") + e.what());
    }
    if (report.value("payloads", std::size_t{0}) != rows.size()) {
        check.mismatches.push_back("payload count " + std::to_string(report.value("payloads", std::size_t{0})) +
                                   " != " + std::to_string(rows.size()) + " rows");
    }
    const auto recomputed = aggregates_from_rows(rows);
    const json& stored = report["aggregates"];
    if (!stored.is_array() || stored.size() != recomputed.size()) {
        check.mismatches.push_back("aggregate table has the wrong shape");
        return check;
    }
    auto same = [](double a, double b) {
        if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b));
    };
    for (std::size_t k = 0; k < recomputed.size(); ++k) {
        const Aggregate& a = recomputed[k];
        const json& s = stored[k];
        if (s.value("metric", std::string()) != a.metric || s.value("count", std::size_t{0}) != a.count) {
            check.mismatches.push_back(a.metric + ": metric name or count differs");
            continue;
        }
        const std::pair<const char*, double> stats[] = {{"mean", a.mean}, {"median", a.median}, {"p95", a.p95}};
        for (const auto& [key, value] : stats) {
            if (!same(number_from_json(s[key]), value)) {
                check.mismatches.push_back(a.metric + "." + key + " differs from recomputation");
            }
        }
    }
    return check;
}

}  // namespace dnasim
