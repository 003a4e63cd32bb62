#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dnasim/bitcodec.hpp"
#include "dnasim/errors.hpp"
#include "dnasim/pipeline.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace dnasim;
using json = nlohmann::json;

namespace {

PipelineConfig synthetic_config(const std::filesystem::path& out, const std::string& indices) {
    PipelineConfig cfg;
    cfg.run.output_dir = out.string();
    cfg.dataset.source = DatasetSource::Synthetic;
    cfg.dataset.indices = indices;
    return cfg;
}

PipelineConfig noiseless(PipelineConfig cfg) {
    cfg.channel.enabled = false;
    cfg.pcr.enabled = false;
    cfg.sequencing.enabled = false;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<json> jsonl(const std::filesystem::path& p) {
    std::vector<json> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) rows.push_back(json::parse(line));
    return rows;
}

std::vector<std::vector<std::string>> tsv(const std::filesystem::path& p) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cols;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
        out.push_back(cols);
    }
    return out;
}

}  // namespace

TEST_SUITE("pipeline") {
    TEST_CASE("aggregate statistics") {
        const Aggregate a = aggregate("x", {4, 1, 3, 2});
        CHECK(a.count == 4);
        CHECK(a.mean == 2.5);
        CHECK(a.median == 2.5);
        CHECK(a.p95 == doctest::Approx(3.85));  // 1 + 0.95 * 3 = rank 2.85
        const Aggregate one = aggregate("y", {7});
        CHECK(one.median == 7);
        CHECK(one.p95 == 7);
        CHECK(aggregate("z", {}).count == 0);
    }

    TEST_CASE("payload seeds are distinct and stable") {
        CHECK(payload_seed(1, 0) == payload_seed(1, 0));
        CHECK(payload_seed(1, 0) != payload_seed(1, 1));
        CHECK(payload_seed(1, 0) != payload_seed(2, 0));
    }

    TEST_CASE("noiseless pipeline is lossless") {
        testing::TempDir dir("noiseless");
        const auto cfg = noiseless(synthetic_config(dir.path(), "0-9"));
        const RunReport r = run_pipeline(cfg);
        REQUIRE(r.rows.size() == 10);
        CHECK(r.failed == 0);
        for (const auto& row : r.rows) {
            CHECK(row.ok);
            CHECK(row.metrics.ber == 0.0);
            CHECK(row.metrics.levenshtein == 0);
            CHECK(row.metrics.ssim == doctest::Approx(1.0));
            CHECK(std::isinf(row.metrics.psnr_db));
            CHECK(row.bits_in == 6272);
            CHECK(row.nt_encoded == 3136);
        }
        const auto rows = jsonl(dir / "report.jsonl");
        REQUIRE(rows.size() == 10);
        CHECK(rows[0]["psnr_db"] == "inf");
        CHECK(rows[0]["status"] == "ok");
        CHECK(rows[0]["ber"] == 0.0);
        const json report = json::parse(slurp(dir / "report.json"));
        CHECK(report["payloads"] == 10);
        CHECK(report["rng"] == "xoshiro256**");
        CHECK(report["classification_accuracy"].is_null());
        CHECK(verify_run_directory(dir.path()).ok());
        for (const char* f : {"summary.csv", "ber_by_position.csv", "config.ini", "timings.json",
                              "fasta/payload_00000.fa", "images/orig_00000.pgm", "images/recon_00009.pgm"}) {
            CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
        }
        CHECK(read_pgm(dir / "images/recon_00003.pgm") == read_pgm(dir / "images/orig_00003.pgm"));
        // Echoed config reproduces the experiment.
        const PipelineConfig echo = load_config(dir / "config.ini");
        CHECK(echo.dataset.indices == "0-9");
        CHECK(echo.run.output_dir.empty());
    }

    TEST_CASE("constrained codec is lossless without noise") {
        testing::TempDir dir("constrained");
        auto cfg = noiseless(synthetic_config(dir.path(), "0-2"));
        cfg.codec.scheme = CodecScheme::Constrained;
        const RunReport r = run_pipeline(cfg);
        for (const auto& row : r.rows) {
            CHECK(row.ok);
            CHECK(row.metrics.ber == 0.0);
            CHECK(row.nt_encoded >= 3136);
        }
    }

    TEST_CASE("channel-only errors start at the first indel") {
        testing::TempDir dir("chan");
        auto cfg = synthetic_config(dir.path(), "0-19");
        cfg.pcr.enabled = false;
        cfg.sequencing.enabled = false;
        cfg.channel.noise = {0.0, 0.0, 0.002};
        cfg.artifacts = {false, false, false, false};
        const RunReport r = run_pipeline(cfg);
        std::size_t checked = 0;
        for (const auto& row : r.rows) {
            REQUIRE(row.ok);
            if (!row.first_indel_bit) {
                CHECK(row.metrics.ber == 0.0);
                continue;
            }
            // Deletions only: every bin that ends before the first indel is clean.
            const std::size_t clean_bins = *row.first_indel_bit / kPositionBin;
            for (std::size_t b = 0; b < clean_bins; ++b) CHECK(row.positional_errors[b] == 0);
            ++checked;
        }
        CHECK(checked > 10);
        const auto csv = slurp(dir / "ber_by_position.csv");
        CHECK(csv.rfind("bin,bit_begin,bit_end,errors,payloads,error_rate\n", 0) == 0);
    }

    TEST_CASE("stage failures are recorded per payload") {
        testing::TempDir dir("fail");
        auto cfg = synthetic_config(dir.path(), "0-3");
        cfg.pcr.enabled = false;
        cfg.sequencing.platform = Platform::Illumina;
        cfg.sequencing.read_length = 100000;  // longer than any molecule
        cfg.artifacts = {false, false, false, false};
        const RunReport r = run_pipeline(cfg);
        CHECK(r.failed == 4);
        const auto rows = jsonl(dir / "report.jsonl");
        REQUIRE(rows.size() == 4);
        CHECK(rows[1]["status"] == "failed");
        CHECK_FALSE(rows[1]["error"].get<std::string>().empty());
        CHECK(rows[1]["ber"].is_null());
        CHECK(json::parse(slurp(dir / "report.json"))["failed"] == 4);
    }

    TEST_CASE("invalid configurations are rejected before any work") {
        testing::TempDir dir("invalid");
        auto cfg = synthetic_config(dir.path(), "0-1");
        cfg.channel.noise.del_prob = 1.5;
        CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
        CHECK_FALSE(std::filesystem::exists(dir / "report.json"));
        cfg = synthetic_config(dir.path(), "0-1");
        cfg.dataset.source = DatasetSource::Idx;
        cfg.dataset.images = (dir / "missing-idx").string();
        CHECK_THROWS_AS(run_pipeline(cfg), IngestError);
    }

    TEST_CASE("output directory falls back to the environment") {
        testing::TempDir dir("env");
        PipelineConfig cfg;
        ::setenv("DNASIM_OUTPUT_DIR", dir.path().c_str(), 1);
        CHECK(resolve_output_dir(cfg) == dir.path());
        ::unsetenv("DNASIM_OUTPUT_DIR");
        CHECK(resolve_output_dir(cfg) == std::filesystem::path("dnasim_out"));
        cfg.run.output_dir = "elsewhere";
        CHECK(resolve_output_dir(cfg) == std::filesystem::path("elsewhere"));
    }

    TEST_CASE("1500 synthetic payloads export one record each") {
        testing::TempDir dir("export1500");
        auto cfg = synthetic_config(dir.path(), "0-1499");
        cfg.pcr.enabled = false;
        cfg.sequencing.enabled = false;
        cfg.artifacts = {false, false, false, false};
        const RunReport r = run_pipeline(cfg);
        CHECK(r.rows.size() == 1500);
        CHECK(r.failed == 0);
        CHECK(jsonl(dir / "report.jsonl").size() == 1500);
        CHECK(verify_run_directory(dir.path()).ok());

        const ExportSummary ex = export_training_pairs(cfg);
        CHECK(ex.records == 1500);
        const auto table = tsv(ex.pairs_file);
        REQUIRE(table.size() == 1501);
        CHECK(table[0] == std::vector<std::string>{"index", "image_index", "label", "tokens", "target"});
        for (std::size_t i = 1; i < table.size(); ++i) {
            REQUIRE(table[i].size() == 5);
            REQUIRE(table[i][3].size() == 3136);
            REQUIRE(table[i][4].size() == 6272);
        }
        const json m = json::parse(slurp(ex.manifest_file));
        CHECK(m["records"] == 1500);
        CHECK(m["pad_token"] == "N");
        CHECK(m["split"]["train"]["end"] == 1200);
        CHECK(m["split"]["validation"]["begin"] == 1200);
        const std::string body = slurp(ex.pairs_file);
        CHECK(m["files"]["pairs.tsv"]["fnv1a64"] == fnv1a_hex(body));
        CHECK(m["files"]["pairs.tsv"]["bytes"] == body.size());
    }

    TEST_CASE("noiseless export tokens decode to the target") {
        testing::TempDir dir("export0");
        const auto cfg = noiseless(synthetic_config(dir.path(), "0-4"));
        const auto table = tsv(export_training_pairs(cfg).pairs_file);
        REQUIRE(table.size() == 6);
        for (std::size_t i = 1; i < table.size(); ++i) {
            CHECK(dna_to_bits(DnaSequence(table[i][3])).to_string() == table[i][4]);
            CHECK(table[i][2] == "-");
        }
    }

    TEST_CASE("export pads short token strings with N") {
        testing::TempDir dir("pad");
        auto cfg = synthetic_config(dir.path(), "0-9");
        cfg.pcr.enabled = false;
        cfg.sequencing.enabled = false;
        cfg.channel.noise = {0.0, 0.0, 0.05};
        const auto table = tsv(export_training_pairs(cfg).pairs_file);
        std::size_t padded = 0;
        for (std::size_t i = 1; i < table.size(); ++i) {
            const std::string& tok = table[i][3];
            REQUIRE(tok.size() == 3136);
            const auto first_n = tok.find('N');
            if (first_n != std::string::npos) {
                ++padded;
                CHECK(tok.find_first_not_of('N', first_n) == std::string::npos);
            }
        }
        CHECK(padded == 10);
    }

    TEST_CASE("export is byte-identical on regeneration") {
        testing::TempDir a("exportA"), b("exportB");
        auto cfg = synthetic_config(a.path(), "0-7");
        cfg.sequencing.depth = 3;
        const ExportSummary ea = export_training_pairs(cfg);
        cfg.run.output_dir = b.path().string();
        cfg.run.workers = 3;
        const ExportSummary eb = export_training_pairs(cfg);
        CHECK(slurp(ea.pairs_file) == slurp(eb.pairs_file));
        CHECK(slurp(ea.manifest_file) == slurp(eb.manifest_file));
    }

    TEST_CASE("verification detects a tampered report") {
        testing::TempDir dir("tamper");
        auto cfg = noiseless(synthetic_config(dir.path(), "0-2"));
        cfg.artifacts = {false, false, false, false};
        run_pipeline(cfg);
        json report = json::parse(slurp(dir / "report.json"));
        report["aggregates"][0]["mean"] = 0.5;
        std::ofstream(dir / "report.json") << report.dump(2);
        const ReportCheck check = verify_run_directory(dir.path());
        CHECK_FALSE(check.ok());
        CHECK(check.rows == 3);
        CHECK_THROWS_AS(verify_run_directory(dir / "nowhere"), Error);
    }
}
