// dnasim command-line driver: run, export-pairs, metrics, profiles.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnasim/config.hpp"
#include "dnasim/dataset.hpp"
#include "dnasim/errors.hpp"
#include "dnasim/metrics.hpp"
#include "dnasim/pcr.hpp"
#include "dnasim/pipeline.hpp"
#include "dnasim/sequencing.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct ConfigOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output;
};

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "pipeline config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", opts.overrides, "override one field, section.key=value (repeatable)");
    cmd->add_option("-o,--output", opts.output, "output directory (overrides run.output_dir)");
}

dnasim::PipelineConfig resolve_config(const ConfigOptions& opts) {
    dnasim::PipelineConfig cfg = opts.config_path.empty() ? dnasim::PipelineConfig{}
                                                          : dnasim::load_config(opts.config_path);
    for (const auto& o : opts.overrides) dnasim::apply_override(cfg, o);
    if (!opts.output.empty()) cfg.run.output_dir = opts.output;
    cfg.validate();
    return cfg;
}

json finite_or_inf(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

int cmd_run(const ConfigOptions& opts) {
    const auto cfg = resolve_config(opts);
    const auto report = dnasim::run_pipeline(cfg);
    std::cout << "payloads: " << report.rows.size() << "  failed: " << report.failed << "\n";
    for (const auto& a : report.aggregates) {
        std::cout << "  " << a.metric << ": mean " << a.mean << "  median " << a.median << "  p95 " << a.p95
                  << "  (n=" << a.count << ")\n";
    }
    std::cout << "report: " << (report.output_dir / "report.json").string() << "\n";
    for (const auto& r : report.rows) {
        if (!r.ok) std::cerr << "payload " << r.image_index << " failed: " << r.error << "\n";
    }
    return report.failed ? kExitPartial : kExitOk;
}

int cmd_export(const ConfigOptions& opts) {
    const auto cfg = resolve_config(opts);
    const auto summary = dnasim::export_training_pairs(cfg);
    std::cout << "records: " << summary.records << "\n"
              << "pairs: " << summary.pairs_file.string() << "\n"
              << "manifest: " << summary.manifest_file.string() << "\n";
    return kExitOk;
}

// Pairs each original PGM with its reconstruction. In directory mode a file
// matches by name, or orig_<x>.pgm matches recon_<x>.pgm.
std::vector<std::pair<fs::path, fs::path>> image_pairs(const fs::path& original, const fs::path& reconstructed) {
    if (!fs::is_directory(original)) return {{original, reconstructed}};
    if (!fs::is_directory(reconstructed)) {
        throw dnasim::IngestError("--original is a directory but --reconstructed is not");
    }
    std::vector<fs::path> sources;
    for (const auto& e : fs::directory_iterator(original)) {
        if (e.is_regular_file() && e.path().extension() == ".pgm") sources.push_back(e.path());
    }
    std::sort(sources.begin(), sources.end());
    std::vector<std::pair<fs::path, fs::path>> out;
    for (const auto& src : sources) {
        const std::string name = src.filename().string();
        std::string partner = name;
        if (name.rfind("recon_", 0) == 0) continue;
        if (name.rfind("orig_", 0) == 0) partner = "recon_" + name.substr(5);
        const fs::path candidate = reconstructed / partner;
        if (fs::exists(candidate) && candidate != src) {
            out.emplace_back(src, candidate);
        } else if (fs::exists(reconstructed / name) && reconstructed / name != src) {
            out.emplace_back(src, reconstructed / name);
        }
    }
    if (out.empty()) throw dnasim::IngestError("no matching PGM pairs under " + original.string());
    return out;
}

int cmd_metrics(const std::string& original, const std::string& reconstructed, const std::string& run_dir,
                const std::string& output) {
    if (!run_dir.empty()) {
        const auto check = dnasim::verify_run_directory(run_dir);
        std::cout << "rows: " << check.rows << "\n";
        for (const auto& m : check.mismatches) std::cout << "mismatch: " << m << "\n";
        std::cout << (check.ok() ? "report consistent" : "report INCONSISTENT") << "\n";
        return check.ok() ? kExitOk : kExitPartial;
    }
    if (original.empty() || reconstructed.empty()) {
        throw dnasim::ConfigError("metrics needs --original and --reconstructed, or --run");
    }
    std::string lines;
    std::vector<double> ber, psnr, ssim;
    for (const auto& [a, b] : image_pairs(original, reconstructed)) {
        const auto x = dnasim::read_pgm(a);
        const auto y = dnasim::read_pgm(b);
        if (x.rows != y.rows || x.cols != y.cols) {
            throw dnasim::IngestError("image shapes differ: " + a.string() + " vs " + b.string());
        }
        json row;
        row["original"] = a.filename().string();
        row["reconstructed"] = b.filename().string();
        row["ber"] = dnasim::bit_error_rate(dnasim::image_to_bits(x), dnasim::image_to_bits(y));
        row["psnr_db"] = finite_or_inf(dnasim::psnr(x, y));
        row["ssim"] = dnasim::ssim(x, y);
        ber.push_back(row["ber"].get<double>());
        psnr.push_back(dnasim::psnr(x, y));
        ssim.push_back(row["ssim"].get<double>());
        lines += row.dump() + "\n";
    }
    json summary;
    for (auto [name, values] : {std::pair{"ber", ber}, std::pair{"psnr_db", psnr}, std::pair{"ssim", ssim}}) {
        const auto a = dnasim::aggregate(name, values);
        summary[name] = {{"count", a.count},
                         {"mean", finite_or_inf(a.mean)},
                         {"median", finite_or_inf(a.median)},
                         {"p95", finite_or_inf(a.p95)}};
    }
    lines += json{{"summary", summary}}.dump() + "\n";
    if (output.empty()) {
        std::cout << lines;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw dnasim::Error("cannot write " + output);
        out << lines;
    }
    return kExitOk;
}

int cmd_profiles() {
    std::cout << "polymerases (per-base copy error rates: sub ins del)\n";
    for (const auto& name : dnasim::builtin_polymerase_names()) {
        const auto p = dnasim::builtin_polymerase(name);
        std::cout << "  " << name << "  " << p.copy_noise.sub_prob << " " << p.copy_noise.ins_prob << " "
                  << p.copy_noise.del_prob << "\n";
    }
    std::cout << "platforms (per-base read error rates: sub ins del)\n";
    for (const auto& p : {dnasim::SequencingProfile::illumina(), dnasim::SequencingProfile::nanopore()}) {
        std::cout << "  " << dnasim::platform_name(p.platform) << "  " << p.read_noise.sub_prob << " "
                  << p.read_noise.ins_prob << " " << p.read_noise.del_prob;
        if (p.read_length) std::cout << "  read_length=" << p.read_length;
        std::cout << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DNA storage channel simulator"};
    app.require_subcommand(1);

    ConfigOptions run_opts;
    auto* run = app.add_subcommand("run", "simulate the full pipeline and write the run report");
    add_config_options(run, run_opts);

    ConfigOptions export_opts;
    auto* exp = app.add_subcommand("export-pairs", "write (noisy tokens, clean bits) training pairs");
    add_config_options(exp, export_opts);

    std::string original, reconstructed, run_dir, metrics_output;
    auto* met = app.add_subcommand("metrics", "score images against originals, or re-check a run report");
    met->add_option("--original", original, "original PGM file or directory");
    met->add_option("--reconstructed", reconstructed, "reconstructed PGM file or directory");
    met->add_option("--run", run_dir, "run directory whose report aggregates are recomputed")
        ->check(CLI::ExistingDirectory);
    met->add_option("-o,--output", metrics_output, "write JSON lines here instead of stdout");

    auto* prof = app.add_subcommand("profiles", "list builtin polymerase and platform profiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;  // --help exits 0
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*exp) return cmd_export(export_opts);
        if (*met) return cmd_metrics(original, reconstructed, run_dir, metrics_output);
        if (*prof) return cmd_profiles();
    } catch (const std::exception& e) {
        std::cerr << "dnasim: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
