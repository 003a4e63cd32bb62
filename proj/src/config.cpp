#include "dnasim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "dnasim/errors.hpp"

namespace dnasim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ConfigError("expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ConfigError("expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

bool parse_bool(std::string_view s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("expected true/false, got '" + std::string(s) + "'");
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_optional(std::string_view s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

struct Field {
    std::string_view section;
    std::string_view key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, std::string_view)> set;
};

#define DNASIM_FIELD(SEC, KEY, EXPR, FORMAT, PARSE)                                   \
    Field {                                                                           \
        SEC, KEY, [](const PipelineConfig& c) { return FORMAT(c.EXPR); },             \
            [](PipelineConfig& c, std::string_view v) { c.EXPR = PARSE(v); }          \
    }

std::string format_string(const std::string& s) { return s; }
std::string parse_string(std::string_view s) { return std::string(s); }
std::string format_size(std::size_t v) { return std::to_string(v); }
std::size_t parse_size(std::string_view s) { return static_cast<std::size_t>(parse_u64(s)); }
std::string format_u64(std::uint64_t v) { return std::to_string(v); }
int parse_int(std::string_view s) { return static_cast<int>(parse_u64(s)); }
std::string format_int(int v) { return std::to_string(v); }

std::string format_source(DatasetSource s) { return s == DatasetSource::Idx ? "idx" : "synthetic"; }
DatasetSource parse_source(std::string_view s) {
    if (s == "idx") return DatasetSource::Idx;
    if (s == "synthetic") return DatasetSource::Synthetic;
    throw ConfigError("dataset.source must be idx or synthetic, got '" + std::string(s) + "'");
}

std::string format_scheme(CodecScheme s) { return std::string(codec_name(s)); }
CodecScheme parse_scheme(std::string_view s) {
    if (s == "plain") return CodecScheme::Plain;
    if (s == "constrained") return CodecScheme::Constrained;
    throw ConfigError("codec.scheme must be plain or constrained, got '" + std::string(s) + "'");
}

std::string format_platform(Platform p) { return std::string(platform_name(p)); }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        DNASIM_FIELD("run", "seed", run.seed, format_u64, parse_u64),
        DNASIM_FIELD("run", "output_dir", run.output_dir, format_string, parse_string),
        DNASIM_FIELD("run", "workers", run.workers, format_size, parse_size),

        DNASIM_FIELD("dataset", "source", dataset.source, format_source, parse_source),
        DNASIM_FIELD("dataset", "images", dataset.images, format_string, parse_string),
        DNASIM_FIELD("dataset", "labels", dataset.labels, format_string, parse_string),
        DNASIM_FIELD("dataset", "indices", dataset.indices, format_string, parse_string),
        DNASIM_FIELD("dataset", "synthetic_seed", dataset.synthetic_seed, format_u64, parse_u64),

        DNASIM_FIELD("codec", "scheme", codec.scheme, format_scheme, parse_scheme),
        DNASIM_FIELD("codec", "max_homopolymer", codec.constrained.max_homopolymer, format_int, parse_int),
        DNASIM_FIELD("codec", "gc_window", codec.constrained.gc_window, format_int, parse_int),
        DNASIM_FIELD("codec", "gc_low", codec.constrained.gc_low, format_double, parse_double),
        DNASIM_FIELD("codec", "gc_high", codec.constrained.gc_high, format_double, parse_double),

        DNASIM_FIELD("channel", "enabled", channel.enabled, format_bool, parse_bool),
        DNASIM_FIELD("channel", "sub_prob", channel.noise.sub_prob, format_double, parse_double),
        DNASIM_FIELD("channel", "ins_prob", channel.noise.ins_prob, format_double, parse_double),
        DNASIM_FIELD("channel", "del_prob", channel.noise.del_prob, format_double, parse_double),

        DNASIM_FIELD("pcr", "enabled", pcr.enabled, format_bool, parse_bool),
        DNASIM_FIELD("pcr", "polymerase", pcr.polymerase, format_string, parse_string),
        DNASIM_FIELD("pcr", "cycles", pcr.cycles, format_size, parse_size),
        DNASIM_FIELD("pcr", "capacity", pcr.capacity, format_size, parse_size),
        DNASIM_FIELD("pcr", "sub_prob", pcr.overrides.sub_prob, format_optional, parse_optional),
        DNASIM_FIELD("pcr", "ins_prob", pcr.overrides.ins_prob, format_optional, parse_optional),
        DNASIM_FIELD("pcr", "del_prob", pcr.overrides.del_prob, format_optional, parse_optional),

        DNASIM_FIELD("sequencing", "enabled", sequencing.enabled, format_bool, parse_bool),
        DNASIM_FIELD("sequencing", "platform", sequencing.platform, format_platform, parse_platform),
        DNASIM_FIELD("sequencing", "depth", sequencing.depth, format_size, parse_size),
        DNASIM_FIELD("sequencing", "read_length", sequencing.read_length, format_size, parse_size),
        DNASIM_FIELD("sequencing", "sub_prob", sequencing.overrides.sub_prob, format_optional, parse_optional),
        DNASIM_FIELD("sequencing", "ins_prob", sequencing.overrides.ins_prob, format_optional, parse_optional),
        DNASIM_FIELD("sequencing", "del_prob", sequencing.overrides.del_prob, format_optional, parse_optional),
        DNASIM_FIELD("sequencing", "consensus", sequencing.consensus, format_bool, parse_bool),
        DNASIM_FIELD("sequencing", "consensus_passes", sequencing.consensus_passes, format_size, parse_size),

        DNASIM_FIELD("metrics", "ber", metrics.ber, format_bool, parse_bool),
        DNASIM_FIELD("metrics", "levenshtein", metrics.levenshtein, format_bool, parse_bool),
        DNASIM_FIELD("metrics", "psnr", metrics.psnr, format_bool, parse_bool),
        DNASIM_FIELD("metrics", "ssim", metrics.ssim, format_bool, parse_bool),

        DNASIM_FIELD("artifacts", "fasta", artifacts.fasta, format_bool, parse_bool),
        DNASIM_FIELD("artifacts", "reads", artifacts.reads, format_bool, parse_bool),
        DNASIM_FIELD("artifacts", "pool", artifacts.pool, format_bool, parse_bool),
        DNASIM_FIELD("artifacts", "images", artifacts.images, format_bool, parse_bool),

        DNASIM_FIELD("export", "token_length", export_.token_length, format_size, parse_size),
        DNASIM_FIELD("export", "validation_fraction", export_.validation_fraction, format_double, parse_double),
    };
    return table;
}

#undef DNASIM_FIELD

void set_field(PipelineConfig& cfg, std::string_view section, std::string_view key, std::string_view value,
               const std::string& where) {
    for (const auto& f : fields()) {
        if (f.section == section && f.key == key) {
            try {
                f.set(cfg, value);
            } catch (const ConfigError& e) {
                throw ConfigError(where + std::string(section) + "." + std::string(key) + ": " + e.what());
            }
            return;
        }
    }
    throw ConfigError(where + "unknown config key " + std::string(section) + "." + std::string(key));
}

}  // namespace

NoiseProfile RateOverrides::apply(NoiseProfile base) const {
    if (sub_prob) base.sub_prob = *sub_prob;
    if (ins_prob) base.ins_prob = *ins_prob;
    if (del_prob) base.del_prob = *del_prob;
    return base;
}

std::string_view codec_name(CodecScheme s) noexcept { return s == CodecScheme::Plain ? "plain" : "constrained"; }

PolymeraseProfile PipelineConfig::polymerase_profile() const {
    PolymeraseProfile p = builtin_polymerase(pcr.polymerase);
    p.copy_noise = pcr.overrides.apply(p.copy_noise);
    return p;
}

PcrConfig PipelineConfig::pcr_config() const { return {pcr.cycles, polymerase_profile(), pcr.capacity}; }

SequencingProfile PipelineConfig::sequencing_profile() const {
    SequencingProfile p = sequencing.platform == Platform::Illumina ? SequencingProfile::illumina()
                                                                    : SequencingProfile::nanopore();
    p.depth = sequencing.depth;
    if (sequencing.platform == Platform::Illumina) p.read_length = sequencing.read_length;
    p.read_noise = sequencing.overrides.apply(p.read_noise);
    return p;
}

void PipelineConfig::validate() const {
    if (codec.scheme == CodecScheme::Constrained) codec.constrained.validate();
    channel.noise.validate();
    if (pcr.enabled) {
        polymerase_profile().validate();
        if (pcr.capacity < 1) throw ConfigError("pcr.capacity must be >= 1");
    }
    if (sequencing.enabled) {
        sequencing_profile().validate();
        if (sequencing.consensus && sequencing.consensus_passes < 1) {
            throw ConfigError("sequencing.consensus_passes must be >= 1");
        }
    }
    if (dataset.source == DatasetSource::Idx && dataset.images.empty()) {
        throw ConfigError("dataset.images is required for source = idx");
    }
    (void)parse_index_list(dataset.indices);
    if (!(export_.validation_fraction >= 0.0 && export_.validation_fraction <= 1.0)) {
        throw ConfigError("export.validation_fraction must lie in [0,1]");
    }
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside of any [section]");
        set_field(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const PipelineConfig& cfg) {
    std::string out;
    std::string_view section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) out += '\n';
            section = f.section;
            out += '[';
            out += section;
            out += "]\n";
        }
        out += f.key;
        out += " = ";
        out += f.get(cfg);
        out += '\n';
    }
    return out;
}

std::vector<ConfigEntry> config_entries(const PipelineConfig& cfg) {
    std::vector<ConfigEntry> out;
    out.reserve(fields().size());
    for (const auto& f : fields()) out.push_back({std::string(f.section), std::string(f.key), f.get(cfg)});
    return out;
}

void apply_override(PipelineConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw ConfigError("override must look like section.key=value, got '" + std::string(assignment) + "'");
    }
    set_field(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
              trim(assignment.substr(eq + 1)), "--set ");
}

std::vector<std::size_t> parse_index_list(std::string_view list) {
    std::vector<std::size_t> out;
    list = trim(list);
    while (!list.empty()) {
        const auto comma = list.find(',');
        const std::string_view item = trim(list.substr(0, comma));
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        if (item.empty()) continue;
        const auto dash = item.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_size(item));
        } else {
            const std::size_t lo = parse_size(trim(item.substr(0, dash)));
            const std::size_t hi = parse_size(trim(item.substr(dash + 1)));
            if (hi < lo) throw ConfigError("descending index range '" + std::string(item) + "'");
            for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
        }
    }
    return out;
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dnasim
