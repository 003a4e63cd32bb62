#include "dnasim/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "dnasim/errors.hpp"
#include "dnasim/random.hpp"

namespace dnasim {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
        throw IngestError("truncated IDX header in " + path.string());
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::ifstream open_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    return in;
}

struct ImageHeader {
    std::uint32_t count;
    std::uint32_t rows;
    std::uint32_t cols;
};

ImageHeader read_image_header(std::istream& in, const std::filesystem::path& path) {
    const std::uint32_t magic = read_be32(in, path);
    if (magic != kImageMagic) {
        std::ostringstream msg;
        msg << "bad IDX image magic 0x" << std::hex << magic << " in " << path.string() << " (expected 0x803)";
        throw IngestError(msg.str());
    }
    ImageHeader h{read_be32(in, path), read_be32(in, path), read_be32(in, path)};
    if (h.rows != kMnistRows || h.cols != kMnistCols) {
        throw IngestError("IDX images in " + path.string() + " are " + std::to_string(h.rows) + "x" +
                          std::to_string(h.cols) + ", expected 28x28");
    }
    return h;
}

}  // namespace

std::size_t mnist_image_count(const std::filesystem::path& path) {
    auto in = open_binary(path);
    return read_image_header(in, path).count;
}

std::vector<GrayImage> load_mnist(const std::filesystem::path& path, std::span<const std::size_t> indices) {
    auto in = open_binary(path);
    const ImageHeader h = read_image_header(in, path);
    const std::size_t px = std::size_t{h.rows} * h.cols;
    const std::streamoff data_start = 16;

    in.seekg(0, std::ios::end);
    const auto file_size = static_cast<std::uintmax_t>(in.tellg());
    if (file_size < data_start + std::uintmax_t{h.count} * px) {
        throw IngestError("truncated IDX image file " + path.string() + ": header declares " +
                          std::to_string(h.count) + " images");
    }

    std::vector<GrayImage> out;
    out.reserve(indices.size());
    std::vector<unsigned char> buf(px);
    for (const std::size_t idx : indices) {
        if (idx >= h.count) {
            throw IngestError("image index " + std::to_string(idx) + " out of range (file has " +
                              std::to_string(h.count) + " images)");
        }
        in.seekg(data_start + static_cast<std::streamoff>(idx * px));
        if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(px))) {
            throw IngestError("short read at image " + std::to_string(idx) + " in " + path.string());
        }
        GrayImage img(h.rows, h.cols);
        for (std::size_t i = 0; i < px; ++i) img.pixels[i] = buf[i] / 255.0;
        out.push_back(std::move(img));
    }
    return out;
}

std::vector<std::uint8_t> load_mnist_labels(const std::filesystem::path& path,
                                            std::span<const std::size_t> indices) {
    auto in = open_binary(path);
    const std::uint32_t magic = read_be32(in, path);
    if (magic != kLabelMagic) {
        throw IngestError("bad IDX label magic in " + path.string() + " (expected 0x801)");
    }
    const std::uint32_t count = read_be32(in, path);
    std::vector<std::uint8_t> all(count);
    if (!in.read(reinterpret_cast<char*>(all.data()), count)) {
        throw IngestError("truncated IDX label file " + path.string());
    }
    std::vector<std::uint8_t> out;
    out.reserve(indices.size());
    for (const std::size_t idx : indices) {
        if (idx >= count) throw IngestError("label index " + std::to_string(idx) + " out of range");
        out.push_back(all[idx]);
    }
    return out;
}

void write_mnist_images(const std::filesystem::path& path, std::span<const GrayImage> images) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_be32(out, kImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    write_be32(out, kMnistRows);
    write_be32(out, kMnistCols);
    std::vector<unsigned char> buf;
    for (const auto& img : images) {
        if (img.rows != kMnistRows || img.cols != kMnistCols) throw Error("IDX writer needs 28x28 images");
        buf.resize(img.pixels.size());
        for (std::size_t i = 0; i < buf.size(); ++i) {
            buf[i] = static_cast<unsigned char>(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
}

void write_mnist_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

BitStream image_to_bits(const GrayImage& img) {
    BitStream bits(img.pixels.size() * 8);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        // int(x * 255): truncation toward zero
        const auto v = static_cast<unsigned>(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0);
        for (int b = 0; b < 8; ++b) bits.set(8 * i + b, (v >> (7 - b)) & 1U);
    }
    return bits;
}

BitStream normalize_frame(const BitStream& bits, std::size_t frame_len) {
    if (bits.size() == frame_len) return bits;
    std::vector<std::uint8_t> v(bits.bits().begin(),
                                bits.bits().begin() + static_cast<std::ptrdiff_t>(std::min(bits.size(), frame_len)));
    v.resize(frame_len, 0);
    return BitStream(std::move(v));
}

GrayImage bits_to_image(const BitStream& bits, const FrameConfig& cfg) {
    const BitStream frame = normalize_frame(bits, cfg.max_seq_len);
    GrayImage img(cfg.rows, cfg.cols);
    const std::size_t bpp = cfg.bits_per_pixel;
    const std::size_t max_value = (std::size_t{1} << bpp) - 1;
    const std::size_t n = std::min(img.pixels.size(), frame.size() / bpp);
    for (std::size_t i = 0; i < n; ++i) {
        unsigned v = 0;
        for (std::size_t b = 0; b < bpp; ++b) v = (v << 1) | frame[bpp * i + b];
        img.pixels[i] = static_cast<double>(v) / static_cast<double>(max_value);
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
    std::vector<unsigned char> buf(img.pixels.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        buf[i] = static_cast<unsigned char>(std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

GrayImage read_pgm(const std::filesystem::path& path) {
    auto in = open_binary(path);
    auto token = [&]() {
        std::string t;
        while (in) {
            const int c = in.get();
            if (c == '#') {
                std::string skip;
                std::getline(in, skip);
            } else if (std::isspace(c)) {
                if (!t.empty()) break;
            } else if (c != EOF) {
                t.push_back(static_cast<char>(c));
            }
        }
        return t;
    };
    if (token() != "P5") throw IngestError(path.string() + " is not a binary PGM (P5)");
    std::size_t cols = 0, rows = 0, maxval = 0;
    try {
        cols = std::stoul(token());
        rows = std::stoul(token());
        maxval = std::stoul(token());
    } catch (const std::exception&) {
        throw IngestError("malformed PGM header in " + path.string());
    }
    if (maxval == 0 || maxval > 255) throw IngestError("unsupported PGM maxval in " + path.string());
    std::vector<unsigned char> buf(rows * cols);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
        throw IngestError("truncated PGM raster in " + path.string());
    }
    GrayImage img(rows, cols);
    for (std::size_t i = 0; i < buf.size(); ++i) img.pixels[i] = buf[i] / static_cast<double>(maxval);
    return img;
}

GrayImage synthetic_digit(std::size_t index, std::uint64_t seed) {
    RandomSource rng(derive_seed(seed, index));
    GrayImage img;
    std::vector<double> acc(img.pixels.size(), 0.0);
    // A few thick strokes through the central 20x20 box, like handwriting.
    const int strokes = 2 + static_cast<int>(rng.below(3));
    double x = 8.0 + rng.uniform() * 12.0;
    double y = 6.0 + rng.uniform() * 16.0;
    for (int s = 0; s < strokes; ++s) {
        const double nx = 5.0 + rng.uniform() * 18.0;
        const double ny = 5.0 + rng.uniform() * 18.0;
        const double width = 1.0 + rng.uniform() * 0.8;
        for (int step = 0; step <= 40; ++step) {
            const double t = step / 40.0;
            const double px = x + (nx - x) * t;
            const double py = y + (ny - y) * t;
            for (std::size_t r = 0; r < kMnistRows; ++r) {
                for (std::size_t c = 0; c < kMnistCols; ++c) {
                    const double d2 = (r - py) * (r - py) + (c - px) * (c - px);
                    const double v = std::exp(-d2 / (2.0 * width * width));
                    acc[r * kMnistCols + c] = std::max(acc[r * kMnistCols + c], v);
                }
            }
        }
        x = nx;
        y = ny;
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const double v = acc[i] < 0.05 ? 0.0 : std::min(1.0, acc[i] * 1.15);
        img.pixels[i] = static_cast<unsigned>(v * 255.0) / 255.0;
    }
    return img;
}

std::vector<GrayImage> synthetic_digits(std::size_t count, std::uint64_t seed) {
    std::vector<GrayImage> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) out.push_back(synthetic_digit(n, seed));
    return out;
}

}  // namespace dnasim
