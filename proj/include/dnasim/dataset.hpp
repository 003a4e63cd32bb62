#pragma once
// MNIST ingestion and image <-> bit-frame conversion.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dnasim/sequence.hpp"

namespace dnasim {

inline constexpr std::size_t kMnistRows = 28;
inline constexpr std::size_t kMnistCols = 28;

// Row-major grayscale image with intensities in [0,1].
struct GrayImage {
    std::size_t rows = kMnistRows;
    std::size_t cols = kMnistCols;
    std::vector<double> pixels = std::vector<double>(kMnistRows * kMnistCols, 0.0);

    GrayImage() = default;
    GrayImage(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), pixels(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct FrameConfig {
    std::size_t max_seq_len = 6272;  // 784 pixels x 8 bits
    std::size_t bits_per_pixel = 8;
    std::size_t rows = kMnistRows;
    std::size_t cols = kMnistCols;
};

// Number of images declared in an IDX3 header.
std::size_t mnist_image_count(const std::filesystem::path& path);

// Images normalized by /255, returned in the order of `indices`.
std::vector<GrayImage> load_mnist(const std::filesystem::path& path, std::span<const std::size_t> indices);
std::vector<std::uint8_t> load_mnist_labels(const std::filesystem::path& path,
                                            std::span<const std::size_t> indices);

// Writers for the same IDX formats (fixtures and synthetic datasets).
void write_mnist_images(const std::filesystem::path& path, std::span<const GrayImage> images);
void write_mnist_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

// Each pixel becomes the 8-bit big-endian binary of floor(p * 255), row-major.
BitStream image_to_bits(const GrayImage& img);

// Truncates or zero-pads the stream to cfg.max_seq_len, regroups into bytes, divides by 255.
GrayImage bits_to_image(const BitStream& bits, const FrameConfig& cfg = {});

// Tail-truncate / zero-pad policy shared with the BER metric.
BitStream normalize_frame(const BitStream& bits, std::size_t frame_len);

// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_pgm(const std::filesystem::path& path);

// Deterministic digit-like stroke images on the 1/255 grid, for runs without MNIST files.
GrayImage synthetic_digit(std::size_t index, std::uint64_t seed);
std::vector<GrayImage> synthetic_digits(std::size_t count, std::uint64_t seed);

}  // namespace dnasim
