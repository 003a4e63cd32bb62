#include "dnasim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dnasim/alignment.hpp"
#include "dnasim/errors.hpp"

namespace dnasim {

namespace {

void check_same_shape(const GrayImage& x, const GrayImage& y) {
    if (x.rows != y.rows || x.cols != y.cols || x.pixels.size() != y.pixels.size()) {
        throw Error("image dimensions differ: " + std::to_string(x.rows) + "x" + std::to_string(x.cols) + " vs " +
                    std::to_string(y.rows) + "x" + std::to_string(y.cols));
    }
}

}  // namespace

double bit_error_rate(const BitStream& reference, const BitStream& candidate, std::size_t frame_len) {
    if (frame_len == 0) throw Error("bit error rate is undefined for a zero-length frame");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < frame_len; ++i) {
        const std::uint8_t a = i < reference.size() ? reference[i] : 0;
        const std::uint8_t b = i < candidate.size() ? candidate[i] : 0;
        mismatches += (a != b);
    }
    return static_cast<double>(mismatches) / static_cast<double>(frame_len);
}

double bit_error_rate(const BitStream& reference, const BitStream& candidate) {
    return bit_error_rate(reference, candidate, reference.size());
}

std::size_t levenshtein(const DnaSequence& a, const DnaSequence& b) {
    return levenshtein_distance(a.view(), b.view());
}

double normalized_levenshtein(const DnaSequence& a, const DnaSequence& b) {
    const std::size_t longer = std::max(a.size(), b.size());
    if (longer == 0) return 0.0;
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longer);
}

double psnr(const GrayImage& x, const GrayImage& y) {
    check_same_shape(x, y);
    if (x.pixels.empty()) throw Error("psnr of empty images");
    double sse = 0.0;
    for (std::size_t i = 0; i < x.pixels.size(); ++i) {
        const double d = x.pixels[i] - y.pixels[i];
        sse += d * d;
    }
    const double mse = sse / static_cast<double>(x.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const GrayImage& x, const GrayImage& y, const SsimParams& p) {
    check_same_shape(x, y);
    const std::size_t w = p.window;
    if (w == 0 || w % 2 == 0) throw Error("ssim window must be odd and positive");
    if (x.rows < w || x.cols < w) throw Error("image smaller than the ssim window");

    std::vector<double> kernel(w * w);
    const double r = static_cast<double>(w / 2);
    double total = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            const double di = static_cast<double>(i) - r;
            const double dj = static_cast<double>(j) - r;
            kernel[i * w + j] = std::exp(-(di * di + dj * dj) / (2.0 * p.sigma * p.sigma));
            total += kernel[i * w + j];
        }
    }
    for (double& k : kernel) k /= total;

    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    double acc = 0.0;
    std::size_t positions = 0;
    for (std::size_t r0 = 0; r0 + w <= x.rows; ++r0) {
        for (std::size_t c0 = 0; c0 + w <= x.cols; ++c0) {
            double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
            for (std::size_t i = 0; i < w; ++i) {
                for (std::size_t j = 0; j < w; ++j) {
                    const double k = kernel[i * w + j];
                    const double a = x.at(r0 + i, c0 + j);
                    const double b = y.at(r0 + i, c0 + j);
                    mx += k * a;
                    my += k * b;
                    sxx += k * a * a;
                    syy += k * b * b;
                    sxy += k * a * b;
                }
            }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cxy = sxy - mx * my;
            acc += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++positions;
        }
    }
    return acc / static_cast<double>(positions);
}

}  // namespace dnasim
