#pragma once
// Reconstruction fidelity at the bit, sequence and perceptual layers.

#include <cstddef>

#include "dnasim/dataset.hpp"
#include "dnasim/sequence.hpp"

namespace dnasim {

struct MetricReport {
    double ber = 0.0;
    double bit_accuracy = 1.0;  // always 1 - ber
    std::size_t levenshtein = 0;
    double normalized_levenshtein = 0.0;
    double psnr_db = 0.0;  // +inf for identical images
    double ssim = 1.0;
};

// Both streams are tail-truncated / zero-padded to frame_len, then compared
// positionwise. Throws Error when frame_len is 0.
double bit_error_rate(const BitStream& reference, const BitStream& candidate, std::size_t frame_len);
// Frame length taken from the reference stream.
double bit_error_rate(const BitStream& reference, const BitStream& candidate);

std::size_t levenshtein(const DnaSequence& a, const DnaSequence& b);
// Distance divided by the longer length; 0 for two empty sequences.
double normalized_levenshtein(const DnaSequence& a, const DnaSequence& b);

// 10 log10(1 / MSE) on [0,1] intensities.
double psnr(const GrayImage& x, const GrayImage& y);

struct SsimParams {
    std::size_t window = 7;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

// Mean of the local SSIM map over every position where the Gaussian window
// fits inside the image, with population (weighted) moments.
double ssim(const GrayImage& x, const GrayImage& y, const SsimParams& params = {});

}  // namespace dnasim
