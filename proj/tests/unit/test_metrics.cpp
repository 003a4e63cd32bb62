#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "dnasim/bitcodec.hpp"
#include "dnasim/errors.hpp"
#include "dnasim/metrics.hpp"
#include "support.hpp"

using namespace dnasim;

namespace {

template <typename Fn>
GrayImage pattern(Fn fn, std::size_t rows = 28, std::size_t cols = 28) {
    GrayImage img(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) img.at(r, c) = fn(r, c);
    }
    return img;
}

// Same patterns as tests/oracles/ssim_reference.py
double pattern_a(std::size_t r, std::size_t c) { return static_cast<double>((r * 7 + c * 13) % 256) / 255.0; }
double pattern_b(std::size_t r, std::size_t c) { return static_cast<double>((r * r + 3 * c) % 256) / 255.0; }
double pattern_c(std::size_t r, std::size_t c) {
    return static_cast<double>((r * 11 + c * 5 + (r * c) % 17) % 256) / 255.0;
}

GrayImage negative(const GrayImage& x) {
    GrayImage y = x;
    for (double& p : y.pixels) p = 1.0 - p;
    return y;
}

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("ber worked examples") {
        const BitStream a(6272, 0);
        CHECK(bit_error_rate(a, a) == 0.0);
        CHECK(bit_error_rate(BitStream::from_string("00000000"), BitStream::from_string("00010000")) == 0.125);
        CHECK_THROWS_AS(bit_error_rate(BitStream{}, BitStream{}), Error);
        CHECK_THROWS_AS(bit_error_rate(a, a, 0), Error);
    }

    TEST_CASE("ber pads and truncates the candidate") {
        const BitStream ref = BitStream::from_string("1111");
        CHECK(bit_error_rate(ref, BitStream::from_string("11")) == 0.5);
        CHECK(bit_error_rate(ref, BitStream::from_string("111100")) == 0.0);
        CHECK(bit_error_rate(BitStream::from_string("0000"), BitStream{}) == 0.0);
    }

    TEST_CASE("ber agrees with a direct mismatch count on 1e4 random pairs") {
        RandomSource rng(1);
        for (int t = 0; t < 10000; ++t) {
            const std::size_t n = 1 + rng.below(200);
            const BitStream a = testing::random_bits(rng, n);
            const BitStream b = testing::random_bits(rng, n);
            std::size_t diff = 0;
            for (std::size_t i = 0; i < n; ++i) diff += a[i] != b[i];
            const double ber = bit_error_rate(a, b);
            REQUIRE(ber == static_cast<double>(diff) / static_cast<double>(n));
            REQUIRE(ber == bit_error_rate(b, a));
            REQUIRE((ber >= 0.0 && ber <= 1.0));
        }
    }

    TEST_CASE("bit accuracy is exactly 1 - ber") {
        const MetricReport r;
        CHECK(r.bit_accuracy == 1.0 - r.ber);
        const double ber = 0.0222;
        CHECK(1.0 - ber == doctest::Approx(0.9778));
    }

    TEST_CASE("levenshtein examples and normalization") {
        CHECK(levenshtein(DnaSequence("ACGT"), DnaSequence("ACGT")) == 0);
        CHECK(levenshtein(DnaSequence("ACGT"), DnaSequence("AGT")) == 1);
        CHECK(normalized_levenshtein(DnaSequence("ACGT"), DnaSequence("AGT")) == 0.25);
        CHECK(normalized_levenshtein(DnaSequence{}, DnaSequence{}) == 0.0);
        CHECK(normalized_levenshtein(DnaSequence("AAAA"), DnaSequence{}) == 1.0);
    }

    TEST_CASE("levenshtein is a metric on random triples") {
        RandomSource rng(2);
        for (int t = 0; t < 2000; ++t) {
            const DnaSequence x = testing::random_dna(rng, rng.below(40));
            const DnaSequence y = testing::random_dna(rng, rng.below(40));
            const DnaSequence z = testing::random_dna(rng, rng.below(40));
            const auto xy = levenshtein(x, y), yz = levenshtein(y, z), xz = levenshtein(x, z);
            REQUIRE(levenshtein(x, x) == 0);
            REQUIRE((xy == 0) == (x == y));
            REQUIRE(xy == levenshtein(y, x));
            REQUIRE(xz <= xy + yz);
        }
    }

    TEST_CASE("psnr worked examples") {
        const GrayImage zero;
        const GrayImage one(28, 28, 1.0);
        const GrayImage half(28, 28, 0.5);
        CHECK(std::isinf(psnr(zero, zero)));
        CHECK(psnr(zero, zero) > 0);
        CHECK(psnr(zero, one) == doctest::Approx(0.0));
        CHECK(psnr(zero, half) == doctest::Approx(6.0206).epsilon(1e-5));
        CHECK_THROWS_AS(psnr(zero, GrayImage(27, 28)), Error);
    }

    TEST_CASE("psnr and ssim match the independent reference") {
        // tests/oracles/ssim_reference.py (scipy.ndimage gaussian_filter)
        const GrayImage a = pattern(pattern_a), b = pattern(pattern_b), c = pattern(pattern_c);
        CHECK(ssim(a, b) == doctest::Approx(0.15399376617911303).epsilon(1e-9));
        CHECK(ssim(a, c) == doctest::Approx(0.31067855934927846).epsilon(1e-9));
        CHECK(ssim(b, c) == doctest::Approx(0.3082333490576384).epsilon(1e-9));
        CHECK(psnr(a, b) == doctest::Approx(8.329211000245309).epsilon(1e-12));
        CHECK(psnr(a, c) == doctest::Approx(8.278778147269025).epsilon(1e-12));
        CHECK(psnr(b, c) == doctest::Approx(8.857209983350211).epsilon(1e-12));
        CHECK(ssim(pattern(pattern_a, 9, 12), pattern(pattern_b, 9, 12)) ==
              doctest::Approx(0.4234746197645738).epsilon(1e-9));
    }

    TEST_CASE("ssim of a photographic negative matches the reference within 1e-6") {
        const GrayImage a = pattern(pattern_a), b = pattern(pattern_b), c = pattern(pattern_c);
        CHECK(std::fabs(ssim(a, negative(a)) - -0.662934697150007) < 1e-6);
        CHECK(std::fabs(ssim(b, negative(b)) - -0.7872112616645328) < 1e-6);
        CHECK(std::fabs(ssim(c, negative(c)) - -0.6067103905643763) < 1e-6);
    }

    TEST_CASE("ssim of two constant images matches the closed form") {
        const double c1 = 0.01 * 0.01;
        for (const auto& [u, v] : {std::pair{0.2, 0.7}, std::pair{0.0, 1.0}, std::pair{0.5, 0.5}, std::pair{0.9, 0.1}}) {
            const double expected = (2 * u * v + c1) / (u * u + v * v + c1);
            CHECK(ssim(GrayImage(28, 28, u), GrayImage(28, 28, v)) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    TEST_CASE("ssim identity, bound and shape errors") {
        RandomSource rng(3);
        for (int t = 0; t < 50; ++t) {
            GrayImage x, y;
            for (auto& p : x.pixels) p = rng.uniform();
            for (auto& p : y.pixels) p = rng.uniform();
            CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ssim(x, y) <= 1.0);
            CHECK(ssim(x, y) >= -1.0);
        }
        CHECK_THROWS_AS(ssim(GrayImage{}, GrayImage(28, 27)), Error);
        CHECK_THROWS_AS(ssim(GrayImage(5, 5), GrayImage(5, 5)), Error);  // smaller than the window
    }

    TEST_CASE("psnr strictly decreases with uniform noise amplitude") {
        RandomSource rng(4);
        GrayImage base;
        for (auto& p : base.pixels) p = 0.25 + 0.5 * rng.uniform();
        double previous = INFINITY;
        for (const double amp : {0.01, 0.02, 0.05, 0.1, 0.2}) {
            double sum = 0;
            for (int t = 0; t < 20; ++t) {
                GrayImage noisy = base;
                for (auto& p : noisy.pixels) p = std::clamp(p + amp * (2 * rng.uniform() - 1), 0.0, 1.0);
                sum += psnr(base, noisy);
            }
            const double mean = sum / 20;
            CHECK(mean < previous);
            previous = mean;
        }
    }

    TEST_CASE("indel sensitivity: one deleted symbol") {
        // Deleting the 2-bit symbol at bit offset p leaves levenshtein 1 on the
        // DNA but shifts every later bit, so frame-aligned BER is about
        // (N - p) / 2N. BER >= 0.25 therefore needs p in the first half.
        RandomSource rng(5);
        const int trials = 2000;
        int uniform_hits = 0, early_hits = 0;
        for (int t = 0; t < trials; ++t) {
            const BitStream b = testing::random_bits(rng, 6272);
            const DnaSequence s = bits_to_dna(b);
            for (const bool early : {false, true}) {
                const std::size_t limit = early ? 6272 * 2 / 5 / 2 : 3136;
                const std::size_t sym = rng.below(limit);
                std::string cut = s.str();
                cut.erase(sym, 1);
                const DnaSequence d(cut);
                REQUIRE(levenshtein(s, d) <= 1);
                const double ber = bit_error_rate(b, dna_to_bits(d));
                (early ? early_hits : uniform_hits) += ber >= 0.25;
            }
        }
        const double p_uniform = static_cast<double>(uniform_hits) / trials;
        const double p_early = static_cast<double>(early_hits) / trials;
        MESSAGE("P(ber >= 0.25): uniform position " << p_uniform << ", first 40% " << p_early);
        CHECK(p_uniform == doctest::Approx(0.5).epsilon(0.1));
        CHECK(p_early >= 0.99);
    }
}
