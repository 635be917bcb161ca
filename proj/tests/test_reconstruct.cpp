#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "lcc/frontends.hpp"
#include "lcc/reconstruct.hpp"

using namespace lcc;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sd_of(const std::vector<double>& v) {
    double m = mean_of(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / v.size());
}

}  // namespace

TEST(ReconstructLossy, PhotoClusteredPixelsWithinComponentSpread) {
    auto t = load_image(LCC_TEST_DATA "/photos/astronaut_a.ppm").tensor;
    auto enc = lcc_continuous(t);
    const auto& part = enc.levels.front().partition;
    ASSERT_GT(part.k(), 0u);
    double se = 0.0, var = 0.0;
    std::size_t n = 0;
    auto r = reconstruct_lossy(enc, 17);
    ASSERT_EQ(r.shape, t.shape);
    for (std::size_t i = 0; i < part.labels.size(); ++i) {
        if (part.labels[i] == kOutlier) continue;
        const auto& c = part.components[static_cast<std::size_t>(part.labels[i])];
        for (std::size_t ch = 0; ch < 3; ++ch) {
            double d = r.values[i * 3 + ch] - enc.stored[i * 3 + ch];
            se += d * d;
            var += c.diag_var[ch];
            ++n;
        }
    }
    ASSERT_GT(n, 0u);
    // A fresh draw and the original each sit about one sigma from the mean.
    EXPECT_LE(se / n, 3.0 * var / n);
}

TEST(ReconstructLossy, WhiteNoiseLooksAlikeButDiffers) {
    auto t = generate("white-noise-image", GenParams{}, 4).tensor;
    auto enc = lcc_continuous(t);
    auto r = reconstruct_lossy(enc, 8);
    ASSERT_EQ(r.values.size(), t.values.size());
    std::size_t same = 0;
    for (std::size_t i = 0; i < t.values.size(); ++i)
        if (std::abs(r.values[i] - enc.stored[i]) < 1.0 / 255.0) ++same;
    EXPECT_LT(static_cast<double>(same) / t.values.size(), 0.05);
    EXPECT_NEAR(mean_of(r.values), mean_of(t.values), 0.05);
    EXPECT_NEAR(sd_of(r.values), sd_of(t.values), 0.2 * sd_of(t.values));
}

TEST(ReconstructLossy, ConstantInputComesBackExactly) {
    DataTensor t;
    t.shape = {5, 5};
    t.channels = 1;
    t.values.assign(25, 0.6);
    auto enc = lcc_continuous(t);
    auto r = reconstruct_lossy(enc, 1);
    for (double v : r.values) EXPECT_EQ(v, quantize_value(0.6, enc.precision));
}

TEST(ReconstructLossy, DeterministicGivenSeed) {
    auto enc = lcc_continuous(load_image(LCC_TEST_DATA "/photos/coffee_a.ppm").tensor);
    EXPECT_EQ(reconstruct_lossy(enc, 5).values, reconstruct_lossy(enc, 5).values);
    EXPECT_NE(reconstruct_lossy(enc, 5).values, reconstruct_lossy(enc, 6).values);
}

TEST(CompressionReport, OrderingAndRatios) {
    auto t = load_image(LCC_TEST_DATA "/photos/china_full.ppm").tensor;
    auto enc = lcc_continuous(t);
    auto r = compression_report(t, enc);
    EXPECT_DOUBLE_EQ(r.original_bits, 32.0 * 32 * 3 * 32);
    EXPECT_LE(r.lossy_bits, r.lossless_bits);
    EXPECT_LE(r.lossless_bits, r.container_bits);
    EXPECT_DOUBLE_EQ(r.lossy_ratio, r.original_bits / r.lossy_bits);
    EXPECT_DOUBLE_EQ(r.lossless_ratio, r.original_bits / r.lossless_bits);
    EXPECT_GT(r.lossy_ratio, 5.0);
}

TEST(CompressionReport, NoiseLossyFarAboveLossless) {
    auto t = generate("white-noise-image", GenParams{}, 2).tensor;
    auto r = compression_report(t, lcc_continuous(t));
    EXPECT_GT(r.lossy_ratio, 10.0 * r.lossless_ratio);
}

TEST(CompressionReport, ConstantImageRatiosLarge) {
    DataTensor t;
    t.shape = {16, 16};
    t.channels = 3;
    t.values.assign(16 * 16 * 3, 0.3);
    auto r = compression_report(t, lcc_continuous(t));
    EXPECT_GT(r.lossless_ratio, 50.0);
    EXPECT_GT(r.lossy_ratio, 50.0);
}

TEST(CompressionReport, RejectsMismatchedEncoding) {
    auto t = generate("halves", GenParams{}, 0).tensor;
    auto enc = lcc_continuous(t);
    t.shape = {16, 64};
    EXPECT_THROW(compression_report(t, enc), std::invalid_argument);
}
