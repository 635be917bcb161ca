#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcc/continuous.hpp"

namespace lcc {

// A bitstring laid out row-major as height x width, padded at the end.
struct BitGrid {
    std::vector<std::uint8_t> bits;  // payload followed by pad_bits random bits
    std::size_t height = 0, width = 0;
    std::size_t pad_bits = 0;

    DataTensor tensor() const;  // one channel, values 0.0 / 1.0
};

struct Ratio {
    std::size_t height = 0, width = 0;
    bool operator==(const Ratio&) const = default;
};

// Fewest rows of this width that hold n bits, and the padding they need.
Ratio fit_ratio(std::size_t n, std::size_t width);
std::size_t pad_for(std::size_t n, const Ratio& r);

// One ratio per row length 2..n/2 (at least two rows) whose minimal padding
// is at most pad_cap * n.
std::vector<Ratio> default_ratio_set(std::size_t n, double pad_cap = 0.05);

// Pads with i.i.d. bits whose on-probability matches the payload.
BitGrid make_grid(const std::vector<std::uint8_t>& bits, const Ratio& r, std::uint64_t seed);

struct ScanConfig {
    double pad_cap = 0.05;
    // Bits are scored at their inferred 1-bit precision; compat32 switches
    // to the 32-bit accounting behind the published totals.
    bool compat32 = false;
    ContinuousConfig continuous;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct RatioRecord {
    Ratio ratio;
    std::size_t pad_bits = 0;
    CostBreakdown breakdown;
    std::size_t levels = 0;
};

struct Baseline {
    std::vector<double> trial_max;  // best LCC over the ratio set, per trial
    double max = 0.0;
    double p95 = 0.0;
};

struct ScanResult {
    std::vector<RatioRecord> records;  // in ratio-set order
    std::vector<std::string> notes;    // skipped ratios
    Ratio best;                        // highest LCC, ties to the smaller height
    double mean_pad = 0.0;
    double pad_cap = 0.05;
    int precision_bits = 32;
    std::uint64_t seed = 0;

    const RatioRecord* find(const Ratio& r) const;
    // 1-based position of r when records are sorted by LCC (descending, ties
    // to the smaller height); 0 if r was not scanned.
    std::size_t rank(const Ratio& r) const;
};

ContinuousConfig scan_continuous_config(const ScanConfig& cfg);

ScanResult scan_aspect_ratios(const std::vector<std::uint8_t>& bits, const std::vector<Ratio>& ratios,
                              std::uint64_t seed, const ScanConfig& cfg = {});

Baseline random_baseline(std::size_t length, const std::vector<Ratio>& ratios, int trials, std::uint64_t seed,
                         const ScanConfig& cfg = {});

}  // namespace lcc
