#pragma once

#include <cstdint>

#include "lcc/continuous.hpp"

namespace lcc {

struct CompressionReport {
    double original_bits = 0.0;   // positions * channels * precision
    double lossless_bits = 0.0;   // model + idx + residual
    double lossy_bits = 0.0;      // model + idx
    double container_bits = 0.0;  // lossless plus the header a decoder needs
    double lossless_ratio = 0.0;
    double lossy_ratio = 0.0;     // +inf when the structured part is empty
};

// Structured part only: clustered positions are drawn from their components,
// x positions are uniform over the observed per-channel range.
DataTensor reconstruct_lossy(const HierarchicalEncoding& enc, std::uint64_t seed);

// Shape extents, channel count, precision and the per-channel range.
double header_bits(const HierarchicalEncoding& enc);

CompressionReport compression_report(const DataTensor& data, const HierarchicalEncoding& enc);

}  // namespace lcc
