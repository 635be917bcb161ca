#include "lcc/reconstruct.hpp"

#include <limits>
#include <stdexcept>

namespace lcc {

DataTensor reconstruct_lossy(const HierarchicalEncoding& enc, std::uint64_t seed) {
    return decode_hierarchy(enc, DecodeMode::Sampled, seed);
}

double header_bits(const HierarchicalEncoding& enc) {
    double axes = 64.0 * static_cast<double>(enc.shape.size() + 1);  // extents and channel count
    double range = 2.0 * static_cast<double>(enc.channels) * enc.precision.bits_per_scalar;
    return axes + 8.0 + range;
}

CompressionReport compression_report(const DataTensor& data, const HierarchicalEncoding& enc) {
    if (data.shape != enc.shape || data.channels != enc.channels)
        throw std::invalid_argument("encoding does not match the data");
    CompressionReport r;
    r.original_bits = static_cast<double>(data.values.size()) * enc.precision.bits_per_scalar;
    r.lossless_bits = enc.breakdown.total();
    r.lossy_bits = enc.breakdown.lcc_score;
    r.container_bits = r.lossless_bits + header_bits(enc);
    auto ratio = [&](double size) {
        return size > 0.0 ? r.original_bits / size : std::numeric_limits<double>::infinity();
    };
    r.lossless_ratio = ratio(r.lossless_bits);
    r.lossy_ratio = ratio(r.lossy_bits);
    return r;
}

}  // namespace lcc
