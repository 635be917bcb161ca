#pragma once

#include <cstdint>
#include <vector>

#include "lcc/coding.hpp"
#include "lcc/mdl_cluster.hpp"

namespace lcc {

// Rectangular array of m-vectors. shape has one axis (audio frames) or two
// (image rows, columns); values are row-major with channels innermost.
struct DataTensor {
    std::vector<std::size_t> shape;
    std::size_t channels = 1;
    std::vector<double> values;

    std::size_t positions() const;
    std::size_t size() const { return values.size(); }
};

// How an x patch above the first level is charged.
enum class DirectCostMode {
    LabelBits,  // code lengths of the lower-level labels it covers
    FloatBits,  // c bits per histogram coordinate
};

struct ContinuousConfig {
    std::vector<std::size_t> patch_sizes = {1, 2, 2, 2};
    std::size_t max_levels = 4;
    bool overlap = false;
    int precision_bits = 32;  // bits per stored scalar; 0 infers it from the data
    DirectCostMode higher_direct = DirectCostMode::LabelBits;
    ClusterConfig cluster;
};

struct LevelEncoding {
    std::size_t patch = 1;
    std::size_t stride = 1;
    std::vector<std::size_t> grid_shape;  // shape of this level's label grid
    std::size_t categories_in = 0;        // lower-level labels including x; 0 at level 1
    MdlPartition partition;
    PointSet points;
    PointCosts point_costs;
    double uncovered_bits = 0.0;  // cells left over by the tiling, sent directly
    double overlap_scale = 1.0;   // idx and residual are divided by the patch multiplicity
    CostBreakdown costs;

    // Labels as an index tensor: component id or kOutlier per grid cell.
    const std::vector<int>& labels() const { return partition.labels; }
};

struct HierarchicalEncoding {
    std::vector<std::size_t> shape;
    std::size_t channels = 1;
    Precision precision;
    std::vector<double> stored;  // level-1 values at stored precision
    std::vector<double> lo, hi;  // observed per-channel range
    std::vector<LevelEncoding> levels;
    CostBreakdown breakdown;
    ContinuousConfig config;
};

HierarchicalEncoding lcc_continuous(const DataTensor& data, const ContinuousConfig& cfg = {});

// Recompute every level's cost from its stored partition.
CostBreakdown audit_breakdown(const HierarchicalEncoding& enc);

enum class DecodeMode { Exact, Sampled };

DataTensor decode_hierarchy(const HierarchicalEncoding& enc, DecodeMode mode, std::uint64_t seed = 0);

double quantize_value(double v, const Precision& p);

}  // namespace lcc
