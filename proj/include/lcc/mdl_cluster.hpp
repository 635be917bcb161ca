#pragma once

#include <cstdint>
#include <vector>

#include "lcc/coding.hpp"

namespace lcc {

// Row-major n x m matrix of points.
struct PointSet {
    std::size_t dim = 0;
    std::vector<double> values;

    std::size_t size() const { return dim ? values.size() / dim : 0; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

struct GaussianComponent {
    std::vector<double> mean;
    std::vector<double> diag_var;
    std::size_t count = 0;
};

enum class ModelCostMode { Full, MeansOnly };

inline constexpr int kOutlier = -1;

struct ClusterConfig {
    std::size_t k_max = 15;
    ModelCostMode mode = ModelCostMode::Full;
    std::uint64_t seed = 0;
    int max_iter = 100;
    double tol = 1e-6;
    int restarts = 3;
    int max_assign_rounds = 50;
};

// Per-point cost terms that do not come from the Gaussian itself. Empty
// vectors mean: direct cost c*m, no overhead.
struct PointCosts {
    std::vector<double> direct;            // bits to send the point verbatim
    std::vector<double> cluster_overhead;  // extra bits when the point is clustered
};

struct MdlPartition {
    std::vector<GaussianComponent> components;
    std::vector<int> labels;  // component index or kOutlier
    Precision precision;
    ModelCostMode mode = ModelCostMode::Full;
    CostBreakdown costs;
    double residual_clustered = 0.0;
    double residual_direct = 0.0;

    std::size_t k() const { return components.size(); }
    std::size_t outliers() const;
};

double component_model_bits(std::size_t dim, const Precision& p, ModelCostMode mode);

MdlPartition fit_mdl_gmm(const PointSet& points, const Precision& precision, const ClusterConfig& cfg = {},
                         const PointCosts& extra = {});

// Audit path: every term recomputed from the stored components and labels.
CostBreakdown partition_cost(const MdlPartition& part, const PointSet& points, const PointCosts& extra = {});

// Mean and floored diagonal variance of the points carrying each label;
// empty labels are dropped and the remaining labels renumbered in order.
MdlPartition partition_from_labels(const PointSet& points, std::vector<int> labels, const Precision& precision,
                                   ModelCostMode mode, const PointCosts& extra = {});

}  // namespace lcc
