#include "lcc/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lcc {

std::size_t DataTensor::positions() const {
    std::size_t n = 1;
    for (auto s : shape) n *= s;
    return shape.empty() ? 0 : n;
}

double quantize_value(double v, const Precision& p) {
    if (p.bits_per_scalar > 52) return v;
    double levels = std::ldexp(1.0, p.bits_per_scalar) - 1.0;
    double c = std::clamp(v, 0.0, 1.0);
    return std::round(c * levels) / levels;
}

namespace {

double log2_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0); }

struct Grid {
    std::vector<std::size_t> shape;
    std::vector<int> labels;
    std::size_t categories = 0;  // labels are 0..categories-2, x stored as categories-1
};

LevelEncoding build_level(const Grid& prev, std::size_t p, const ContinuousConfig& cfg, const Precision& base,
                          std::size_t level_index, bool& too_big) {
    LevelEncoding lv;
    lv.patch = p;
    lv.stride = cfg.overlap ? std::max<std::size_t>(1, p / 2) : p;
    lv.categories_in = prev.categories;
    std::size_t axes = prev.shape.size();
    // images tile both axes; one-axis data tiles along time only
    too_big = false;
    for (std::size_t a = 0; a < axes; ++a)
        if (p > prev.shape[a]) too_big = true;
    if (too_big) return lv;

    std::size_t rows = prev.shape[0], cols = axes == 2 ? prev.shape[1] : 1;
    std::size_t pr = p, pc = axes == 2 ? p : 1;
    std::size_t sr = lv.stride, sc = axes == 2 ? lv.stride : 1;
    std::size_t gr = (rows - pr) / sr + 1, gc = (cols - pc) / sc + 1;
    lv.grid_shape = axes == 2 ? std::vector<std::size_t>{gr, gc} : std::vector<std::size_t>{gr};

    std::vector<double> prev_counts(prev.categories, 0.0);
    for (int l : prev.labels) prev_counts[static_cast<std::size_t>(l)] += 1.0;
    double nprev = static_cast<double>(prev.labels.size());
    auto cell_bits = [&](int l) { return std::log2(nprev / prev_counts[static_cast<std::size_t>(l)]); };

    std::size_t cells = pr * pc;
    lv.points.dim = prev.categories;
    lv.points.values.reserve(gr * gc * prev.categories);
    std::vector<char> covered(rows * cols, 0);
    Precision float_prec = base;
    for (std::size_t i = 0; i < gr; ++i) {
        for (std::size_t j = 0; j < gc; ++j) {
            std::vector<std::size_t> hist(prev.categories, 0);
            double direct = 0.0;
            for (std::size_t a = 0; a < pr; ++a)
                for (std::size_t b = 0; b < pc; ++b) {
                    std::size_t at = (i * sr + a) * cols + (j * sc + b);
                    int l = prev.labels[at];
                    ++hist[static_cast<std::size_t>(l)];
                    direct += cell_bits(l);
                    covered[at] = 1;
                }
            double arrangement = log2_factorial(cells);
            for (auto h : hist) {
                lv.points.values.push_back(static_cast<double>(h) / static_cast<double>(cells));
                arrangement -= log2_factorial(h);
            }
            if (cfg.higher_direct == DirectCostMode::LabelBits) {
                lv.point_costs.direct.push_back(direct);
                lv.point_costs.cluster_overhead.push_back(std::max(0.0, arrangement));
            }
        }
    }
    for (std::size_t at = 0; at < covered.size(); ++at)
        if (!covered[at]) lv.uncovered_bits += cell_bits(prev.labels[at]);

    Precision prec = cfg.higher_direct == DirectCostMode::LabelBits ? infer_precision(lv.points.values) : float_prec;
    ClusterConfig cc = cfg.cluster;
    cc.seed = cfg.cluster.seed + 7919 * level_index;
    lv.partition = fit_mdl_gmm(lv.points, prec, cc, lv.point_costs);
    if (cfg.overlap) lv.overlap_scale = static_cast<double>((p / lv.stride) * (axes == 2 ? p / lv.stride : 1));
    const auto& c = lv.partition.costs;
    lv.costs = CostBreakdown::make(c.model_cost, c.idx_cost / lv.overlap_scale,
                                   (c.residual_cost + lv.uncovered_bits) / lv.overlap_scale);
    return lv;
}

Grid grid_of(const LevelEncoding& lv, const std::vector<std::size_t>& shape) {
    Grid g;
    g.shape = shape;
    g.categories = lv.partition.k() + 1;
    g.labels.reserve(lv.partition.labels.size());
    for (int l : lv.partition.labels) g.labels.push_back(l == kOutlier ? static_cast<int>(lv.partition.k()) : l);
    return g;
}

}  // namespace

HierarchicalEncoding lcc_continuous(const DataTensor& data, const ContinuousConfig& cfg) {
    if (data.positions() == 0 || data.channels == 0) throw std::invalid_argument("empty data tensor");
    if (data.shape.size() < 1 || data.shape.size() > 2) throw std::invalid_argument("data must have 1 or 2 axes");
    if (data.values.size() != data.positions() * data.channels) throw std::invalid_argument("tensor size mismatch");
    if (cfg.patch_sizes.empty() || cfg.patch_sizes[0] != 1)
        throw std::invalid_argument("the first level must cluster single positions (patch size 1)");
    for (double v : data.values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in data tensor");

    HierarchicalEncoding enc;
    enc.shape = data.shape;
    enc.channels = data.channels;
    enc.config = cfg;
    enc.precision = cfg.precision_bits > 0 ? Precision(cfg.precision_bits) : infer_precision(data.values);
    enc.stored.resize(data.values.size());
    for (std::size_t i = 0; i < data.values.size(); ++i) enc.stored[i] = quantize_value(data.values[i], enc.precision);
    enc.lo.assign(data.channels, 1.0);
    enc.hi.assign(data.channels, 0.0);
    for (std::size_t i = 0; i < enc.stored.size(); ++i) {
        std::size_t ch = i % data.channels;
        enc.lo[ch] = std::min(enc.lo[ch], enc.stored[i]);
        enc.hi[ch] = std::max(enc.hi[ch], enc.stored[i]);
    }

    LevelEncoding first;
    first.grid_shape = data.shape;
    first.points.dim = data.channels;
    first.points.values = enc.stored;
    first.partition = fit_mdl_gmm(first.points, enc.precision, cfg.cluster);
    first.costs = first.partition.costs;
    enc.breakdown = first.costs;
    bool stop = first.partition.k() == 0;
    enc.levels.push_back(std::move(first));

    std::size_t depth = std::min(cfg.max_levels, cfg.patch_sizes.size());
    for (std::size_t li = 1; li < depth && !stop; ++li) {
        Grid g = grid_of(enc.levels.back(), enc.levels.back().grid_shape);
        bool too_big = false;
        LevelEncoding lv = build_level(g, cfg.patch_sizes[li], cfg, enc.precision, li, too_big);
        if (too_big || lv.partition.k() == 0) break;
        enc.breakdown += lv.costs;
        enc.levels.push_back(std::move(lv));
    }
    return enc;
}

CostBreakdown audit_breakdown(const HierarchicalEncoding& enc) {
    CostBreakdown total;
    for (const auto& lv : enc.levels) {
        auto c = partition_cost(lv.partition, lv.points, lv.point_costs);
        total += CostBreakdown::make(c.model_cost, c.idx_cost / lv.overlap_scale,
                                     (c.residual_cost + lv.uncovered_bits) / lv.overlap_scale);
    }
    return total;
}

DataTensor decode_hierarchy(const HierarchicalEncoding& enc, DecodeMode mode, std::uint64_t seed) {
    DataTensor out;
    out.shape = enc.shape;
    out.channels = enc.channels;
    if (mode == DecodeMode::Exact || enc.levels.empty()) {
        out.values = enc.stored;
        return out;
    }
    const auto& part = enc.levels.front().partition;
    double floor = variance_floor(enc.precision);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    out.values.resize(enc.stored.size());
    std::size_t m = enc.channels;
    for (std::size_t i = 0; i < part.labels.size(); ++i) {
        int l = part.labels[i];
        for (std::size_t ch = 0; ch < m; ++ch) {
            double v;
            if (l == kOutlier) {
                std::uniform_real_distribution<double> unif(enc.lo[ch], enc.hi[ch]);
                v = enc.hi[ch] > enc.lo[ch] ? unif(rng) : enc.lo[ch];
            } else {
                const auto& c = part.components[static_cast<std::size_t>(l)];
                double sd = std::sqrt(std::max(0.0, c.diag_var[ch] - floor));
                v = sd > 0.0 ? c.mean[ch] + sd * normal(rng) : c.mean[ch];
                v = std::clamp(v, enc.lo[ch], enc.hi[ch]);
            }
            out.values[i * m + ch] = quantize_value(v, enc.precision);
        }
    }
    return out;
}

}  // namespace lcc
