#include "lcc/mdl_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

namespace lcc {

std::size_t MdlPartition::outliers() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kOutlier));
}

double component_model_bits(std::size_t dim, const Precision& p, ModelCostMode mode) {
    double per = static_cast<double>(dim) * p.bits_per_scalar;
    return mode == ModelCostMode::Full ? 2.0 * per : per;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Identical points (with identical side costs) are merged and carried with a
// weight; binary images and label histograms collapse to a handful of rows.
struct Weighted {
    PointSet pts;
    std::vector<double> w;
    std::vector<double> direct;
    std::vector<double> over;
    std::vector<std::size_t> of_point;  // original index -> unique index
};

double direct_at(const PointCosts& extra, std::size_t i, std::size_t dim, const Precision& p) {
    return extra.direct.empty() ? static_cast<double>(dim) * p.bits_per_scalar : extra.direct[i];
}

double over_at(const PointCosts& extra, std::size_t i) {
    return extra.cluster_overhead.empty() ? 0.0 : extra.cluster_overhead[i];
}

Weighted compress(const PointSet& points, const PointCosts& extra, const Precision& p) {
    Weighted u;
    u.pts.dim = points.dim;
    std::map<std::vector<double>, std::size_t> seen;
    u.of_point.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto r = points.row(i);
        std::vector<double> key(r.begin(), r.end());
        key.push_back(direct_at(extra, i, points.dim, p));
        key.push_back(over_at(extra, i));
        auto [it, fresh] = seen.emplace(std::move(key), u.w.size());
        if (fresh) {
            u.pts.values.insert(u.pts.values.end(), r.begin(), r.end());
            u.w.push_back(0.0);
            u.direct.push_back(direct_at(extra, i, points.dim, p));
            u.over.push_back(over_at(extra, i));
        }
        u.w[it->second] += 1.0;
        u.of_point[i] = it->second;
    }
    return u;
}

struct Comp {
    std::vector<double> mean;
    std::vector<double> var;
    double weight = 0.0;
    // cached: sum_d 0.5 log2(2 pi v_d) + c*m, and 1/v_d
    double log_norm = 0.0;
    std::vector<double> inv_var;

    void prepare(const Precision& p) {
        log_norm = static_cast<double>(mean.size()) * p.bits_per_scalar;
        inv_var.resize(var.size());
        for (std::size_t d = 0; d < var.size(); ++d) {
            log_norm += 0.5 * std::log2(2.0 * std::numbers::pi * var[d]);
            inv_var[d] = 1.0 / var[d];
        }
    }
    // Same value as gaussian_residual_bits, without the floor at zero.
    double raw_bits(std::span<const double> x) const {
        double q = 0.0;
        for (std::size_t d = 0; d < mean.size(); ++d) {
            double z = x[d] - mean[d];
            q += z * z * inv_var[d];
        }
        return log_norm + 0.5 * q * std::numbers::log2e;
    }
    double bits(std::span<const double> x) const { return std::max(0.0, raw_bits(x)); }
};

std::vector<Comp> seed_kmeanspp(const Weighted& u, std::size_t k, std::mt19937_64& rng, double floor) {
    std::size_t n = u.pts.size(), m = u.pts.dim;
    std::vector<Comp> comps;
    std::vector<double> d2(n, kInf);
    std::vector<double> global_mean(m, 0.0), global_var(m, 0.0);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wsum += u.w[i];
        for (std::size_t d = 0; d < m; ++d) global_mean[d] += u.w[i] * u.pts.row(i)[d];
    }
    for (auto& v : global_mean) v /= wsum;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < m; ++d) {
            double z = u.pts.row(i)[d] - global_mean[d];
            global_var[d] += u.w[i] * z * z;
        }
    for (auto& v : global_var) v = std::max(v / wsum, floor);

    std::vector<double> probs(u.w);
    for (std::size_t c = 0; c < k; ++c) {
        double total = 0.0;
        for (double p : probs) total += p;
        std::size_t pick = 0;
        if (total <= 0.0) {
            pick = rng() % n;
        } else {
            std::uniform_real_distribution<double> unif(0.0, total);
            double r = unif(rng), acc = 0.0;
            for (pick = 0; pick < n; ++pick) {
                acc += probs[pick];
                if (acc >= r && probs[pick] > 0.0) break;
            }
            if (pick >= n) pick = n - 1;
        }
        Comp comp;
        auto row = u.pts.row(pick);
        comp.mean.assign(row.begin(), row.end());
        comp.var = global_var;
        comp.weight = 1.0 / static_cast<double>(k);
        comps.push_back(std::move(comp));
        for (std::size_t i = 0; i < n; ++i) {
            double dd = 0.0;
            for (std::size_t d = 0; d < m; ++d) {
                double z = u.pts.row(i)[d] - comps.back().mean[d];
                dd += z * z;
            }
            d2[i] = std::min(d2[i], dd);
            probs[i] = u.w[i] * d2[i];
        }
    }
    return comps;
}

// Means at the k heaviest unique points, variances at the floor. Catches
// tight repeated groups that EM started from a pooled variance smears out.
std::vector<Comp> seed_modes(const Weighted& u, std::size_t k, double floor) {
    std::vector<std::size_t> order(u.pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u.w[a] > u.w[b]; });
    std::vector<Comp> comps;
    for (std::size_t c = 0; c < k && c < order.size(); ++c) {
        Comp comp;
        auto row = u.pts.row(order[c]);
        comp.mean.assign(row.begin(), row.end());
        comp.var.assign(u.pts.dim, floor);
        comp.weight = u.w[order[c]];
        comps.push_back(std::move(comp));
    }
    return comps;
}

// Every unique point's neighbours by squared distance, itself first.
using Neighbours = std::vector<std::vector<std::pair<double, std::uint32_t>>>;

constexpr std::size_t kDensityCap = 1500;  // unique points; above this the density seed is skipped

Neighbours neighbours(const Weighted& u) {
    std::size_t n = u.pts.size();
    Neighbours nb(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = u.pts.row(i);
        nb[i].reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            auto xj = u.pts.row(j);
            double d2 = 0.0;
            for (std::size_t d = 0; d < u.pts.dim; ++d) d2 += (xi[d] - xj[d]) * (xi[d] - xj[d]);
            nb[i].emplace_back(d2, static_cast<std::uint32_t>(j));
        }
        std::sort(nb[i].begin(), nb[i].end());
    }
    return nb;
}

// Means and variances of the k densest neighbourhoods holding about
// total/(k+1) points each, centres at least two radii apart. EM started from
// all points can let a few far outliers inflate the variance until no point
// pays for the component; this start does not see them.
std::vector<Comp> seed_density(const Weighted& u, const Neighbours& nb, std::size_t k, double floor) {
    std::size_t n = u.pts.size(), m = u.pts.dim;
    double total = 0.0;
    for (double w : u.w) total += w;
    double target = std::max(2.0, total / static_cast<double>(k + 1));
    std::vector<double> radius(n);
    std::vector<std::size_t> reach(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        std::size_t j = 0;
        while (j < n && acc < target) acc += u.w[nb[i][j++].second];
        reach[i] = j;
        radius[i] = nb[i][j - 1].first;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });
    std::vector<std::size_t> centres;
    for (std::size_t i : order) {
        if (centres.size() == k) break;
        bool clear = true;
        for (std::size_t c : centres) {
            double d2 = 0.0;
            for (std::size_t d = 0; d < m; ++d) d2 += std::pow(u.pts.row(i)[d] - u.pts.row(c)[d], 2);
            if (d2 <= 4.0 * std::max(radius[c], radius[i])) clear = false;
        }
        if (clear) centres.push_back(i);
    }
    std::vector<Comp> comps;
    for (std::size_t c : centres) {
        Comp comp;
        comp.mean.assign(m, 0.0);
        comp.var.assign(m, 0.0);
        for (std::size_t j = 0; j < reach[c]; ++j) {
            std::size_t q = nb[c][j].second;
            comp.weight += u.w[q];
            for (std::size_t d = 0; d < m; ++d) comp.mean[d] += u.w[q] * u.pts.row(q)[d];
        }
        for (auto& v : comp.mean) v /= comp.weight;
        for (std::size_t j = 0; j < reach[c]; ++j) {
            std::size_t q = nb[c][j].second;
            for (std::size_t d = 0; d < m; ++d) comp.var[d] += u.w[q] * std::pow(u.pts.row(q)[d] - comp.mean[d], 2);
        }
        for (auto& v : comp.var) v = std::max(v / comp.weight, floor);
        comps.push_back(std::move(comp));
    }
    return comps;
}

void run_em(const Weighted& u, std::vector<Comp>& comps, const ClusterConfig& cfg, double floor) {
    std::size_t n = u.pts.size(), m = u.pts.dim, k = comps.size();
    std::vector<double> resp(n * k);
    double prev_ll = -kInf;
    for (int it = 0; it < cfg.max_iter; ++it) {
        double ll = 0.0;
        std::vector<double> lead(k);
        std::vector<double> inv(k * m);
        for (std::size_t c = 0; c < k; ++c) {
            lead[c] = comps[c].weight > 0.0 ? std::log(comps[c].weight) : -kInf;
            for (std::size_t d = 0; d < m; ++d) {
                lead[c] -= 0.5 * std::log(2.0 * std::numbers::pi * comps[c].var[d]);
                inv[c * m + d] = 1.0 / comps[c].var[d];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto x = u.pts.row(i);
            double best = -kInf;
            for (std::size_t c = 0; c < k; ++c) {
                double q = 0.0;
                for (std::size_t d = 0; d < m; ++d) {
                    double z = x[d] - comps[c].mean[d];
                    q += z * z * inv[c * m + d];
                }
                double lp = lead[c] - 0.5 * q;
                resp[i * k + c] = lp;
                best = std::max(best, lp);
            }
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c) s += std::exp(resp[i * k + c] - best);
            double lse = best + std::log(s);
            for (std::size_t c = 0; c < k; ++c) resp[i * k + c] = std::exp(resp[i * k + c] - lse);
            ll += u.w[i] * lse;
        }
        double wsum = 0.0;
        for (double w : u.w) wsum += w;
        for (std::size_t c = 0; c < k; ++c) {
            double nk = 0.0;
            std::vector<double> mu(m, 0.0), var(m, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double r = u.w[i] * resp[i * k + c];
                nk += r;
                for (std::size_t d = 0; d < m; ++d) mu[d] += r * u.pts.row(i)[d];
            }
            if (nk < 1e-10) {
                comps[c].weight = 0.0;
                continue;
            }
            for (auto& v : mu) v /= nk;
            for (std::size_t i = 0; i < n; ++i) {
                double r = u.w[i] * resp[i * k + c];
                for (std::size_t d = 0; d < m; ++d) {
                    double z = u.pts.row(i)[d] - mu[d];
                    var[d] += r * z * z;
                }
            }
            for (auto& v : var) v = std::max(v / nk, floor);
            comps[c].mean = std::move(mu);
            comps[c].var = std::move(var);
            comps[c].weight = nk / wsum;
        }
        if (std::isfinite(prev_ll) && std::abs(ll - prev_ll) <= cfg.tol * std::abs(prev_ll)) break;
        prev_ll = ll;
    }
}

// Component parameters from hard labels (weighted); empty labels dropped.
std::vector<Comp> refit(const Weighted& u, std::vector<int>& labels, std::size_t k, double floor,
                        const Precision& p) {
    std::size_t m = u.pts.dim;
    std::vector<Comp> comps(k);
    std::vector<double> cnt(k, 0.0);
    for (auto& c : comps) {
        c.mean.assign(m, 0.0);
        c.var.assign(m, 0.0);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kOutlier) continue;
        auto& c = comps[static_cast<std::size_t>(labels[i])];
        cnt[static_cast<std::size_t>(labels[i])] += u.w[i];
        for (std::size_t d = 0; d < m; ++d) c.mean[d] += u.w[i] * u.pts.row(i)[d];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (cnt[c] > 0)
            for (auto& v : comps[c].mean) v /= cnt[c];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kOutlier) continue;
        auto& c = comps[static_cast<std::size_t>(labels[i])];
        for (std::size_t d = 0; d < m; ++d) {
            double z = u.pts.row(i)[d] - c.mean[d];
            c.var[d] += u.w[i] * z * z;
        }
    }
    std::vector<int> remap(k, kOutlier);
    std::vector<Comp> kept;
    for (std::size_t c = 0; c < k; ++c) {
        if (cnt[c] <= 0) continue;
        for (auto& v : comps[c].var) v = std::max(v / cnt[c], floor);
        comps[c].weight = cnt[c];
        comps[c].prepare(p);
        remap[c] = static_cast<int>(kept.size());
        kept.push_back(std::move(comps[c]));
    }
    for (auto& l : labels)
        if (l != kOutlier) l = remap[static_cast<std::size_t>(l)];
    return kept;
}

struct Candidate {
    std::vector<Comp> comps;
    std::vector<int> labels;  // per unique point
    double total = kInf;
};

double label_bits(double n_total, double n_cat) {
    return std::log2(n_total / std::max(n_cat, 1.0));
}

Candidate assign_and_cost(const Weighted& u, std::vector<Comp> comps, const Precision& p, const ClusterConfig& cfg) {
    std::size_t n = u.pts.size();
    double floor = variance_floor(p);
    double total_w = 0.0;
    for (double w : u.w) total_w += w;
    for (auto& c : comps) c.prepare(p);
    std::vector<int> labels(n, kOutlier);
    std::vector<double> lb(comps.size(), std::log2(static_cast<double>(comps.size() + 1)));
    double lb_x = lb.empty() ? 0.0 : lb[0];
    for (int round = 0; round < cfg.max_assign_rounds; ++round) {
        std::vector<int> next(n, kOutlier);
        for (std::size_t i = 0; i < n; ++i) {
            auto x = u.pts.row(i);
            double best = lb_x + u.direct[i];
            for (std::size_t c = 0; c < comps.size(); ++c) {
                double v = lb[c] + comps[c].bits(x) + u.over[i];
                if (v < best) {
                    best = v;
                    next[i] = static_cast<int>(c);
                }
            }
        }
        bool same = next == labels && round > 0;
        labels = std::move(next);
        comps = refit(u, labels, comps.size(), floor, p);
        if (same || comps.empty()) break;
        double nx = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == kOutlier) nx += u.w[i];
        lb.assign(comps.size(), 0.0);
        for (std::size_t c = 0; c < comps.size(); ++c) lb[c] = label_bits(total_w, comps[c].weight);
        lb_x = label_bits(total_w, nx);
    }
    Candidate cand;
    cand.comps = std::move(comps);
    cand.labels = std::move(labels);
    return cand;
}

MdlPartition expand(const Weighted& u, const Candidate& cand, const PointSet& points, const Precision& p,
                    ModelCostMode mode, const PointCosts& extra) {
    MdlPartition part;
    part.precision = p;
    part.mode = mode;
    for (const auto& c : cand.comps) {
        GaussianComponent g;
        g.mean = c.mean;
        g.diag_var = c.var;
        g.count = static_cast<std::size_t>(std::llround(c.weight));
        part.components.push_back(std::move(g));
    }
    part.labels.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) part.labels[i] = cand.labels[u.of_point[i]];
    part.costs = partition_cost(part, points, extra);
    return part;
}

double xlogn(double n_total, double n) { return n > 0.0 ? n * std::log2(n_total / n) : 0.0; }

// Single-point moves with the components held fixed, each accepted only if
// it lowers the exact audited total. Components emptied by moves are dropped.
void polish(MdlPartition& part, const PointSet& points, const PointCosts& extra) {
    std::size_t n = points.size();
    double nt = static_cast<double>(n);
    double per_comp = component_model_bits(points.dim, part.precision, part.mode);
    for (int pass = 0; pass < 20; ++pass) {
        std::size_t k = part.components.size();
        std::vector<double> counts(k + 1, 0.0);  // x last
        for (int l : part.labels) counts[l == kOutlier ? k : static_cast<std::size_t>(l)] += 1.0;
        auto cat = [&](int l) { return l == kOutlier ? k : static_cast<std::size_t>(l); };
        auto point_bits = [&](std::size_t i, int l) {
            if (l == kOutlier) return direct_at(extra, i, points.dim, part.precision);
            const auto& c = part.components[static_cast<std::size_t>(l)];
            return gaussian_residual_bits(points.row(i), c.mean, c.diag_var, part.precision) + over_at(extra, i);
        };
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            int from = part.labels[i];
            std::size_t a = cat(from);
            if (from != kOutlier && counts[a] <= 0.0) continue;
            double here = point_bits(i, from);
            int best_to = from;
            double best_delta = -1e-9;
            for (int to = kOutlier; to < static_cast<int>(k); ++to) {
                if (to == from) continue;
                std::size_t b = cat(to);
                if (to != kOutlier && counts[b] <= 0.0) continue;  // emptied this pass
                double d = xlogn(nt, counts[a] - 1) - xlogn(nt, counts[a]) + xlogn(nt, counts[b] + 1) -
                           xlogn(nt, counts[b]) + point_bits(i, to) - here;
                if (from != kOutlier && counts[a] == 1.0) d -= per_comp;
                if (d < best_delta) {
                    best_delta = d;
                    best_to = to;
                }
            }
            if (best_to != from) {
                counts[a] -= 1.0;
                counts[cat(best_to)] += 1.0;
                part.labels[i] = best_to;
                moved = true;
            }
        }
        if (!moved) break;
        std::vector<int> remap(k, kOutlier);
        std::vector<GaussianComponent> kept;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] <= 0.0) continue;
            remap[c] = static_cast<int>(kept.size());
            kept.push_back(std::move(part.components[c]));
            kept.back().count = static_cast<std::size_t>(counts[c]);
        }
        part.components = std::move(kept);
        for (auto& l : part.labels)
            if (l != kOutlier) l = remap[static_cast<std::size_t>(l)];
    }
    part.costs = partition_cost(part, points, extra);
}

}  // namespace

CostBreakdown partition_cost(const MdlPartition& part, const PointSet& points, const PointCosts& extra) {
    if (part.labels.size() != points.size()) throw std::invalid_argument("labels do not match points");
    std::size_t k = part.components.size();
    std::vector<std::size_t> counts(k + 1, 0);
    double resid = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        int l = part.labels[i];
        if (l == kOutlier) {
            ++counts[k];
            resid += direct_at(extra, i, points.dim, part.precision);
        } else {
            const auto& c = part.components.at(static_cast<std::size_t>(l));
            ++counts[static_cast<std::size_t>(l)];
            resid += gaussian_residual_bits(points.row(i), c.mean, c.diag_var, part.precision) + over_at(extra, i);
        }
    }
    double model = static_cast<double>(k) * component_model_bits(points.dim, part.precision, part.mode);
    double idx = categorical_code_length(counts);
    return CostBreakdown::make(model, idx, resid);
}

MdlPartition partition_from_labels(const PointSet& points, std::vector<int> labels, const Precision& precision,
                                   ModelCostMode mode, const PointCosts& extra) {
    Weighted u;
    u.pts = points;
    u.w.assign(points.size(), 1.0);
    u.of_point.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) u.of_point[i] = i;
    int kmax = -1;
    for (int l : labels) kmax = std::max(kmax, l);
    Candidate cand;
    cand.comps = refit(u, labels, static_cast<std::size_t>(kmax + 1), variance_floor(precision), precision);
    cand.labels = std::move(labels);
    return expand(u, cand, points, precision, mode, extra);
}

MdlPartition fit_mdl_gmm(const PointSet& points, const Precision& precision, const ClusterConfig& cfg,
                         const PointCosts& extra) {
    if (points.size() == 0) throw std::invalid_argument("fit_mdl_gmm needs at least one point");
    if (cfg.k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    Weighted u = compress(points, extra, precision);
    double floor = variance_floor(precision);
    double per_comp = component_model_bits(points.dim, precision, cfg.mode);

    auto score = [&](const Candidate& c) {
        std::vector<double> counts(c.comps.size() + 1, 0.0);
        double resid = 0.0;
        for (std::size_t i = 0; i < u.pts.size(); ++i) {
            int l = c.labels[i];
            if (l == kOutlier) {
                counts.back() += u.w[i];
                resid += u.w[i] * u.direct[i];
            } else {
                counts[static_cast<std::size_t>(l)] += u.w[i];
                resid += u.w[i] * (c.comps[static_cast<std::size_t>(l)].bits(u.pts.row(i)) + u.over[i]);
            }
        }
        double n = 0.0, idx = 0.0;
        for (double v : counts) n += v;
        for (double v : counts)
            if (v > 0) idx += v * std::log2(n / v);
        return static_cast<double>(c.comps.size()) * per_comp + idx + resid;
    };

    Candidate best;
    best.labels.assign(u.pts.size(), kOutlier);
    best.total = score(best);
    std::size_t k_top = std::min(cfg.k_max, u.pts.size());
    Neighbours nb = u.pts.size() <= kDensityCap ? neighbours(u) : Neighbours{};
    for (std::size_t k = 1; k <= k_top; ++k) {
        for (int r = 0; r < cfg.restarts; ++r) {
            std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                              static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            auto comps = seed_kmeanspp(u, k, rng, floor);
            run_em(u, comps, cfg, floor);
            std::erase_if(comps, [](const Comp& c) { return c.weight <= 0.0; });
            auto cand = assign_and_cost(u, std::move(comps), precision, cfg);
            cand.total = score(cand);
            if (cand.total < best.total - 1e-9) best = std::move(cand);
        }
        auto cand = assign_and_cost(u, seed_modes(u, k, floor), precision, cfg);
        cand.total = score(cand);
        if (cand.total < best.total - 1e-9) best = std::move(cand);
        if (!nb.empty()) {
            auto dense = assign_and_cost(u, seed_density(u, nb, k, floor), precision, cfg);
            dense.total = score(dense);
            if (dense.total < best.total - 1e-9) best = std::move(dense);
        }
    }
    auto part = expand(u, best, points, precision, cfg.mode, extra);
    polish(part, points, extra);
    return part;
}

}  // namespace lcc
