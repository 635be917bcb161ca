#include "lcc/arecibo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace lcc {

DataTensor BitGrid::tensor() const {
    DataTensor t;
    t.shape = {height, width};
    t.channels = 1;
    t.values.assign(bits.begin(), bits.end());
    return t;
}

Ratio fit_ratio(std::size_t n, std::size_t width) {
    if (width == 0) throw std::invalid_argument("width must be positive");
    return {(n + width - 1) / width, width};
}

std::size_t pad_for(std::size_t n, const Ratio& r) {
    std::size_t cells = r.height * r.width;
    if (cells < n) throw std::invalid_argument("ratio too small for the payload");
    return cells - n;
}

std::vector<Ratio> default_ratio_set(std::size_t n, double pad_cap) {
    std::vector<Ratio> out;
    for (std::size_t w = 2; w <= n / 2; ++w) {
        Ratio r = fit_ratio(n, w);
        if (r.height < 2) continue;
        if (static_cast<double>(pad_for(n, r)) <= pad_cap * static_cast<double>(n)) out.push_back(r);
    }
    return out;
}

BitGrid make_grid(const std::vector<std::uint8_t>& bits, const Ratio& r, std::uint64_t seed) {
    BitGrid g;
    g.height = r.height;
    g.width = r.width;
    g.pad_bits = pad_for(bits.size(), r);
    g.bits = bits;
    std::size_t ones = static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
    double p = bits.empty() ? 0.5 : static_cast<double>(ones) / static_cast<double>(bits.size());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r.height), static_cast<std::uint32_t>(r.width)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution on(p);
    for (std::size_t i = 0; i < g.pad_bits; ++i) g.bits.push_back(on(rng) ? 1 : 0);
    return g;
}

const RatioRecord* ScanResult::find(const Ratio& r) const {
    for (const auto& rec : records)
        if (rec.ratio == r) return &rec;
    return nullptr;
}

namespace {

bool ranks_before(const RatioRecord& a, const RatioRecord& b) {
    if (a.breakdown.lcc_score != b.breakdown.lcc_score) return a.breakdown.lcc_score > b.breakdown.lcc_score;
    return a.ratio.height < b.ratio.height;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, n));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < t; ++k)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
}

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::size_t ScanResult::rank(const Ratio& r) const {
    const RatioRecord* mine = find(r);
    if (!mine) return 0;
    std::size_t ahead = 0;
    for (const auto& rec : records)
        if (ranks_before(rec, *mine)) ++ahead;
    return ahead + 1;
}

ContinuousConfig scan_continuous_config(const ScanConfig& cfg) {
    ContinuousConfig cc = cfg.continuous;
    cc.precision_bits = cfg.compat32 ? 32 : 1;
    return cc;
}

ScanResult scan_aspect_ratios(const std::vector<std::uint8_t>& bits, const std::vector<Ratio>& ratios,
                              std::uint64_t seed, const ScanConfig& cfg) {
    if (bits.size() < 4) throw std::invalid_argument("need at least 4 bits");
    if (ratios.empty()) throw std::invalid_argument("empty ratio set");
    for (auto b : bits)
        if (b > 1) throw std::invalid_argument("bits must be 0 or 1");
    ScanResult res;
    res.pad_cap = cfg.pad_cap;
    res.seed = seed;
    ContinuousConfig cc = scan_continuous_config(cfg);
    res.precision_bits = cc.precision_bits;

    std::vector<Ratio> kept;
    for (const auto& r : ratios) {
        if (r.height < 1 || r.width < 1 || r.height * r.width < bits.size()) {
            res.notes.push_back(std::to_string(r.height) + "x" + std::to_string(r.width) + ": too small");
            continue;
        }
        double pad = static_cast<double>(pad_for(bits.size(), r));
        if (pad > cfg.pad_cap * static_cast<double>(bits.size())) {
            res.notes.push_back(std::to_string(r.height) + "x" + std::to_string(r.width) + ": pad " +
                                std::to_string(static_cast<std::size_t>(pad)) + " over cap");
            continue;
        }
        kept.push_back(r);
    }
    if (kept.empty()) throw std::invalid_argument("no ratio in the set satisfies the pad cap");

    res.records.resize(kept.size());
    parallel_for(kept.size(), cfg.threads, [&](std::size_t i) {
        BitGrid g = make_grid(bits, kept[i], seed);
        auto enc = lcc_continuous(g.tensor(), cc);
        res.records[i] = RatioRecord{kept[i], g.pad_bits, enc.breakdown, enc.levels.size()};
    });

    double pad_sum = 0.0;
    const RatioRecord* best = &res.records.front();
    for (const auto& rec : res.records) {
        pad_sum += static_cast<double>(rec.pad_bits);
        if (ranks_before(rec, *best)) best = &rec;
    }
    res.best = best->ratio;
    res.mean_pad = pad_sum / static_cast<double>(res.records.size());
    return res;
}

Baseline random_baseline(std::size_t length, const std::vector<Ratio>& ratios, int trials, std::uint64_t seed,
                         const ScanConfig& cfg) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    Baseline b;
    ScanConfig inner = cfg;
    for (int t = 0; t < trials; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t), 0x5eedu};
        std::mt19937_64 rng(seq);
        std::bernoulli_distribution coin(0.5);
        std::vector<std::uint8_t> bits(length);
        for (auto& v : bits) v = coin(rng) ? 1 : 0;
        auto scan = scan_aspect_ratios(bits, ratios, rng(), inner);
        double m = 0.0;
        for (const auto& rec : scan.records) m = std::max(m, rec.breakdown.lcc_score);
        b.trial_max.push_back(m);
    }
    b.max = *std::max_element(b.trial_max.begin(), b.trial_max.end());
    b.p95 = percentile(b.trial_max, 0.95);
    return b;
}

}  // namespace lcc
