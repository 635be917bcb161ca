// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lcc/arecibo.hpp"
#include "lcc/continuous.hpp"
#include "lcc/discrete.hpp"
#include "lcc/frontends.hpp"
#include "lcc/oracle.hpp"

namespace fs = std::filesystem;
using namespace lcc;

namespace {

using Clock = std::chrono::steady_clock;

template <class... Args>
std::string format(const char* fmt, Args... args) {
    char buf[512];
    if constexpr (sizeof...(Args) == 0) std::snprintf(buf, sizeof buf, "%s", fmt);
    else std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void note(const char* fmt, auto... args) { details.push_back(format(fmt, args...)); }
    // Records a check; the criterion passes only if every check does.
    bool check(bool ok, const char* fmt, auto... args) {
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + format(fmt, args...));
        pass = pass && ok;
        return ok;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double stddev(const std::vector<double>& v) {
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / v.size());
}

SymbolString from_letters(const std::string& s, std::size_t alphabet) {
    SymbolString out;
    out.alphabet_size = alphabet;
    for (char c : s) out.symbols.push_back(static_cast<Symbol>(c - 'a'));
    return out;
}

std::vector<Symbol> from_index_letters(const std::string& s, Symbol base) {
    std::vector<Symbol> out;
    for (char c : s) out.push_back(c == 'x' ? kXSymbol : static_cast<Symbol>(base + (c - 'd')));
    return out;
}

std::vector<std::string> files_in(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

double text_lcc(const SymbolString& s) { return lcc_text(s).lcc_score; }

// ---- 1 ----
Outcome worked_discrete() {
    Outcome o;
    auto t0 = Clock::now();
    const std::string s = "ccabacbbbcaacbcccbcaaacbbcccabbbaacbaaabcabbbcabbbcacbb";
    DiscreteEncoding e;
    e.base_alphabet = 3;
    e.codebook.entries = {{3, {0, 0}}, {4, {1, 1}}, {5, {2, 1}}, {6, {0, 2, 4}}};
    e.index = from_index_letters("xxxxgxxdfxxfxdgxxxxexdfdxxxxexxxexxg", 3);
    e.residual = from_letters("ccabbcccccccababcabcabc", 3).symbols;
    auto c = encoding_cost(e);
    o.check(std::abs(c.idx_cost - 59.81) <= 0.01, "L(I) = %.4f (target 59.81 +- 0.01)", c.idx_cost);
    o.check(std::abs(c.residual_cost - 33.90) <= 0.01, "L(X) = %.4f (target 33.90 +- 0.01)", c.residual_cost);
    o.check(decode(e) == from_letters(s, 3).symbols, "decode reproduces S");
    double dt = seconds_since(t0);
    o.check(dt < 1.0, "runtime %.3f s (< 1 s)", dt);
    return o;
}

// ---- 2 ----
Outcome worked_continuous() {
    Outcome o;
    auto t0 = Clock::now();
    ContinuousConfig cfg;
    cfg.patch_sizes = {1, 2};
    cfg.precision_bits = 32;
    cfg.higher_direct = DirectCostMode::FloatBits;
    cfg.cluster.mode = ModelCostMode::MeansOnly;
    auto enc = lcc_continuous(load_image(LCC_TEST_DATA "/toy_8x8.ppm").tensor, cfg);
    for (std::size_t i = 0; i < enc.levels.size(); ++i)
        o.note("level %zu: K=%zu model %.2f idx %.2f", i + 1, enc.levels[i].partition.k(),
               enc.levels[i].costs.model_cost, enc.levels[i].costs.idx_cost);
    double lcc = enc.breakdown.lcc_score;
    o.check(std::abs(lcc - 609.67) <= 0.05, "model + idx = %.2f (target 609.67 +- 0.05)", lcc);
    double dt = seconds_since(t0);
    o.check(dt < 5.0, "runtime %.3f s (< 5 s)", dt);
    return o;
}

// ---- 3 ----
Outcome noise_nullity() {
    Outcome o;
    int zero = 0, resid_ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = generate("rand-text", {}, seed).text;
        auto c = lcc_text(s);
        zero += c.lcc_score == 0.0;
        resid_ok += std::abs(c.residual_cost - empirical_code_length(s)) <= 0.01;
    }
    o.check(zero == 10, "rand-text LCC exactly 0 on %d/10 seeds", zero);
    o.check(resid_ok == 10, "rand-text residual = empirical code length +- 0.01 on %d/10 seeds", resid_ok);
    int small = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto b = lcc_continuous(generate("white-noise-image", {}, seed).tensor).breakdown;
        double frac = b.lcc_score / b.total();
        worst = std::max(worst, frac);
        small += frac <= 0.01;
    }
    o.check(small == 20, "white noise LCC <= 1%% of total on %d/20 seeds (worst %.4f%%)", small, 100 * worst);
    return o;
}

// ---- 4 ----
Outcome repetition_floor() {
    Outcome o;
    const std::size_t ks[] = {2, 5, 10};
    const double targets[] = {2.00, 11.21, 29.13};
    std::vector<double> means;
    for (int i = 0; i < 3; ++i) {
        std::vector<double> over_seeds, over_counts;
        for (std::uint64_t seed = 0; seed < 10; ++seed)
            over_seeds.push_back(text_lcc(generate("repeat-k", {.k = ks[i]}, seed).text));
        // same unit, different number of repetitions
        for (std::size_t len : {2500, 5000, 7500})
            over_counts.push_back(text_lcc(generate("repeat-k", {.length = len, .k = ks[i]}, 0).text));
        double m = mean(over_seeds);
        means.push_back(m);
        o.check(m <= 50.0, "repeat-%zu LCC %.2f (<= 50)", ks[i], m);
        o.check(stddev(over_counts) == 0.0, "repeat-%zu std over 2500/5000/7500 symbols = %.4g", ks[i],
                stddev(over_counts));
        o.note("repeat-%zu std over 10 units = %.4g", ks[i], stddev(over_seeds));
        o.check(std::abs(m - targets[i]) <= 0.5 * targets[i], "repeat-%zu within 50%% of %.2f", ks[i], targets[i]);
    }
    o.check(means[0] < means[1] && means[1] < means[2], "strictly increasing in unit length");
    return o;
}

// ---- 5 ----
Outcome text_ordering() {
    Outcome o;
    std::vector<double> nat, simp, rep, rnd;
    for (const auto& f : files_in(LCC_TEST_DATA "/text")) nat.push_back(text_lcc(load_text(f).text));
    const std::size_t ks[] = {2, 5, 10};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        simp.push_back(text_lcc(generate("simp-en", {}, seed).text));
        rep.push_back(text_lcc(generate("repeat-k", {.k = ks[seed % 3]}, seed).text));
        rnd.push_back(text_lcc(generate("rand-text", {}, seed + 100).text));
    }
    o.note("mean LCC: natural %.2f, simp-en %.2f, repeat %.2f, rand %.2f", mean(nat), mean(simp), mean(rep),
           mean(rnd));
    std::size_t good = 0, total = 0;
    for (double a : nat)
        for (double b : simp) good += a > b, ++total;
    for (double a : simp)
        for (double b : rep) good += a > b, ++total;
    for (double r : rnd) good += r == 0.0, ++total;
    double frac = static_cast<double>(good) / total;
    o.check(frac >= 0.95, "%zu/%zu orderings correct (%.1f%%, need 95%%)", good, total, 100 * frac);
    return o;
}

// ---- 6 ----
Outcome image_ordering() {
    Outcome o;
    auto t0 = Clock::now();
    auto score = [](const DataTensor& t) { return lcc_continuous(t).breakdown.lcc_score; };
    std::vector<double> photo, pattern, noise;
    for (const auto& f : files_in(LCC_TEST_DATA "/photos")) photo.push_back(score(load_image(f).tensor));
    for (std::uint64_t i = 0; i < 20; ++i) {
        GenParams p;
        p.angle = std::numbers::pi * static_cast<double>(i % 10) / 10.0;
        p.stripe_width = 2 + i % 5;
        pattern.push_back(score(generate(i < 10 ? "stripes" : "halves", p, i).tensor));
        noise.push_back(score(generate("white-noise-image", {}, i).tensor));
    }
    o.note("mean LCC: photos %.1f, stripes/halves %.1f, noise %.1f", mean(photo), mean(pattern), mean(noise));
    o.note("min photo %.1f, max pattern %.1f", *std::min_element(photo.begin(), photo.end()),
           *std::max_element(pattern.begin(), pattern.end()));
    std::size_t good = 0, total = 0;
    for (double a : photo)
        for (double b : pattern) good += a > b, ++total;
    for (double a : pattern)
        for (double b : noise) good += a > b, ++total;
    double frac = static_cast<double>(good) / total;
    o.check(frac >= 0.95, "%zu/%zu orderings correct (%.1f%%, need 95%%)", good, total, 100 * frac);
    double dt = seconds_since(t0);
    o.check(dt < 120.0, "runtime %.1f s (< 2 min)", dt);
    return o;
}

// ---- 7 ----
Outcome density_contrast() {
    Outcome o;
    std::vector<double> img, txt;
    for (const auto& f : files_in(LCC_TEST_DATA "/photos")) {
        auto b = lcc_continuous(load_image(f).tensor).breakdown;
        img.push_back(b.residual_cost / b.lcc_score);
    }
    for (const auto& f : files_in(LCC_TEST_DATA "/text")) {
        auto b = lcc_text(load_text(f).text);
        txt.push_back(b.residual_cost / b.lcc_score);
    }
    double ri = mean(img), rt = mean(txt);
    o.note("residual:LCC images %.2f, text %.3f", ri, rt);
    o.check(ri >= 10.0 * rt, "contrast %.1fx (need >= 10x)", ri / rt);
    return o;
}

// ---- 8 ----
Outcome arecibo_ranking() {
    Outcome o;
    auto t0 = Clock::now();
    auto bits = load_bits(LCC_TEST_DATA "/arecibo_1679.txt").bits;
    auto ratios = default_ratio_set(bits.size());
    auto scan = scan_aspect_ratios(bits, ratios, 1);
    auto base = random_baseline(bits.size(), ratios, 20, 2);
    auto score = [&](Ratio r) { return scan.find(r) ? scan.find(r)->breakdown.lcc_score : NAN; };
    o.note("%zu ratios, mean pad %.1f bits, 1-bit precision", scan.records.size(), scan.mean_pad);
    o.note("baseline over 20 trials: max %.2f, p95 %.2f", base.max, base.p95);
    o.check(scan.rank({73, 23}) == 1, "73x23 rank %zu (LCC %.2f)", scan.rank({73, 23}), score({73, 23}));
    o.check(scan.rank({77, 22}) == 2, "77x22 rank %zu (LCC %.2f)", scan.rank({77, 22}), score({77, 22}));
    o.check(score({73, 23}) > base.max, "73x23 above the baseline max");
    o.check(score({77, 22}) > base.max, "77x22 above the baseline max");
    o.check(scan.rank({42, 40}) > 2, "42x40 rank %zu", scan.rank({42, 40}));
    o.check(scan.rank({23, 73}) > 2, "23x73 rank %zu", scan.rank({23, 73}));
    double dt = seconds_since(t0);
    o.check(dt < 600.0, "runtime %.1f s (< 10 min)", dt);
    return o;
}

// ---- 9 ----
Outcome threshold_consistency() {
    Outcome o;
    std::mt19937_64 rng(9);
    std::size_t decisions = 0, agree = 0, long_subs = 0, long_in_band = 0;
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_count;  // occurrences -> (in band, seen)
    double lo = INFINITY, hi = -INFINITY;
    while (decisions < 1200) {
        std::size_t a = 2 + rng() % 26;
        std::size_t n = 400 + rng() % 2600;
        std::vector<Symbol> s(n);
        for (auto& v : s) v = static_cast<Symbol>(rng() % a);
        // plant a repeat so long substrings get counts above one
        std::vector<Symbol> unit(2 + rng() % 39);
        for (auto& v : unit) v = static_cast<Symbol>(rng() % a);
        std::size_t copies = 1 + rng() % 8;
        for (std::size_t c = 0; c < copies; ++c) {
            std::size_t at = rng() % (n - unit.size());
            std::copy(unit.begin(), unit.end(), s.begin() + static_cast<long>(at));
        }
        std::vector<std::vector<Symbol>> subs = {unit};
        for (int j = 0; j < 5; ++j) {
            std::size_t len = 2 + rng() % 5, at = rng() % (n - len);
            subs.emplace_back(s.begin() + static_cast<long>(at), s.begin() + static_cast<long>(at + len));
        }
        for (const auto& sub : subs) {
            auto d = alias_threshold(s, sub, a);
            ++decisions;
            agree += d.agrees();
            if (d.l > 100.0 && d.occurrences >= 2) {
                ++long_subs;
                lo = std::min(lo, d.threshold);
                hi = std::max(hi, d.threshold);
                bool in_band = d.threshold > 1.0 && d.threshold < 1.2;
                long_in_band += in_band;
                by_count[d.occurrences].first += in_band;
                ++by_count[d.occurrences].second;
            }
        }
    }
    for (const auto& [n, c] : by_count)
        o.note("l > 100 bits, %zu occurrences: %zu/%zu in band", n, c.first, c.second);
    double frac = static_cast<double>(agree) / decisions;
    o.check(frac >= 0.95, "sign agreement %zu/%zu (%.2f%%, need 95%%)", agree, decisions, 100 * frac);
    o.check(long_subs > 0 && long_in_band == long_subs, "l > 100 bits: %zu/%zu thresholds in (1, 1.2), range [%.4f, %.4f]",
            long_in_band, long_subs, lo, hi);
    return o;
}

// ---- 10 ----
SymbolString tiny_string(std::mt19937_64& rng) {
    SymbolString s;
    s.alphabet_size = 2 + rng() % 3;
    std::size_t n = 6 + rng() % 11;
    if (rng() % 2) {
        std::vector<Symbol> unit(2 + rng() % 2);
        for (auto& u : unit) u = static_cast<Symbol>(rng() % s.alphabet_size);
        while (s.symbols.size() < n) {
            if (rng() % 3) s.symbols.insert(s.symbols.end(), unit.begin(), unit.end());
            else s.symbols.push_back(static_cast<Symbol>(rng() % s.alphabet_size));
        }
        s.symbols.resize(n);
    } else {
        for (std::size_t i = 0; i < n; ++i) s.symbols.push_back(static_cast<Symbol>(rng() % s.alphabet_size));
    }
    return s;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(0);
    std::size_t within = 0;
    double worst = 1.0;
    for (int t = 0; t < 200; ++t) {
        auto s = tiny_string(rng);
        auto r = oracle::brute_force_discrete(s);
        double g = oracle::discrete_objective(greedy_alias_search(s), true);
        double ratio = r.optimum_cost > 0 ? g / r.optimum_cost : (g == 0 ? 1.0 : INFINITY);
        worst = std::max(worst, ratio);
        within += g <= 1.10 * r.optimum_cost + 1e-9;
    }
    o.check(within == 200, "greedy within 10%% of the discrete optimum on %zu/200 strings (worst ratio %.3f)", within,
            worst);

    std::normal_distribution<double> jitter(0.0, 0.002);
    std::uniform_real_distribution<double> where(0.05, 0.95);
    std::size_t close = 0, never_below = 0;
    double worst_p = 1.0;
    for (int t = 0; t < 100; ++t) {
        PointSet p;
        p.dim = 1 + rng() % 3;
        std::size_t n = 4 + rng() % 5, groups = 1 + rng() % 2;
        std::vector<std::vector<double>> centres(groups, std::vector<double>(p.dim));
        for (auto& c : centres)
            for (auto& v : c) v = where(rng);
        for (std::size_t i = 0; i < n; ++i) {
            bool stray = rng() % 4 == 0;
            const auto& c = centres[rng() % groups];
            for (std::size_t d = 0; d < p.dim; ++d) p.values.push_back(stray ? where(rng) : c[d] + jitter(rng));
        }
        Precision prec(rng() % 2 ? 16 : 32);
        auto mode = rng() % 2 ? ModelCostMode::Full : ModelCostMode::MeansOnly;
        auto r = oracle::brute_force_partition(p, prec, mode);
        auto fit = fit_mdl_gmm(p, prec, {.k_max = 3, .mode = mode, .seed = static_cast<std::uint64_t>(t)});
        double f = fit.costs.total();
        never_below += f >= r.optimum_cost - 1e-9;
        close += f <= 1.05 * r.optimum_cost + 1e-9;
        worst_p = std::max(worst_p, f / r.optimum_cost);
    }
    o.check(never_below == 100, "fit_mdl_gmm never below the partition optimum (%zu/100)", never_below);
    o.check(close == 100, "fit_mdl_gmm within 5%% of the optimum on %zu/100 point sets (worst ratio %.4f)", close,
            worst_p);
    return o;
}

// ---- 11 ----
Outcome round_trips() {
    Outcome o;
    std::mt19937_64 rng(11);
    std::size_t text_ok = 0, utf_ok = 0, cont_ok = 0, bits_ok = 0;
    const std::size_t n_text = 400, n_utf = 100, n_cont = 400, n_bits = 100;
    for (std::size_t t = 0; t < n_text; ++t) {
        SymbolString s;
        s.alphabet_size = 1 + rng() % 30;
        std::size_t n = rng() % 400;
        while (s.symbols.size() < n) {
            if (rng() % 4 == 0 && s.size() > 4) {
                std::size_t len = 2 + rng() % 8, at = rng() % (s.size() - 2);
                len = std::min(len, s.size() - at);
                std::vector<Symbol> copy(s.symbols.begin() + static_cast<long>(at),
                                         s.symbols.begin() + static_cast<long>(at + len));
                s.symbols.insert(s.symbols.end(), copy.begin(), copy.end());
            } else {
                s.symbols.push_back(static_cast<Symbol>(rng() % s.alphabet_size));
            }
        }
        auto e = greedy_alias_search(s, {.max_len = 2 + rng() % 12});
        try {
            validate(e);
            text_ok += decode(e) == s.symbols;
        } catch (const DecodeError&) {
        }
    }
    const std::vector<std::string> pieces = {"a", "b", "ab", " ", "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x98\x80", "th", "e"};
    for (std::size_t t = 0; t < n_utf; ++t) {
        std::string u;
        std::size_t n = 1 + rng() % 200;
        for (std::size_t i = 0; i < n; ++i) u += pieces[rng() % pieces.size()];
        auto src = text_from_utf8(u, {.budget = 0});
        auto e = greedy_alias_search(src.text);
        std::string back;
        for (Symbol v : decode(e)) back += src.alphabet[v];
        utf_ok += back == u;
    }
    for (std::size_t t = 0; t < n_cont; ++t) {
        DataTensor d;
        if (rng() % 3 == 0) d.shape = {1 + rng() % 40};
        else d.shape = {1 + rng() % 12, 1 + rng() % 12};
        d.channels = 1 + rng() % 4;
        std::size_t levels = 1 + rng() % 6;
        for (std::size_t i = 0; i < d.positions() * d.channels; ++i)
            d.values.push_back(rng() % 2 ? static_cast<double>(rng() % levels) / levels
                                         : std::uniform_real_distribution<double>(0, 1)(rng));
        ContinuousConfig cfg;
        const int precisions[] = {0, 8, 16, 32};
        cfg.precision_bits = precisions[rng() % 4];
        cfg.overlap = rng() % 4 == 0;
        cfg.cluster.k_max = 1 + rng() % 6;
        cfg.cluster.seed = t;
        auto enc = lcc_continuous(d, cfg);
        auto back = decode_hierarchy(enc, DecodeMode::Exact);
        bool ok = back.shape == d.shape && back.values == enc.stored;
        for (std::size_t i = 0; ok && i < d.values.size(); ++i)
            ok = enc.stored[i] == quantize_value(d.values[i], enc.precision);
        cont_ok += ok;
    }
    for (std::size_t t = 0; t < n_bits; ++t) {
        std::vector<std::uint8_t> bits(20 + rng() % 300);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() % 3 == 0);
        std::size_t w = 2 + rng() % 20;
        auto grid = make_grid(bits, fit_ratio(bits.size(), w), t);
        auto enc = lcc_continuous(grid.tensor(), scan_continuous_config({}));
        auto back = decode_hierarchy(enc, DecodeMode::Exact);
        bool ok = back.values.size() == grid.bits.size();
        for (std::size_t i = 0; ok && i < grid.bits.size(); ++i) ok = back.values[i] == grid.bits[i];
        bits_ok += ok;
    }
    std::size_t total = n_text + n_utf + n_cont + n_bits;
    std::size_t good = text_ok + utf_ok + cont_ok + bits_ok;
    o.note("symbol strings %zu/%zu, UTF-8 text %zu/%zu, continuous tensors %zu/%zu, bit grids %zu/%zu", text_ok,
           n_text, utf_ok, n_utf, cont_ok, n_cont, bits_ok, n_bits);
    o.check(good == total, "decode(encode) identity on %zu/%zu fuzzed inputs", good, total);
    return o;
}

// ---- 12 ----
Outcome prime_modulo() {
    Outcome o;
    const std::string printed =
        "qKXVSyiLIyYKyvjXMvZqevkJVy OLjPyBKpccEeQTvFMYyuRzyGBEKKuuTWhkvLdaylFRNMEHKBMxEqknvCgPycIFySsKvsXApTnqKXVS"
        "yiLIyYKyvjo pZqOOHnPYKUlWZDwlHaKEQBawWeuGZLCTKuFxWgEBBHyIWkDSKR tKlkfHmNyQydqHFxAvIUNKrtcWPWvQTmRWhGMZccZK"
        "xnoHVBdQKgOHnPYKUlWZDwlHaKEQBawWeuGZLTn";
    auto got = prime_modulo_string({2, 3, 19, 5, 11}, {250, 120, 24, 82, 10, 15, 202});
    std::size_t same = 0;
    for (std::size_t i = 0; i < std::min(got.size(), printed.size()); ++i) same += got[i] == printed[i];
    o.note("printed length %zu, generated length %zu, %zu positions agree", printed.size(), got.size(), same);
    o.note("generated: %s", got.substr(0, 60).c_str());
    o.check(got == printed, "byte-for-byte match with the printed 250-character output");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {1, "worked example, discrete", worked_discrete},
        {2, "worked example, continuous", worked_continuous},
        {3, "noise nullity", noise_nullity},
        {4, "repetition floor", repetition_floor},
        {5, "text ordering", text_ordering},
        {6, "image ordering", image_ordering},
        {7, "information-density contrast", density_contrast},
        {8, "Arecibo ranking", arecibo_ranking},
        {9, "threshold consistency", threshold_consistency},
        {10, "oracle equivalence", oracle_equivalence},
        {11, "round-trip integrity", round_trips},
        {12, "prime-modulo exactness", prime_modulo},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, "threw: %s", e.what());
        }
        std::printf("CRITERION %2d %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, seconds_since(t0));
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
