#include "lcc/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace lcc {

bool SymbolString::valid() const {
    return std::all_of(symbols.begin(), symbols.end(),
                       [&](Symbol s) { return s < alphabet_size; });
}

CostBreakdown CostBreakdown::make(double model, double idx, double residual) {
    CostBreakdown c;
    c.model_cost = model;
    c.idx_cost = idx;
    c.residual_cost = residual;
    c.lcc_score = model + idx;
    return c;
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
    model_cost += o.model_cost;
    idx_cost += o.idx_cost;
    residual_cost += o.residual_cost;
    lcc_score = model_cost + idx_cost;
    return *this;
}

Precision::Precision(int b) : bits_per_scalar(b) {
    if (b < 1 || b > 64) throw std::invalid_argument("precision must be in [1, 64] bits");
}

double Precision::epsilon() const { return std::ldexp(1.0, -bits_per_scalar); }

double xlog2x(double c) { return c > 0.0 ? c * std::log2(c) : 0.0; }

double empirical_code_length(std::span<const Symbol> s) {
    if (s.empty()) return 0.0;
    std::unordered_map<Symbol, std::size_t> counts;
    for (Symbol v : s) ++counts[v];
    double n = static_cast<double>(s.size());
    double bits = xlog2x(n);
    for (const auto& [sym, c] : counts) bits -= xlog2x(static_cast<double>(c));
    return std::max(0.0, bits);
}

double empirical_code_length(const SymbolString& s) { return empirical_code_length(s.symbols); }

double categorical_code_length(std::span<const std::size_t> counts) {
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    if (n <= 0.0) return 0.0;
    double bits = 0.0;
    for (auto c : counts)
        if (c > 0) bits += static_cast<double>(c) * std::log2(n / static_cast<double>(c));
    return bits;
}

Precision infer_precision(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("infer_precision needs at least one value");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < 2) return Precision(1);
    double lo = v.front(), hi = v.back();
    for (int b = 1; b < 32; ++b) {
        double levels = std::ldexp(1.0, b) - 1.0;
        bool ok = true;
        long long prev = -1;
        for (double x : v) {
            auto q = static_cast<long long>(std::llround((x - lo) / (hi - lo) * levels));
            if (q == prev) { ok = false; break; }
            prev = q;
        }
        if (ok) return Precision(b);
    }
    return Precision(32);
}

double variance_floor(const Precision& p) {
    double e = p.epsilon();
    return e * e / (2.0 * std::numbers::pi);
}

double gaussian_residual_bits(std::span<const double> x, std::span<const double> mean,
                              std::span<const double> diag_var, const Precision& precision) {
    if (x.size() != mean.size() || x.size() != diag_var.size())
        throw std::invalid_argument("dimension mismatch in gaussian_residual_bits");
    double floor = variance_floor(precision);
    double log2e = std::numbers::log2e;
    double bits = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = diag_var[i];
        if (!(v >= floor * (1.0 - 1e-9))) throw DegenerateCovariance("variance below floor");
        double d = x[i] - mean[i];
        // -log2 of density times cell width, per dimension
        bits += 0.5 * std::log2(2.0 * std::numbers::pi * v) + 0.5 * d * d / v * log2e +
                static_cast<double>(precision.bits_per_scalar);
    }
    return std::max(0.0, bits);
}

}  // namespace lcc
