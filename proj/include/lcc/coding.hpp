#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace lcc {

using Symbol = std::uint32_t;

struct SymbolString {
    std::vector<Symbol> symbols;
    std::size_t alphabet_size = 0;

    std::size_t size() const { return symbols.size(); }
    bool valid() const;
};

// All quantities in bits. lcc_score is always model_cost + idx_cost.
struct CostBreakdown {
    double model_cost = 0.0;
    double idx_cost = 0.0;
    double residual_cost = 0.0;
    double lcc_score = 0.0;

    static CostBreakdown make(double model, double idx, double residual);
    double total() const { return model_cost + idx_cost + residual_cost; }
    CostBreakdown& operator+=(const CostBreakdown& o);
};

struct Precision {
    int bits_per_scalar = 32;

    explicit Precision(int b = 32);
    // Width of one quantization cell on the unit interval.
    double epsilon() const;
};

class DegenerateCovariance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double empirical_code_length(std::span<const Symbol> s);
double empirical_code_length(const SymbolString& s);

double categorical_code_length(std::span<const std::size_t> counts);

// N log2 N - sum c log2 c, the form used for incremental updates.
double xlog2x(double c);

Precision infer_precision(std::span<const double> values);

// Smallest admissible per-dimension variance. Chosen so that a component
// collapsed onto a point codes that point in zero bits.
double variance_floor(const Precision& p);

double gaussian_residual_bits(std::span<const double> x, std::span<const double> mean,
                              std::span<const double> diag_var, const Precision& precision);

}  // namespace lcc
