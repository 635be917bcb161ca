#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "lcc/coding.hpp"

namespace lcc {

// Outlier marker in index strings. Never a valid base symbol or key.
inline constexpr Symbol kXSymbol = std::numeric_limits<Symbol>::max();

struct CodebookEntry {
    Symbol key = 0;
    std::vector<Symbol> value;
};

// Entries are kept in creation order: a value may only reference the base
// alphabet and keys created before it.
struct Codebook {
    std::vector<CodebookEntry> entries;
};

struct DiscreteEncoding {
    std::size_t base_alphabet = 0;
    Codebook codebook;
    std::vector<Symbol> index;     // keys, x, and (mid-search only) base symbols
    std::vector<Symbol> residual;  // base symbols, one per x in index

    // Key id assigned to the next new entry.
    Symbol next_key() const;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<Symbol> decode(const DiscreteEncoding& e);

// Throws DecodeError if any structural invariant of the encoding is violated.
void validate(const DiscreteEncoding& e);

// Bits to specify the codebook. Entry e (0-based, creation order) costs
// len(value) * log2(base_alphabet + e): each symbol is drawn uniformly from
// the symbols that exist when the entry is created. Keys are implicit.
double codebook_cost(const Codebook& c, std::size_t base_alphabet);
double codebook_entry_cost(std::size_t value_len, std::size_t base_alphabet, std::size_t entry_pos);

// Length prefixes and per-key frequency-table entries needed to transmit the
// triple. Reported separately; excluded from the breakdown fields.
double container_cost(const Codebook& c, std::size_t index_len);

CostBreakdown encoding_cost(const DiscreteEncoding& e);

struct SearchConfig {
    std::size_t max_len = 10;
    // Include container_cost in the objective the search minimises.
    bool charge_container = true;
};

DiscreteEncoding identity_encoding(const SymbolString& s);
DiscreteEncoding greedy_alias_search(const SymbolString& s, const SearchConfig& cfg = {});

struct AliasDecision {
    std::vector<Symbol> substring;
    std::size_t occurrences = 0;
    double l = 0.0;          // bits to describe one occurrence under current frequencies
    double c1 = 0.0;         // everything except the occurrences, before aliasing
    double c2 = 0.0;         // the whole string after aliasing, key occurrences included
    double threshold = 0.0;  // 1 + (c2 - c1) / l
    double cost_delta = 0.0; // simulated change of the search objective
    bool predicted_alias() const { return static_cast<double>(occurrences) > threshold; }
    bool beneficial() const { return cost_delta < 0.0; }
    bool agrees() const { return predicted_alias() == beneficial(); }
};

// `current` is the mixed string the search works on (base symbols and keys).
// `entries` is the number of codebook entries that already exist.
AliasDecision alias_threshold(const std::vector<Symbol>& current, const std::vector<Symbol>& substring,
                              std::size_t base_alphabet, std::size_t entries = 0,
                              const SearchConfig& cfg = {});

// Every decision the search evaluated, in order. Used for diagnostics.
struct SearchTrace {
    std::vector<AliasDecision> decisions;
};

DiscreteEncoding greedy_alias_search_traced(const SymbolString& s, const SearchConfig& cfg,
                                            SearchTrace* trace);

CostBreakdown lcc_text(const SymbolString& s, const SearchConfig& cfg = {});

// Leftmost-first non-overlapping occurrence starts of `pat` in `s`.
std::vector<std::size_t> find_occurrences(const std::vector<Symbol>& s, const std::vector<Symbol>& pat);

}  // namespace lcc
