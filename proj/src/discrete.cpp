#include "lcc/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace lcc {

Symbol DiscreteEncoding::next_key() const {
    return static_cast<Symbol>(base_alphabet + codebook.entries.size());
}

namespace {

bool is_key(Symbol s, const DiscreteEncoding& e) {
    return s != kXSymbol && s >= e.base_alphabet && s < e.next_key();
}

}  // namespace

void validate(const DiscreteEncoding& e) {
    const auto& entries = e.codebook.entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& ent = entries[i];
        if (ent.key != e.base_alphabet + i)
            throw DecodeError("codebook key " + std::to_string(ent.key) + " out of creation order");
        if (ent.value.size() < 2) throw DecodeError("codebook value shorter than 2");
        for (Symbol v : ent.value) {
            if (v == kXSymbol || v >= ent.key)
                throw DecodeError("codebook value references a later or undefined key");
        }
    }
    std::size_t xs = 0;
    for (Symbol s : e.index) {
        if (s == kXSymbol) { ++xs; continue; }
        if (s >= e.next_key()) throw DecodeError("undefined key " + std::to_string(s) + " in index");
    }
    if (xs != e.residual.size())
        throw DecodeError("residual length " + std::to_string(e.residual.size()) +
                          " does not match x count " + std::to_string(xs));
    for (Symbol r : e.residual)
        if (r >= e.base_alphabet) throw DecodeError("residual symbol outside base alphabet");
}

std::vector<Symbol> decode(const DiscreteEncoding& e) {
    validate(e);
    // Expansions are built in creation order, so each value only needs
    // lookups of keys that were already expanded.
    std::vector<std::vector<Symbol>> expansion(e.codebook.entries.size());
    for (std::size_t i = 0; i < e.codebook.entries.size(); ++i) {
        for (Symbol v : e.codebook.entries[i].value) {
            if (v < e.base_alphabet) expansion[i].push_back(v);
            else {
                const auto& sub = expansion[v - e.base_alphabet];
                expansion[i].insert(expansion[i].end(), sub.begin(), sub.end());
            }
        }
    }
    std::vector<Symbol> out;
    std::size_t r = 0;
    for (Symbol s : e.index) {
        if (s == kXSymbol) out.push_back(e.residual[r++]);
        else if (is_key(s, e)) {
            const auto& sub = expansion[s - e.base_alphabet];
            out.insert(out.end(), sub.begin(), sub.end());
        } else {
            out.push_back(s);
        }
    }
    return out;
}

double codebook_entry_cost(std::size_t value_len, std::size_t base_alphabet, std::size_t entry_pos) {
    double choices = static_cast<double>(base_alphabet + entry_pos);
    return choices > 1.0 ? static_cast<double>(value_len) * std::log2(choices) : 0.0;
}

double codebook_cost(const Codebook& c, std::size_t base_alphabet) {
    double bits = 0.0;
    for (std::size_t i = 0; i < c.entries.size(); ++i)
        bits += codebook_entry_cost(c.entries[i].value.size(), base_alphabet, i);
    return bits;
}

double container_cost(const Codebook& c, std::size_t index_len) {
    double bits = 0.0;
    for (const auto& e : c.entries) bits += std::log2(static_cast<double>(e.value.size()));
    bits += static_cast<double>(c.entries.size()) * std::log2(static_cast<double>(index_len) + 1.0);
    return bits;
}

CostBreakdown encoding_cost(const DiscreteEncoding& e) {
    return CostBreakdown::make(codebook_cost(e.codebook, e.base_alphabet),
                               empirical_code_length(e.index),
                               empirical_code_length(e.residual));
}

DiscreteEncoding identity_encoding(const SymbolString& s) {
    DiscreteEncoding e;
    e.base_alphabet = s.alphabet_size;
    e.index.assign(s.symbols.size(), kXSymbol);
    e.residual = s.symbols;
    return e;
}

std::vector<std::size_t> find_occurrences(const std::vector<Symbol>& s, const std::vector<Symbol>& pat) {
    std::vector<std::size_t> pos;
    if (pat.empty() || pat.size() > s.size()) return pos;
    std::size_t i = 0;
    while (i + pat.size() <= s.size()) {
        if (std::equal(pat.begin(), pat.end(), s.begin() + static_cast<std::ptrdiff_t>(i))) {
            pos.push_back(i);
            i += pat.size();
        } else {
            ++i;
        }
    }
    return pos;
}

namespace {

// Incremental view of the mixed string the search rewrites. L(M) is the
// empirical code length of the whole string, which equals L(I) + L(X) of the
// encoding obtained by turning the remaining base symbols into x.
struct SearchState {
    std::size_t base = 0;
    std::vector<Symbol> m;
    std::vector<std::size_t> counts;  // per symbol id (base + keys)
    Codebook codebook;
    double sum_clogc = 0.0;
    double model = 0.0;
    double container = 0.0;
    bool charge_container = true;

    double n() const { return static_cast<double>(m.size()); }
    double code_length() const { return std::max(0.0, xlog2x(n()) - sum_clogc); }
    double objective() const { return code_length() + model + (charge_container ? container : 0.0); }

    void init(const std::vector<Symbol>& s, std::size_t alphabet, bool charge) {
        base = alphabet;
        m = s;
        counts.assign(alphabet, 0);
        for (Symbol v : s) ++counts[v];
        sum_clogc = 0.0;
        for (auto c : counts) sum_clogc += xlog2x(static_cast<double>(c));
        charge_container = charge;
    }

    double occurrence_bits(const std::vector<Symbol>& pat) const {
        double bits = 0.0;
        for (Symbol v : pat) bits += std::log2(n() / static_cast<double>(counts[v]));
        return bits;
    }

    // Fill every field of the decision for aliasing `n_occ` occurrences of pat.
    void simulate(const std::vector<Symbol>& pat, std::size_t n_occ, AliasDecision& d) const {
        d.substring = pat;
        d.occurrences = n_occ;
        double nn = static_cast<double>(n_occ);
        std::unordered_map<Symbol, std::size_t> mult;
        for (Symbol v : pat) ++mult[v];
        double new_sum = sum_clogc + xlog2x(nn);
        for (const auto& [sym, k] : mult) {
            double c = static_cast<double>(counts[sym]);
            new_sum += xlog2x(c - nn * static_cast<double>(k)) - xlog2x(c);
        }
        double n_new = n() - nn * static_cast<double>(pat.size() - 1);
        double l_new = std::max(0.0, xlog2x(n_new) - new_sum);
        double l_old = code_length();
        d.l = occurrence_bits(pat);
        d.c1 = l_old - nn * d.l;
        d.c2 = l_new;
        d.threshold = d.l > 0.0 ? 1.0 + (d.c2 - d.c1) / d.l : std::numeric_limits<double>::infinity();
        std::size_t e = codebook.entries.size();
        double dmodel = codebook_entry_cost(pat.size(), base, e);
        double dcont = std::log2(static_cast<double>(pat.size())) +
                       static_cast<double>(e + 1) * std::log2(n_new + 1.0) -
                       static_cast<double>(e) * std::log2(n() + 1.0);
        d.cost_delta = (l_new - l_old) + dmodel + (charge_container ? dcont : 0.0);
    }

    void apply(const std::vector<Symbol>& pat, const std::vector<std::size_t>& occ) {
        Symbol key = static_cast<Symbol>(base + codebook.entries.size());
        model += codebook_entry_cost(pat.size(), base, codebook.entries.size());
        codebook.entries.push_back({key, pat});
        std::vector<Symbol> out;
        out.reserve(m.size());
        std::size_t i = 0, k = 0;
        while (i < m.size()) {
            if (k < occ.size() && occ[k] == i) {
                out.push_back(key);
                i += pat.size();
                ++k;
            } else {
                out.push_back(m[i++]);
            }
        }
        m.swap(out);
        for (Symbol v : pat) counts[v] -= occ.size();
        counts.push_back(occ.size());
        sum_clogc = 0.0;
        for (auto c : counts) sum_clogc += xlog2x(static_cast<double>(c));
        container = container_cost(codebook, m.size());
    }
};

struct SubKey {
    std::uint32_t pos;
    std::uint32_t len;
};

struct Candidate {
    std::vector<Symbol> pat;
    std::size_t n;
    double score;
};

std::vector<Candidate> collect_candidates(const SearchState& st, std::size_t max_len) {
    const auto& m = st.m;
    auto hash = [&m](const SubKey& k) {
        std::uint64_t h = 1469598103934665603ull ^ k.len;
        for (std::uint32_t i = 0; i < k.len; ++i) {
            h ^= m[k.pos + i];
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    };
    auto eq = [&m](const SubKey& a, const SubKey& b) {
        return a.len == b.len && std::equal(m.begin() + a.pos, m.begin() + a.pos + a.len, m.begin() + b.pos);
    };
    struct Stat {
        std::size_t count = 0;
        std::size_t next_free = 0;
    };
    std::unordered_map<SubKey, Stat, decltype(hash), decltype(eq)> table(m.size() * 2 + 16, hash, eq);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t len = 2; len <= max_len && i + len <= m.size(); ++len) {
            auto& s = table[SubKey{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(len)}];
            if (i >= s.next_free) {
                ++s.count;
                s.next_free = i + len;
            }
        }
    }
    std::vector<Candidate> out;
    for (const auto& [k, s] : table) {
        if (s.count < 2) continue;
        Candidate c;
        c.pat.assign(m.begin() + k.pos, m.begin() + k.pos + k.len);
        c.n = s.count;
        c.score = static_cast<double>(s.count - 1) * st.occurrence_bits(c.pat);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.pat < b.pat;
    });
    return out;
}

}  // namespace

DiscreteEncoding greedy_alias_search_traced(const SymbolString& s, const SearchConfig& cfg,
                                            SearchTrace* trace) {
    if (cfg.max_len < 2) throw std::invalid_argument("max_len must be at least 2");
    SearchState st;
    st.init(s.symbols, s.alphabet_size, cfg.charge_container);

    bool changed_any = true;
    while (changed_any) {
        changed_any = false;
        auto cands = collect_candidates(st, cfg.max_len);
        bool stale = false;
        for (auto& c : cands) {
            AliasDecision d;
            std::vector<std::size_t> occ;
            if (stale) {
                // Table counts bound the current counts from above.
                std::size_t bound = c.n;
                for (Symbol v : c.pat)
                    bound = std::min(bound, st.counts[v] / static_cast<std::size_t>(
                                                std::count(c.pat.begin(), c.pat.end(), v)));
                if (bound < 2) continue;
                st.simulate(c.pat, bound, d);
                if (d.cost_delta >= 0.0) continue;
                occ = find_occurrences(st.m, c.pat);
                if (occ.size() < 2) continue;
                st.simulate(c.pat, occ.size(), d);
            } else {
                st.simulate(c.pat, c.n, d);
                if (d.cost_delta < 0.0) occ = find_occurrences(st.m, c.pat);
            }
            if (trace) trace->decisions.push_back(d);
            if (d.cost_delta < 0.0) {
                st.apply(c.pat, occ);
                stale = true;
                changed_any = true;
            }
        }
    }

    DiscreteEncoding e;
    e.base_alphabet = s.alphabet_size;
    e.codebook = std::move(st.codebook);
    e.index.reserve(st.m.size());
    for (Symbol v : st.m) {
        if (v < s.alphabet_size) {
            e.index.push_back(kXSymbol);
            e.residual.push_back(v);
        } else {
            e.index.push_back(v);
        }
    }
    return e;
}

DiscreteEncoding greedy_alias_search(const SymbolString& s, const SearchConfig& cfg) {
    return greedy_alias_search_traced(s, cfg, nullptr);
}

AliasDecision alias_threshold(const std::vector<Symbol>& current, const std::vector<Symbol>& substring,
                              std::size_t base_alphabet, std::size_t entries, const SearchConfig& cfg) {
    SearchState st;
    Symbol top = static_cast<Symbol>(base_alphabet + entries);
    for (Symbol v : current)
        if (v >= top) throw std::invalid_argument("symbol outside base alphabet and existing keys");
    st.base = base_alphabet;
    st.m = current;
    st.counts.assign(top, 0);
    for (Symbol v : current) ++st.counts[v];
    for (auto c : st.counts) st.sum_clogc += xlog2x(static_cast<double>(c));
    st.charge_container = cfg.charge_container;
    // Existing entries only matter through their count; their values are not needed.
    for (std::size_t i = 0; i < entries; ++i)
        st.codebook.entries.push_back({static_cast<Symbol>(base_alphabet + i), {0, 0}});
    auto occ = find_occurrences(current, substring);
    if (occ.empty()) throw std::invalid_argument("substring does not occur");
    AliasDecision d;
    st.simulate(substring, occ.size(), d);
    return d;
}

CostBreakdown lcc_text(const SymbolString& s, const SearchConfig& cfg) {
    if (s.symbols.empty()) return {};
    return encoding_cost(greedy_alias_search(s, cfg));
}

}  // namespace lcc
