#include "lcc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace lcc::oracle {

double discrete_objective(const DiscreteEncoding& e, bool charge_container) {
    double bits = encoding_cost(e).total();
    if (charge_container) bits += container_cost(e.codebook, e.index.size());
    return bits;
}

namespace {

using Seq = std::vector<Symbol>;

bool occurs_in(const Seq& s, const Seq& pat) {
    return std::search(s.begin(), s.end(), pat.begin(), pat.end()) != s.end();
}

Seq expand(const Seq& value, const Codebook& cb, std::size_t base) {
    Seq out;
    for (Symbol v : value) {
        if (v < base) {
            out.push_back(v);
        } else {
            Seq inner = expand(cb.entries.at(v - base).value, cb, base);
            out.insert(out.end(), inner.begin(), inner.end());
        }
    }
    return out;
}

// Values over `symbols` of length 2..max_len whose expansion occurs in s.
void grow_values(const Seq& s, const Codebook& cb, std::size_t base, const Seq& symbols, std::size_t max_len,
                 Seq& cur, std::vector<Seq>& out) {
    if (cur.size() >= 2) out.push_back(cur);
    if (cur.size() == max_len) return;
    for (Symbol sym : symbols) {
        cur.push_back(sym);
        if (occurs_in(s, expand(cur, cb, base))) grow_values(s, cb, base, symbols, max_len, cur, out);
        cur.pop_back();
    }
}

// State key: [uses of entry 0, uses of entry 1, residual count per base symbol].
using StateKey = std::vector<std::uint16_t>;

struct Parent {
    std::size_t from = 0;
    StateKey prev;
    int action = -1;  // -1: base symbol to the residual, j: key of entry j
};

struct Best {
    double cost = INFINITY;
    Codebook codebook;
    std::vector<std::map<StateKey, Parent>> layers;
    StateKey final_state;
};

void run_codebook(const Seq& s, std::size_t base, const Codebook& cb, const DiscreteLimits& lim, Best& best,
                  std::size_t& enumerated) {
    std::size_t n = s.size();
    std::vector<Seq> exp;
    for (const auto& e : cb.entries) exp.push_back(expand(e.value, cb, base));
    std::vector<std::map<StateKey, Parent>> layers(n + 1);
    layers[0][StateKey(2 + base, 0)] = Parent{};
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [key, _] : layers[i]) {
            StateKey next = key;
            ++next[2 + s[i]];
            layers[i + 1].try_emplace(next, Parent{i, key, -1});
            for (std::size_t j = 0; j < exp.size(); ++j) {
                const auto& e = exp[j];
                if (i + e.size() > n || !std::equal(e.begin(), e.end(), s.begin() + static_cast<long>(i))) continue;
                StateKey nk = key;
                ++nk[j];
                layers[i + e.size()].try_emplace(nk, Parent{i, key, static_cast<int>(j)});
            }
        }
    }
    double model = codebook_cost(cb, base);
    for (const auto& [key, _] : layers[n]) {
        ++enumerated;
        std::size_t nx = 0;
        std::vector<std::size_t> resid(base);
        for (std::size_t a = 0; a < base; ++a) {
            resid[a] = key[2 + a];
            nx += resid[a];
        }
        std::vector<std::size_t> idx = {key[0], key[1], nx};
        double cost = model + categorical_code_length(idx) + categorical_code_length(resid);
        if (lim.charge_container) cost += container_cost(cb, key[0] + key[1] + nx);
        if (cost < best.cost - 1e-12) {
            best.cost = cost;
            best.codebook = cb;
            best.layers = layers;
            best.final_state = key;
        }
    }
}

DiscreteEncoding rebuild(const Seq& s, std::size_t base, const Best& best) {
    DiscreteEncoding e;
    e.base_alphabet = base;
    e.codebook = best.codebook;
    std::size_t pos = s.size();
    StateKey key = best.final_state;
    std::vector<int> actions;
    std::vector<std::size_t> starts;
    while (pos > 0) {
        const Parent& p = best.layers[pos].at(key);
        actions.push_back(p.action);
        starts.push_back(p.from);
        pos = p.from;
        key = p.prev;
    }
    for (std::size_t k = actions.size(); k-- > 0;) {
        if (actions[k] < 0) {
            e.index.push_back(kXSymbol);
            e.residual.push_back(s[starts[k]]);
        } else {
            e.index.push_back(static_cast<Symbol>(base + static_cast<std::size_t>(actions[k])));
        }
    }
    return e;
}

}  // namespace

DiscreteResult brute_force_discrete(const SymbolString& s, const DiscreteLimits& lim) {
    if (lim.max_entries > 2) throw LimitError("brute_force_discrete: at most 2 codebook entries");
    if (lim.max_sublen > 4) throw LimitError("brute_force_discrete: substrings of at most 4 symbols");
    if (s.symbols.size() > lim.max_length) throw LimitError("brute_force_discrete: string too long");
    if (!s.valid()) throw std::invalid_argument("symbol outside the alphabet");
    const Seq& str = s.symbols;
    std::size_t base = s.alphabet_size;

    DiscreteResult res;
    Best best;
    Codebook empty;
    run_codebook(str, base, empty, lim, best, res.enumerated);

    if (lim.max_entries >= 1 && lim.max_sublen >= 2 && !str.empty()) {
        Seq base_syms;
        for (Symbol a = 0; a < base; ++a) base_syms.push_back(a);
        std::vector<Seq> firsts;
        Seq cur;
        grow_values(str, empty, base, base_syms, lim.max_sublen, cur, firsts);
        for (const auto& v1 : firsts) {
            Codebook one;
            one.entries.push_back({static_cast<Symbol>(base), v1});
            run_codebook(str, base, one, lim, best, res.enumerated);
            if (lim.max_entries < 2) continue;
            Seq syms = base_syms;
            syms.push_back(static_cast<Symbol>(base));
            std::vector<Seq> seconds;
            grow_values(str, one, base, syms, lim.max_sublen, cur, seconds);
            for (const auto& v2 : seconds) {
                if (v2 == v1) continue;
                Codebook two = one;
                two.entries.push_back({static_cast<Symbol>(base + 1), v2});
                run_codebook(str, base, two, lim, best, res.enumerated);
            }
        }
    }

    res.witness = rebuild(str, base, best);
    res.optimum_cost = discrete_objective(res.witness, lim.charge_container);
    if (std::abs(res.optimum_cost - best.cost) > 1e-6)
        throw std::logic_error("oracle witness does not reproduce its cost");
    return res;
}

PartitionResult brute_force_partition(const PointSet& points, const Precision& precision, ModelCostMode mode,
                                      const PartitionLimits& lim, const PointCosts& extra) {
    std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("brute_force_partition needs at least one point");
    if (n > lim.max_points) throw LimitError("brute_force_partition: too many points");
    if (lim.max_k > 3) throw LimitError("brute_force_partition: at most 3 components");

    PartitionResult res;
    res.optimum_cost = INFINITY;
    std::vector<int> labels(n, kOutlier);
    auto visit = [&](auto& self, std::size_t i, int used) -> void {
        if (i == n) {
            ++res.enumerated;
            auto part = partition_from_labels(points, labels, precision, mode, extra);
            double cost = part.costs.total();
            if (cost < res.optimum_cost - 1e-12) {
                res.optimum_cost = cost;
                res.witness = std::move(part);
            }
            return;
        }
        int top = std::min(used + 1, static_cast<int>(lim.max_k));
        for (int l = kOutlier; l < top; ++l) {
            labels[i] = l;
            self(self, i + 1, std::max(used, l + 1));
        }
        labels[i] = kOutlier;
    };
    visit(visit, 0, 0);
    return res;
}

}  // namespace lcc::oracle
