#pragma once

#include <cstddef>

#include "lcc/discrete.hpp"
#include "lcc/mdl_cluster.hpp"

// Exhaustive searches for tiny inputs. Costs go through the production
// costing functions; only the search is different.
namespace lcc::oracle {

class LimitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DiscreteLimits {
    std::size_t max_entries = 2;  // at most 2
    std::size_t max_sublen = 4;   // at most 4
    std::size_t max_length = 24;
    bool charge_container = true;  // same objective as the greedy search
};

struct DiscreteResult {
    double optimum_cost = 0.0;  // encoding_cost total, plus container cost if charged
    DiscreteEncoding witness;
    std::size_t enumerated = 0;  // (codebook, count state) pairs costed
};

// Objective shared with the greedy search.
double discrete_objective(const DiscreteEncoding& e, bool charge_container);

DiscreteResult brute_force_discrete(const SymbolString& s, const DiscreteLimits& limits = {});

struct PartitionLimits {
    std::size_t max_points = 10;
    std::size_t max_k = 3;
};

struct PartitionResult {
    double optimum_cost = 0.0;
    MdlPartition witness;
    std::size_t enumerated = 0;  // labelings costed
};

// Every assignment of the points to x or up to max_k components (component
// ids in order of first use), each costed with fitted means and variances.
PartitionResult brute_force_partition(const PointSet& points, const Precision& precision, ModelCostMode mode,
                                      const PartitionLimits& limits = {}, const PointCosts& extra = {});

}  // namespace lcc::oracle
