#pragma once

#include <vector>

#include "oreo/core.hpp"

namespace oreo {

struct PartitionBudget {
    std::size_t k = 1;
};

struct LayoutGenOptions {
    // Candidate cut predicates per tree fit; extra cuts are thinned
    // deterministically by stride.
    std::size_t max_cuts = 256;
    int zorder_bits = 10;
};

// Greedy Qd-tree construction. Candidate cuts are the boundary comparisons of
// the workload predicates; each accepted split strictly increases the
// estimated row mass skipped over the workload. min_leaf_rows == 0 picks
// max(1, rows / (4k)).
Layout generate_qdtree(const Dataset& sample, const std::vector<Query>& workload,
                       PartitionBudget budget, std::size_t min_leaf_rows = 0,
                       const LayoutGenOptions& opts = {});

// Workload-aware Z-ordering: keys interleave the top three most queried
// columns, partitions are equal-count cuts of the sorted keys.
Layout generate_zorder(const Dataset& sample, const std::vector<Query>& workload,
                       PartitionBudget budget, const LayoutGenOptions& opts = {});

struct CostVector {
    std::vector<double> values;

    double mean() const {
        if (values.empty()) return 0.0;
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
};

// Per-query metadata cost of the layout (query_cost for each query).
CostVector eval_skipped(const Layout& layout, const std::vector<Query>& queries);

// Qd-tree fitted to exactly one template's queries.
Layout best_layout_for_template(const Dataset& sample, const std::vector<Query>& template_queries,
                                PartitionBudget budget);

}  // namespace oreo
