#pragma once

#include <span>

#include "oreo/layout.hpp"
#include "oreo/types.hpp"

namespace oreo {

// Exact per-column extrema / distinct summaries over the given rows. The
// distinct set of a categorical column is truncated at `distinct_cap`, which
// flips the overflow flag (matching then assumes any value possible).
// Throws "empty partition" on an empty row set.
PartitionMeta partition_meta(const Dataset& data, std::span<const std::size_t> row_ids,
                             std::size_t distinct_cap = kDistinctCap);

// Conservative skip test: returns false only if no row consistent with the
// metadata can satisfy the conjunction.
bool partition_matches(const PartitionMeta& meta, const Query& query);

// Fraction of row mass in partitions that cannot be skipped, in [0, 1].
// Computed from metadata only; an empty conjunction costs 1.0 (full scan).
double query_cost(const Layout& layout, const Query& query);

// Brute-force oracle: exact fraction of rows satisfying the conjunction.
double exact_fraction(const Dataset& data, const Query& query);

}  // namespace oreo
