#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "oreo/types.hpp"

namespace oreo {

// Binary decision tree routing. Rows satisfying a node's cut go to the true
// child. Leaves name a partition index.
struct QdNode {
    int partition = -1;  // >= 0 for leaves
    Predicate cut;
    int on_true = -1;
    int on_false = -1;

    bool is_leaf() const { return partition >= 0; }
};

struct QdTreeRouting {
    std::vector<QdNode> nodes;  // nodes[0] is the root
    int leaf_count = 0;
};

// Bit-interleaved multidimensional sort key over rank-normalized columns,
// cut into near-equal partitions at key boundaries.
struct ZOrderRouting {
    std::vector<int> columns;  // at most 3, descending query frequency
    int bits_per_column = 10;
    std::vector<std::vector<double>> bucket_edges;  // per column, ascending
    std::vector<std::uint64_t> key_cuts;            // ascending, partition = #cuts <= key
};

struct Layout {
    std::int64_t id = 0;
    std::int64_t created_at = 0;
    bool fitted_on_sample = true;
    std::size_t fitted_rows = 0;
    std::variant<QdTreeRouting, ZOrderRouting> routing;
    std::vector<PartitionMeta> partitions;

    bool is_qdtree() const { return std::holds_alternative<QdTreeRouting>(routing); }
    std::size_t total_rows() const {
        std::size_t n = 0;
        for (const auto& p : partitions) n += p.row_count;
        return n;
    }
};

std::uint64_t zorder_key(const ZOrderRouting& z, const Dataset& data, std::size_t row);

// Partition index a record routes to.
int route_row(const Layout& layout, const Dataset& data, std::size_t row);

}  // namespace oreo
