#pragma once

#include <cstdint>
#include <vector>

#include "oreo/layout_gen.hpp"

namespace oreo {

// State-machine workload: dwell in one template for a geometric number of
// queries, then move to another. Successive permutation sweeps guarantee
// every template appears once the stream has enough segments.
struct TemplateWorkloadSpec {
    std::size_t num_templates = 20;
    std::size_t total_queries = 30000;
    // Geometric switch probability per query; 0 picks total/templates as the
    // mean dwell.
    double dwell_p = 0.0;
    std::size_t num_columns = 16;
    double sel_min = 0.01;
    double sel_max = 0.05;
    std::size_t max_cols_per_template = 2;
};

std::vector<Query> gen_template_workload(const TemplateWorkloadSpec& spec, std::uint64_t seed);

// Uniform dataset generator: `cat_cols` trailing columns are categorical
// with the given cardinality, the rest numeric U(0, 1).
Dataset gen_uniform_dataset(std::size_t rows, std::size_t numeric_cols, std::size_t cat_cols,
                            std::size_t cat_cardinality, std::uint64_t seed);

// Synthetic k-dimensional round workload over U(0,1)^k: round i issues Q
// point queries on column i. Costs follow the volume model over
// axis-aligned partitions, so the analytic totals are exact.
struct SyntheticKDimSpec {
    std::size_t k = 8;
    std::size_t partitions = 64;  // |B|
    std::size_t queries_per_round = 500;
};

struct KDimInstance {
    SyntheticKDimSpec spec;
    std::vector<Query> workload;  // template_id = round index
    // Volume cost of each query under the dynamic strategy (column i split
    // into |B| equal intervals during round i): always 1/|B|.
    double dynamic_total = 0.0;
    // Volume cost per query under a Qd-tree fitted to the full workload.
    std::vector<double> static_costs;
    double static_total = 0.0;
    double analytic_dynamic_bound = 0.0;  // Q k / |B|
    double analytic_static_bound = 0.0;   // Q k / |B|^{1/k}
};

KDimInstance gen_kdim_instance(const SyntheticKDimSpec& spec, std::uint64_t seed);

// Volume of each leaf box of an axis-aligned Qd-tree over [0,1]^dims, and
// the per-dimension interval of each leaf. Used by the k-dim oracle.
struct LeafBoxes {
    std::vector<std::vector<std::pair<double, double>>> boxes;  // [leaf][dim] half-open
    std::vector<double> volumes;
};

LeafBoxes qdtree_leaf_boxes(const Layout& layout, std::size_t dims);

// One-level star schema: a fact table joined to one dimension table.
struct StarSchemaSpec {
    std::size_t fact_rows = 20000;
    std::size_t dim_rows = 2048;
    std::size_t dim_partitions = 32;
    std::size_t num_templates = 6;
    std::size_t total_queries = 2000;
    double dim_sel = 0.05;   // width of dimension-attribute ranges
    double fact_sel = 0.30;  // width of fact-measure ranges
};

struct StarSchemaInstance {
    Dataset fact;  // column 0: foreign key, then measures
    Dataset dim;   // column 0: join key, column 1: correlated attribute
    Layout dim_layout;
    int fact_fk_col = 0;
    int dim_jk_col = 0;
    std::vector<Query> plain;      // fact predicates only
    std::vector<Query> augmented;  // plain + induced join-key range
};

StarSchemaInstance gen_star_schema_instance(const StarSchemaSpec& spec, std::uint64_t seed);

// Augments a fact query with the join-key envelope of the dimension
// partitions matching `dim_predicates` (one join level). No matching
// partition appends an empty In set, making the fact cost 0.
Query dip_transform(const Query& fact_query, const Layout& dim_layout,
                    const std::vector<Predicate>& dim_predicates, int dim_join_col,
                    int fact_fk_col);

}  // namespace oreo
