#include "oreo/layout_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace oreo {

namespace {

struct Cut {
    int column;
    PredOp op;  // Lt/Le for numeric boundaries, Eq for categorical codes
    double value;

    Predicate predicate() const {
        Predicate p;
        p.column = column;
        p.op = op;
        p.lo = p.hi = value;
        return p;
    }
    bool operator<(const Cut& o) const {
        if (column != o.column) return column < o.column;
        if (value != o.value) return value < o.value;
        return static_cast<int>(op) < static_cast<int>(o.op);
    }
    bool operator==(const Cut& o) const {
        return column == o.column && op == o.op && value == o.value;
    }
};

// Boundary comparisons contributed by one predicate.
void collect_cuts(const Predicate& p, ColumnKind kind, std::set<Cut>& out) {
    if (kind == ColumnKind::Categorical) {
        if (p.op == PredOp::In) {
            for (double v : p.in_values) out.insert({p.column, PredOp::Eq, v});
        } else {
            out.insert({p.column, PredOp::Eq, p.lo});
        }
        return;
    }
    switch (p.op) {
        case PredOp::Eq:
            out.insert({p.column, PredOp::Lt, p.lo});
            out.insert({p.column, PredOp::Le, p.lo});
            break;
        case PredOp::Lt:
        case PredOp::Ge:
            out.insert({p.column, PredOp::Lt, p.lo});
            break;
        case PredOp::Le:
        case PredOp::Gt:
            out.insert({p.column, PredOp::Le, p.lo});
            break;
        case PredOp::Between:
            out.insert({p.column, PredOp::Lt, p.lo});
            out.insert({p.column, PredOp::Le, p.hi});
            break;
        case PredOp::In:
            for (double v : p.in_values) {
                out.insert({p.column, PredOp::Lt, v});
                out.insert({p.column, PredOp::Le, v});
            }
            break;
    }
}

struct LeafState {
    std::vector<std::size_t> rows;
    PartitionMeta meta;
    // Per-column sorted values of the leaf's rows (split-count lookups).
    std::vector<std::vector<double>> sorted;
    int node = -1;  // index into the tree node vector
    double best_gain = 0.0;
    std::size_t best_cut = SIZE_MAX;

    void build(const Dataset& data) {
        meta = partition_meta(data, rows);
        sorted.assign(data.num_columns(), {});
        for (std::size_t c = 0; c < data.num_columns(); ++c) {
            auto& v = sorted[c];
            v.reserve(rows.size());
            for (std::size_t r : rows) v.push_back(data.value(c, r));
            std::sort(v.begin(), v.end());
        }
    }

    std::size_t count_true(const Cut& cut) const {
        const auto& v = sorted[cut.column];
        switch (cut.op) {
            case PredOp::Lt:
                return std::lower_bound(v.begin(), v.end(), cut.value) - v.begin();
            case PredOp::Le:
                return std::upper_bound(v.begin(), v.end(), cut.value) - v.begin();
            case PredOp::Eq: {
                auto range = std::equal_range(v.begin(), v.end(), cut.value);
                return range.second - range.first;
            }
            default:
                return 0;
        }
    }
};

// Child metadata for gain estimation: inherited from the parent, refined on
// the cut column only (exact bounds from the sorted column). Committed
// splits recompute exact metadata from rows.
void refine_children(const LeafState& leaf, const Cut& cut, std::size_t n_true, ColumnMeta& t,
                     ColumnMeta& f) {
    const ColumnMeta& parent = leaf.meta.columns[cut.column];
    t = parent;
    f = parent;
    const auto& v = leaf.sorted[cut.column];
    if (parent.kind == ColumnKind::Categorical) {
        t.distinct = {static_cast<std::int32_t>(cut.value)};
        t.overflow = false;
        if (!f.overflow) {
            f.distinct.erase(std::remove(f.distinct.begin(), f.distinct.end(),
                                         static_cast<std::int32_t>(cut.value)),
                             f.distinct.end());
        }
        return;
    }
    t.max = v[n_true - 1];
    f.min = v[n_true];
}

double split_gain(const LeafState& leaf, const Cut& cut, std::size_t n_true,
                  const std::vector<Query>& workload) {
    const std::size_t n_false = leaf.rows.size() - n_true;
    ColumnMeta meta_t, meta_f;
    refine_children(leaf, cut, n_true, meta_t, meta_f);

    PartitionMeta probe = leaf.meta;
    double gain = 0.0;
    for (const auto& q : workload) {
        if (!partition_matches(leaf.meta, q)) continue;
        probe.columns[cut.column] = meta_t;
        const bool mt = partition_matches(probe, q);
        probe.columns[cut.column] = meta_f;
        const bool mf = partition_matches(probe, q);
        if (mt && !mf)
            gain += static_cast<double>(n_false);
        else if (mf && !mt)
            gain += static_cast<double>(n_true);
    }
    return gain;
}

void find_best_cut(LeafState& leaf, const std::vector<Cut>& cuts,
                   const std::vector<Query>& workload, std::size_t min_leaf_rows) {
    leaf.best_gain = 0.0;
    leaf.best_cut = SIZE_MAX;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const std::size_t n_true = leaf.count_true(cuts[i]);
        const std::size_t n_false = leaf.rows.size() - n_true;
        if (n_true < min_leaf_rows || n_false < min_leaf_rows) continue;
        const double g = split_gain(leaf, cuts[i], n_true, workload);
        if (g > leaf.best_gain) {  // ties keep the first cut in canonical order
            leaf.best_gain = g;
            leaf.best_cut = i;
        }
    }
}

Layout single_partition_layout(const Dataset& sample) {
    Layout layout;
    QdTreeRouting tree;
    QdNode root;
    root.partition = 0;
    tree.nodes.push_back(root);
    tree.leaf_count = 1;
    layout.routing = std::move(tree);
    std::vector<std::size_t> all(sample.num_rows());
    std::iota(all.begin(), all.end(), 0);
    layout.partitions.push_back(partition_meta(sample, all));
    layout.fitted_rows = sample.num_rows();
    return layout;
}

}  // namespace

Layout generate_qdtree(const Dataset& sample, const std::vector<Query>& workload,
                       PartitionBudget budget, std::size_t min_leaf_rows,
                       const LayoutGenOptions& opts) {
    if (sample.num_rows() == 0) throw std::invalid_argument("empty sample");
    if (budget.k < 1) throw std::invalid_argument("partition budget must be >= 1");
    if (min_leaf_rows == 0)
        min_leaf_rows = std::max<std::size_t>(1, sample.num_rows() / (4 * budget.k));

    if (budget.k == 1 || workload.empty()) return single_partition_layout(sample);

    std::set<Cut> cut_set;
    for (const auto& q : workload)
        for (const auto& p : q.predicates)
            collect_cuts(p, sample.columns[p.column].kind, cut_set);
    std::vector<Cut> cuts(cut_set.begin(), cut_set.end());
    if (cuts.size() > opts.max_cuts) {  // deterministic stride thinning
        std::vector<Cut> kept;
        kept.reserve(opts.max_cuts);
        for (std::size_t i = 0; i < opts.max_cuts; ++i)
            kept.push_back(cuts[i * cuts.size() / opts.max_cuts]);
        cuts = std::move(kept);
    }
    if (cuts.empty()) return single_partition_layout(sample);

    QdTreeRouting tree;
    tree.nodes.push_back(QdNode{});  // root, becomes leaf 0 if never split
    std::vector<LeafState> leaves(1);
    leaves[0].rows.resize(sample.num_rows());
    std::iota(leaves[0].rows.begin(), leaves[0].rows.end(), 0);
    leaves[0].node = 0;
    leaves[0].build(sample);
    find_best_cut(leaves[0], cuts, workload, min_leaf_rows);

    while (leaves.size() < budget.k) {
        std::size_t best = SIZE_MAX;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (leaves[i].best_cut == SIZE_MAX) continue;
            if (best == SIZE_MAX || leaves[i].best_gain > leaves[best].best_gain) best = i;
        }
        if (best == SIZE_MAX) break;  // no split strictly increases skipped mass

        LeafState& leaf = leaves[best];
        const Cut& cut = cuts[leaf.best_cut];
        LeafState child_t, child_f;
        for (std::size_t r : leaf.rows) {
            if (predicate_matches_value(cut.predicate(), sample.value(cut.column, r)))
                child_t.rows.push_back(r);
            else
                child_f.rows.push_back(r);
        }
        child_t.build(sample);
        child_f.build(sample);

        QdNode& node = tree.nodes[leaf.node];
        node.partition = -1;
        node.cut = cut.predicate();
        node.on_true = static_cast<int>(tree.nodes.size());
        node.on_false = static_cast<int>(tree.nodes.size()) + 1;
        child_t.node = node.on_true;
        child_f.node = node.on_false;
        tree.nodes.push_back(QdNode{});
        tree.nodes.push_back(QdNode{});

        find_best_cut(child_t, cuts, workload, min_leaf_rows);
        find_best_cut(child_f, cuts, workload, min_leaf_rows);
        leaves[best] = std::move(child_t);
        leaves.push_back(std::move(child_f));
    }

    // Partition indices in preorder for a stable on-disk form.
    Layout layout;
    layout.fitted_rows = sample.num_rows();
    std::vector<int> order;  // node index -> partition index
    order.assign(tree.nodes.size(), -1);
    int next = 0;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (tree.nodes[n].on_true < 0) {
            order[n] = next++;
        } else {
            stack.push_back(tree.nodes[n].on_false);
            stack.push_back(tree.nodes[n].on_true);
        }
    }
    tree.leaf_count = next;
    layout.partitions.resize(next);
    for (auto& leaf : leaves) {
        tree.nodes[leaf.node].partition = order[leaf.node];
        layout.partitions[order[leaf.node]] = std::move(leaf.meta);
    }
    layout.routing = std::move(tree);
    return layout;
}

Layout generate_zorder(const Dataset& sample, const std::vector<Query>& workload,
                       PartitionBudget budget, const LayoutGenOptions& opts) {
    if (sample.num_rows() == 0) throw std::invalid_argument("empty sample");
    if (budget.k < 1) throw std::invalid_argument("partition budget must be >= 1");

    // Top three most queried columns, ties to the lower index.
    std::map<int, std::size_t> freq;
    for (const auto& q : workload)
        for (const auto& p : q.predicates) ++freq[p.column];
    std::vector<std::pair<int, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ZOrderRouting z;
    z.bits_per_column = opts.zorder_bits;
    for (const auto& [col, n] : ranked) {
        if (z.columns.size() == 3) break;
        z.columns.push_back(col);
    }
    if (z.columns.empty())
        for (std::size_t c = 0; c < std::min<std::size_t>(3, sample.num_columns()); ++c)
            z.columns.push_back(static_cast<int>(c));

    const std::size_t n = sample.num_rows();
    const std::size_t buckets = 1ULL << z.bits_per_column;
    for (int col : z.columns) {
        std::vector<double> v = sample.columns[col].values;
        std::sort(v.begin(), v.end());
        std::vector<double> edges;
        edges.reserve(buckets - 1);
        for (std::size_t j = 1; j < buckets; ++j) {
            const std::size_t pos = j * n / buckets;
            if (pos < n) edges.push_back(v[pos]);
        }
        z.bucket_edges.push_back(std::move(edges));
    }

    Layout layout;
    layout.fitted_rows = n;
    layout.routing = z;  // keys need the routing in place
    std::vector<std::uint64_t> keys(n);
    for (std::size_t r = 0; r < n; ++r) keys[r] = zorder_key(z, sample, r);
    std::vector<std::uint64_t> sorted_keys = keys;
    std::sort(sorted_keys.begin(), sorted_keys.end());
    std::vector<std::uint64_t> cuts;
    for (std::size_t j = 1; j < budget.k; ++j) {
        const std::uint64_t cut = sorted_keys[j * n / budget.k];
        if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
    }
    z.key_cuts = cuts;
    layout.routing = z;

    // Realized groups define the partitions; cuts in front of empty groups
    // are dropped so routing indices stay aligned with the partition list.
    std::vector<std::vector<std::size_t>> groups(cuts.size() + 1);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t part =
            std::upper_bound(cuts.begin(), cuts.end(), keys[r]) - cuts.begin();
        groups[part].push_back(r);
    }
    std::vector<std::uint64_t> live_cuts;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) continue;
        if (!layout.partitions.empty()) live_cuts.push_back(cuts[g - 1]);
        layout.partitions.push_back(partition_meta(sample, groups[g]));
    }
    std::get<ZOrderRouting>(layout.routing).key_cuts = std::move(live_cuts);
    return layout;
}

CostVector eval_skipped(const Layout& layout, const std::vector<Query>& queries) {
    CostVector cv;
    cv.values.reserve(queries.size());
    for (const auto& q : queries) cv.values.push_back(query_cost(layout, q));
    return cv;
}

Layout best_layout_for_template(const Dataset& sample, const std::vector<Query>& template_queries,
                                PartitionBudget budget) {
    if (template_queries.empty()) throw std::invalid_argument("template queries must be non-empty");
    return generate_qdtree(sample, template_queries, budget);
}

}  // namespace oreo
