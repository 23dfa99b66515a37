#include "oreo/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oreo/rng.hpp"

namespace oreo {

namespace {

struct TemplateDef {
    struct Pred {
        int column;
        double width;
    };
    std::vector<Pred> preds;
};

std::vector<TemplateDef> make_templates(const TemplateWorkloadSpec& spec, Rng& rng) {
    std::vector<int> cols(spec.num_columns);
    std::iota(cols.begin(), cols.end(), 0);
    for (std::size_t i = cols.size(); i > 1; --i)
        std::swap(cols[i - 1], cols[rng.bounded(i)]);

    std::vector<TemplateDef> defs(spec.num_templates);
    for (std::size_t t = 0; t < spec.num_templates; ++t) {
        TemplateDef& def = defs[t];
        const int primary = cols[t % cols.size()];
        def.preds.push_back({primary, rng.uniform(spec.sel_min, spec.sel_max)});
        if (spec.max_cols_per_template > 1 && spec.num_columns > 1 && t % 3 == 2) {
            int secondary = cols[(t + 1 + rng.bounded(cols.size() - 1)) % cols.size()];
            if (secondary == primary) secondary = cols[(t + 1) % cols.size()];
            if (secondary != primary)
                def.preds.push_back({secondary, 4.0 * rng.uniform(spec.sel_min, spec.sel_max)});
        }
    }
    return defs;
}

}  // namespace

std::vector<Query> gen_template_workload(const TemplateWorkloadSpec& spec, std::uint64_t seed) {
    if (spec.total_queries == 0) throw std::invalid_argument("total_queries must be > 0");
    if (spec.num_templates == 0) throw std::invalid_argument("num_templates must be > 0");
    Rng rng(seed);
    const std::vector<TemplateDef> defs = make_templates(spec, rng);
    const double p = spec.dwell_p > 0.0
                         ? spec.dwell_p
                         : static_cast<double>(spec.num_templates) /
                               static_cast<double>(spec.total_queries);

    // Template order: repeated random permutations, no immediate repeats.
    std::vector<std::size_t> order(spec.num_templates);
    std::iota(order.begin(), order.end(), 0);
    std::size_t pos = order.size();  // forces a shuffle on first use
    std::size_t last = SIZE_MAX;
    auto next_template = [&]() {
        if (pos == order.size()) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng.bounded(i)]);
            if (order.size() > 1 && order[0] == last) std::swap(order[0], order[1 + rng.bounded(order.size() - 1)]);
            pos = 0;
        }
        last = order[pos];
        return order[pos++];
    };

    std::vector<Query> out;
    out.reserve(spec.total_queries);
    while (out.size() < spec.total_queries) {
        const std::size_t t = next_template();
        std::uint64_t dwell = rng.geometric(std::min(1.0, p));
        while (dwell-- > 0 && out.size() < spec.total_queries) {
            Query q;
            q.seq = static_cast<std::int64_t>(out.size());
            q.template_id = static_cast<int>(t);
            for (const auto& pr : defs[t].preds) {
                const double w = std::min(pr.width, 1.0);
                const double lo = rng.uniform(0.0, 1.0 - w);
                q.predicates.push_back(Predicate::between(pr.column, lo, lo + w));
            }
            out.push_back(std::move(q));
        }
    }
    return out;
}

Dataset gen_uniform_dataset(std::size_t rows, std::size_t numeric_cols, std::size_t cat_cols,
                            std::size_t cat_cardinality, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    for (std::size_t c = 0; c < numeric_cols; ++c) {
        Column col;
        col.name = "n" + std::to_string(c);
        col.kind = ColumnKind::Numeric;
        col.values.reserve(rows);
        for (std::size_t r = 0; r < rows; ++r) col.values.push_back(rng.uniform01());
        d.columns.push_back(std::move(col));
    }
    for (std::size_t c = 0; c < cat_cols; ++c) {
        Column col;
        col.name = "c" + std::to_string(c);
        col.kind = ColumnKind::Categorical;
        col.values.reserve(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            // Keep codes dense: the first `cardinality` rows cycle through
            // every code.
            const std::size_t code =
                r < cat_cardinality ? r : rng.bounded(cat_cardinality);
            col.values.push_back(static_cast<double>(code));
        }
        d.columns.push_back(std::move(col));
    }
    return d;
}

LeafBoxes qdtree_leaf_boxes(const Layout& layout, std::size_t dims) {
    if (!layout.is_qdtree()) throw std::invalid_argument("layout is not a qd-tree");
    const auto& tree = std::get<QdTreeRouting>(layout.routing);
    LeafBoxes out;
    out.boxes.resize(layout.partitions.size());
    out.volumes.resize(layout.partitions.size(), 0.0);

    std::vector<std::pair<double, double>> unit(dims, {0.0, 1.0});
    struct Frame {
        int node;
        std::vector<std::pair<double, double>> box;
    };
    std::vector<Frame> stack{{0, unit}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const QdNode& n = tree.nodes[f.node];
        if (n.is_leaf()) {
            double vol = 1.0;
            for (const auto& [lo, hi] : f.box) vol *= std::max(0.0, hi - lo);
            out.boxes[n.partition] = f.box;
            out.volumes[n.partition] = vol;
            continue;
        }
        // Numeric Lt/Le cuts shrink the cut dimension; the half-open box
        // convention treats Lt and Le boundaries alike (measure zero).
        auto t = f.box, fb = f.box;
        auto& [tlo, thi] = t[n.cut.column];
        auto& [flo, fhi] = fb[n.cut.column];
        thi = std::min(thi, n.cut.lo);
        flo = std::max(flo, n.cut.lo);
        stack.push_back({n.on_true, std::move(t)});
        stack.push_back({n.on_false, std::move(fb)});
    }
    return out;
}

KDimInstance gen_kdim_instance(const SyntheticKDimSpec& spec, std::uint64_t seed) {
    if (spec.k < 1 || spec.partitions < 1) throw std::invalid_argument("k and |B| must be >= 1");
    KDimInstance inst;
    inst.spec = spec;
    Rng rng(child_seed(seed, 1));

    const double Q = static_cast<double>(spec.queries_per_round);
    const double B = static_cast<double>(spec.partitions);
    const double K = static_cast<double>(spec.k);
    inst.analytic_dynamic_bound = Q * K / B;
    inst.analytic_static_bound = Q * K / std::pow(B, 1.0 / K);

    for (std::size_t round = 0; round < spec.k; ++round) {
        for (std::size_t i = 0; i < spec.queries_per_round; ++i) {
            Query q;
            q.seq = static_cast<std::int64_t>(inst.workload.size());
            q.template_id = static_cast<int>(round);
            q.predicates.push_back(Predicate::eq(static_cast<int>(round), rng.uniform01()));
            inst.workload.push_back(std::move(q));
        }
    }

    // Dynamic strategy: during round i the column is split into |B| equal
    // intervals, so each point query reads exactly one partition.
    inst.dynamic_total = static_cast<double>(inst.workload.size()) / B;

    // Static strategy: one Qd-tree fitted to the whole workload, priced by
    // the volume model over its leaf boxes.
    const Dataset sample =
        gen_uniform_dataset(2048, spec.k, 0, 0, child_seed(seed, 2));
    LayoutGenOptions opts;
    opts.max_cuts = 128;
    Layout fitted = generate_qdtree(sample, inst.workload, PartitionBudget{spec.partitions}, 0, opts);
    const LeafBoxes boxes = qdtree_leaf_boxes(fitted, spec.k);

    inst.static_costs.reserve(inst.workload.size());
    for (const auto& q : inst.workload) {
        const int dim = q.predicates[0].column;
        const double x = q.predicates[0].lo;
        double cost = 0.0;
        for (std::size_t leaf = 0; leaf < boxes.volumes.size(); ++leaf) {
            const auto& [lo, hi] = boxes.boxes[leaf][dim];
            if (lo <= x && x < hi) cost += boxes.volumes[leaf];
        }
        inst.static_costs.push_back(cost);
        inst.static_total += cost;
    }
    return inst;
}

Query dip_transform(const Query& fact_query, const Layout& dim_layout,
                    const std::vector<Predicate>& dim_predicates, int dim_join_col,
                    int fact_fk_col) {
    Query dim_query;
    dim_query.predicates = dim_predicates;

    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (const auto& part : dim_layout.partitions) {
        if (!partition_matches(part, dim_query)) continue;
        const ColumnMeta& jk = part.columns.at(dim_join_col);
        if (!any) {
            lo = jk.min;
            hi = jk.max;
            any = true;
        } else {
            lo = std::min(lo, jk.min);
            hi = std::max(hi, jk.max);
        }
    }

    Query out = fact_query;
    if (!any) {
        // No dimension partition can match: the induced range is empty.
        out.predicates.push_back(Predicate::in_set(fact_fk_col, {}));
    } else {
        out.predicates.push_back(Predicate::between(fact_fk_col, lo, hi));
    }
    return out;
}

StarSchemaInstance gen_star_schema_instance(const StarSchemaSpec& spec, std::uint64_t seed) {
    StarSchemaInstance inst;
    Rng rng(child_seed(seed, 11));

    // Dimension: join key 0..n-1 with an attribute that grows with the key,
    // so attribute ranges induce narrow join-key ranges.
    {
        Column jk{"jk", ColumnKind::Numeric, {}};
        Column attr{"attr", ColumnKind::Numeric, {}};
        const double n = static_cast<double>(spec.dim_rows);
        for (std::size_t r = 0; r < spec.dim_rows; ++r) {
            jk.values.push_back(static_cast<double>(r));
            const double base = static_cast<double>(r) / n;
            attr.values.push_back(std::clamp(base + rng.uniform(-0.02, 0.02), 0.0, 1.0));
        }
        inst.dim.columns = {std::move(jk), std::move(attr)};
    }
    // Range-partition the dimension on its join key.
    {
        std::vector<Query> jk_workload;
        Query q;
        q.predicates.push_back(Predicate::between(0, 0.0, 1.0));
        jk_workload.push_back(q);
        inst.dim_layout =
            generate_zorder(inst.dim, jk_workload, PartitionBudget{spec.dim_partitions});
    }

    // Fact: foreign key uniform over the join-key domain plus two measures.
    {
        Column fk{"fk", ColumnKind::Numeric, {}};
        Column m1{"m1", ColumnKind::Numeric, {}};
        Column m2{"m2", ColumnKind::Numeric, {}};
        for (std::size_t r = 0; r < spec.fact_rows; ++r) {
            fk.values.push_back(static_cast<double>(rng.bounded(spec.dim_rows)));
            m1.values.push_back(rng.uniform01());
            m2.values.push_back(rng.uniform01());
        }
        inst.fact.columns = {std::move(fk), std::move(m1), std::move(m2)};
    }

    // Each template pins a dimension-attribute region and a fact measure.
    struct Template {
        double dim_center;
        int fact_col;
    };
    std::vector<Template> templates;
    for (std::size_t t = 0; t < spec.num_templates; ++t)
        templates.push_back({rng.uniform(0.0, 1.0 - spec.dim_sel), 1 + static_cast<int>(t % 2)});

    for (std::size_t i = 0; i < spec.total_queries; ++i) {
        const std::size_t t = i * spec.num_templates / spec.total_queries;
        const auto& tpl = templates[t];
        Query q;
        q.seq = static_cast<std::int64_t>(i);
        q.template_id = static_cast<int>(t);
        const double flo = rng.uniform(0.0, 1.0 - spec.fact_sel);
        q.predicates.push_back(Predicate::between(tpl.fact_col, flo, flo + spec.fact_sel));

        const double dlo =
            std::clamp(tpl.dim_center + rng.uniform(-0.01, 0.01), 0.0, 1.0 - spec.dim_sel);
        const std::vector<Predicate> dim_preds{Predicate::between(1, dlo, dlo + spec.dim_sel)};

        inst.plain.push_back(q);
        inst.augmented.push_back(
            dip_transform(q, inst.dim_layout, dim_preds, inst.dim_jk_col, inst.fact_fk_col));
    }
    return inst;
}

}  // namespace oreo
