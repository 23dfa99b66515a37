#include <doctest.h>

#include <algorithm>

#include "oreo/io.hpp"
#include "oreo/layout_gen.hpp"
#include "oreo/rng.hpp"
#include "oreo/workload.hpp"

using namespace oreo;

namespace {

std::vector<Query> point_queries(int column, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Query> out;
    for (std::size_t i = 0; i < n; ++i) {
        Query q;
        q.seq = static_cast<std::int64_t>(i);
        q.predicates.push_back(Predicate::eq(column, rng.uniform01()));
        out.push_back(std::move(q));
    }
    return out;
}

// Independent oracle: mean workload cost of the best single-column 3-cut
// partitioning, enumerating all cut triples drawn from the query boundaries.
double best_three_cut_cost(const Dataset& data, const std::vector<Query>& workload) {
    std::vector<double> values = data.columns[0].values;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());

    std::vector<double> cuts;
    for (const auto& q : workload) cuts.push_back(q.predicates[0].lo);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto rank = [&](double v) {
        return static_cast<double>(std::lower_bound(values.begin(), values.end(), v) -
                                   values.begin());
    };
    double best = 1.0;
    for (std::size_t a = 0; a < cuts.size(); ++a)
        for (std::size_t b = a + 1; b < cuts.size(); ++b)
            for (std::size_t c = b + 1; c < cuts.size(); ++c) {
                const double r[5] = {0, rank(cuts[a]), rank(cuts[b]), rank(cuts[c]), n};
                double total = 0.0;
                for (const auto& q : workload) {
                    const double x = q.predicates[0].lo;
                    int s = 0;
                    if (x >= cuts[c])
                        s = 3;
                    else if (x >= cuts[b])
                        s = 2;
                    else if (x >= cuts[a])
                        s = 1;
                    total += (r[s + 1] - r[s]) / n;
                }
                best = std::min(best, total / static_cast<double>(workload.size()));
            }
    return best;
}

}  // namespace

TEST_SUITE("layout_gen") {

TEST_CASE("greedy qdtree on point queries is near the enumerated optimum") {
    const Dataset d = gen_uniform_dataset(1000, 1, 0, 0, 41);
    const std::vector<Query> workload = point_queries(0, 60, 42);
    const Layout layout = generate_qdtree(d, workload, PartitionBudget{4});
    REQUIRE(layout.partitions.size() <= 4);
    const double greedy_cost = eval_skipped(layout, workload).mean();
    const double oracle_best = best_three_cut_cost(d, workload);
    CHECK(greedy_cost <= oracle_best * 1.05 + 1e-9);
    CHECK(greedy_cost == doctest::Approx(0.25).epsilon(0.2));  // ~1/4 per point query
}

TEST_CASE("empty workload and unit budget give one partition") {
    const Dataset d = gen_uniform_dataset(100, 2, 0, 0, 7);
    const Layout no_workload = generate_qdtree(d, {}, PartitionBudget{4});
    CHECK(no_workload.partitions.size() == 1);
    Query q;
    q.predicates.push_back(Predicate::between(0, 0.1, 0.2));
    CHECK(query_cost(no_workload, q) == 1.0);

    const Layout k1 = generate_qdtree(d, point_queries(0, 10, 1), PartitionBudget{1});
    CHECK(k1.partitions.size() == 1);
}

TEST_CASE("budget and leaf floor are respected") {
    const Dataset d = gen_uniform_dataset(400, 1, 0, 0, 3);
    const std::vector<Query> workload = point_queries(0, 80, 4);
    for (std::size_t k : {2, 4, 8, 16}) {
        const Layout layout = generate_qdtree(d, workload, PartitionBudget{k});
        CHECK(layout.partitions.size() <= k);
        for (const auto& p : layout.partitions) CHECK(p.row_count >= 1);
    }
    // A floor of a quarter of the sample caps the tree at 4 leaves.
    const Layout floored = generate_qdtree(d, workload, PartitionBudget{16}, 100);
    CHECK(floored.partitions.size() <= 4);
    for (const auto& p : floored.partitions) CHECK(p.row_count >= 100);
}

TEST_CASE("deeper budgets never cost more on the construction workload") {
    const Dataset d = gen_uniform_dataset(800, 2, 0, 0, 11);
    std::vector<Query> workload = point_queries(0, 40, 12);
    for (auto& q : point_queries(1, 40, 13)) workload.push_back(q);
    double prev = 1.0;
    for (std::size_t k : {1, 2, 4, 8, 16}) {
        const double mean = eval_skipped(generate_qdtree(d, workload, PartitionBudget{k}),
                                         workload)
                                .mean();
        CHECK(mean <= prev + 1e-12);
        prev = mean;
    }
    CHECK(prev < 1.0);  // accepted splits strictly increased skipped mass
}

TEST_CASE("qdtree determinism") {
    const Dataset d = gen_uniform_dataset(500, 2, 0, 0, 21);
    const std::vector<Query> workload = point_queries(1, 30, 22);
    const Layout a = generate_qdtree(d, workload, PartitionBudget{8});
    const Layout b = generate_qdtree(d, workload, PartitionBudget{8});
    CHECK(layout_to_json(a) == layout_to_json(b));
}

TEST_CASE("single-column zorder equals range partitioning") {
    const Dataset d = gen_uniform_dataset(1000, 3, 0, 0, 31);
    std::vector<Query> workload = point_queries(2, 20, 32);
    const Layout z = generate_zorder(d, workload, PartitionBudget{5});
    const auto& routing = std::get<ZOrderRouting>(z.routing);
    REQUIRE(routing.columns == std::vector<int>{2});

    // Independent sort-based range partitioner on column 2.
    std::vector<double> values = d.columns[2].values;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    REQUIRE(z.partitions.size() == 5);
    for (std::size_t p = 0; p < 5; ++p) {
        const std::size_t lo = p * n / 5, hi = (p + 1) * n / 5;
        CHECK(z.partitions[p].row_count == hi - lo);
        CHECK(z.partitions[p].columns[2].min == values[lo]);
        CHECK(z.partitions[p].columns[2].max == values[hi - 1]);
    }
}

TEST_CASE("zorder column selection rules") {
    const Dataset d = gen_uniform_dataset(200, 5, 0, 0, 51);

    // No queries: first min(3, cols) columns.
    const Layout fallback = generate_zorder(d, {}, PartitionBudget{4});
    CHECK(std::get<ZOrderRouting>(fallback.routing).columns == std::vector<int>{0, 1, 2});

    // Equal frequency: both selected, lower index first.
    std::vector<Query> tied;
    for (int i = 0; i < 6; ++i) {
        Query q;
        q.predicates.push_back(Predicate::between(i % 2 == 0 ? 3 : 1, 0.1, 0.4));
        tied.push_back(q);
    }
    const Layout both = generate_zorder(d, tied, PartitionBudget{4});
    CHECK(std::get<ZOrderRouting>(both.routing).columns == std::vector<int>{1, 3});
}

TEST_CASE("zorder partitions are equal within one row on the sample") {
    const Dataset d = gen_uniform_dataset(997, 3, 0, 0, 61);
    std::vector<Query> workload = point_queries(0, 10, 62);
    for (auto& q : point_queries(1, 10, 63)) workload.push_back(q);
    const Layout z = generate_zorder(d, workload, PartitionBudget{8});
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& p : z.partitions) {
        lo = std::min(lo, p.row_count);
        hi = std::max(hi, p.row_count);
    }
    CHECK(hi - lo <= 1);
}

TEST_CASE("eval_skipped matches per-query costs") {
    const Dataset d = gen_uniform_dataset(1000, 1, 0, 0, 71);
    std::vector<Query> boundary_queries;
    for (int i = 1; i < 4; ++i) {
        Query q;
        q.predicates.push_back(Predicate::eq(0, i * 0.25));
        boundary_queries.push_back(q);
    }
    const Layout quartiles = generate_zorder(d, boundary_queries, PartitionBudget{4});

    const Layout single = generate_qdtree(d, {}, PartitionBudget{1});
    std::vector<Query> three;
    for (int i = 0; i < 3; ++i) {
        Query q;
        q.predicates.push_back(Predicate::between(0, 0.0, 1.0));
        three.push_back(q);
    }
    CHECK(eval_skipped(single, three).values == std::vector<double>{1.0, 1.0, 1.0});

    Query disjoint;
    disjoint.predicates.push_back(Predicate::between(0, 2.0, 3.0));
    CHECK(eval_skipped(single, {disjoint}).values == std::vector<double>{0.0});

    // Query bounds pinned to the empirical partition edges, so the matched
    // mass is exactly two partitions and one partition.
    std::vector<Query> halves;
    Query h1, h2;
    h1.predicates.push_back(Predicate::between(0, 0.0, quartiles.partitions[1].columns[0].max));
    h2.predicates.push_back(Predicate::between(0, 0.0, quartiles.partitions[0].columns[0].max));
    halves = {h1, h2};
    const CostVector cv = eval_skipped(quartiles, halves);
    CHECK(cv.values[0] == doctest::Approx(0.5));
    CHECK(cv.values[1] == doctest::Approx(0.25));
    CHECK(cv.values[0] >= exact_fraction(d, h1) - 1e-12);
    CHECK(cv.values[1] >= exact_fraction(d, h2) - 1e-12);
    CHECK(cv.mean() == doctest::Approx((cv.values[0] + cv.values[1]) / 2));

    CHECK(eval_skipped(single, {}).values.empty());
    CHECK(eval_skipped(single, {}).mean() == 0.0);
}

TEST_CASE("best_layout_for_template determinism and shape") {
    const Dataset d = gen_uniform_dataset(600, 2, 0, 0, 81);
    const std::vector<Query> tpl = point_queries(1, 40, 82);
    const Layout a = best_layout_for_template(d, tpl, PartitionBudget{8});
    const Layout b = best_layout_for_template(d, tpl, PartitionBudget{8});
    CHECK(layout_to_json(a) == layout_to_json(b));
    // Every cut lands on the queried column.
    const auto& tree = std::get<QdTreeRouting>(a.routing);
    for (const auto& node : tree.nodes)
        if (!node.is_leaf()) CHECK(node.cut.column == 1);
    CHECK(eval_skipped(a, tpl).mean() == doctest::Approx(1.0 / 8).epsilon(0.4));

    CHECK_THROWS_AS(best_layout_for_template(d, {}, PartitionBudget{2}), std::invalid_argument);
}

TEST_CASE("layout json round trip is lossless") {
    const Dataset d = gen_uniform_dataset(300, 2, 1, 6, 91);
    std::vector<Query> workload;
    Rng rng(92);
    for (int i = 0; i < 15; ++i) {
        Query q;
        q.predicates.push_back(Predicate::between(0, rng.uniform01() * 0.5, 0.9));
        q.predicates.push_back(Predicate::eq(2, static_cast<double>(rng.bounded(6))));
        workload.push_back(q);
    }
    for (Layout layout : {generate_qdtree(d, workload, PartitionBudget{6}),
                          generate_zorder(d, workload, PartitionBudget{6})}) {
        layout.id = 17;
        layout.created_at = 123;
        const std::string text = layout_to_json(layout);
        const Layout back = layout_from_json(text);
        CHECK(layout_to_json(back) == text);
        for (std::size_t r = 0; r < d.num_rows(); r += 7)
            CHECK(route_row(back, d, r) == route_row(layout, d, r));
    }
}

}  // TEST_SUITE
