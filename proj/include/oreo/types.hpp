#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oreo {

enum class ColumnKind { Numeric, Categorical };

// Column-major storage. Categorical columns hold small integer codes stored
// as doubles (codes are dense in [0, cardinality)), numeric columns hold
// 64-bit reals.
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> values;
};

struct Dataset {
    std::vector<Column> columns;

    std::size_t num_rows() const { return columns.empty() ? 0 : columns[0].values.size(); }
    std::size_t num_columns() const { return columns.size(); }
    double value(std::size_t col, std::size_t row) const { return columns[col].values[row]; }

    // Throws if column lengths disagree or categorical codes are not dense
    // non-negative integers.
    void validate() const;
};

enum class PredOp { Eq, Lt, Le, Gt, Ge, Between, In };

const char* to_string(PredOp op);
PredOp pred_op_from_string(const std::string& s);

// One conjunct of a query. `lo` carries the single operand for Eq/Lt/Le/Gt/Ge,
// (lo, hi) the inclusive bounds for Between, and `in_values` the set for In.
struct Predicate {
    int column = 0;
    PredOp op = PredOp::Eq;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> in_values;

    static Predicate eq(int col, double v) { return {col, PredOp::Eq, v, v, {}}; }
    static Predicate lt(int col, double v) { return {col, PredOp::Lt, v, v, {}}; }
    static Predicate le(int col, double v) { return {col, PredOp::Le, v, v, {}}; }
    static Predicate gt(int col, double v) { return {col, PredOp::Gt, v, v, {}}; }
    static Predicate ge(int col, double v) { return {col, PredOp::Ge, v, v, {}}; }
    static Predicate between(int col, double lo, double hi) { return {col, PredOp::Between, lo, hi, {}}; }
    static Predicate in_set(int col, std::vector<double> vs) { return {col, PredOp::In, 0, 0, std::move(vs)}; }
};

// True iff a row value satisfies the predicate.
bool predicate_matches_value(const Predicate& p, double v);

struct Query {
    std::vector<Predicate> predicates;
    std::optional<int> template_id;
    std::int64_t seq = 0;
};

// Intersects multiple Between predicates on the same column into one. An
// empty intersection becomes an empty In predicate (matches nothing).
Query normalize(Query q);

inline constexpr std::size_t kDistinctCap = 64;

struct ColumnMeta {
    ColumnKind kind = ColumnKind::Numeric;
    double min = 0.0;
    double max = 0.0;
    // Categorical only: sorted distinct codes, capped at the configured
    // limit. `overflow` set means the set was truncated and any value must
    // be assumed possible.
    std::vector<std::int32_t> distinct;
    bool overflow = false;
};

struct PartitionMeta {
    std::size_t row_count = 0;
    std::vector<ColumnMeta> columns;
};

enum class EventKind { Query, Switch, Add, Remove, PhaseReset };

const char* to_string(EventKind k);

struct TraceEvent {
    std::int64_t seq = 0;
    EventKind kind = EventKind::Query;
    std::int64_t state_id = -1;
    double cost = 0.0;
    std::int64_t phase = 0;
    std::uint64_t counters_digest = 0;
    // Query events only: metadata cost of every state in the state space,
    // recorded so an offline oracle can replay the instance from the trace.
    std::vector<std::pair<std::int64_t, double>> state_costs;
};

// Append-only audit trail. `query_cost` always equals the sum of query-event
// costs and `reorg_cost` equals alpha times the number of switch events.
struct CostLedger {
    double alpha = 0.0;
    double query_cost = 0.0;
    double reorg_cost = 0.0;
    std::vector<TraceEvent> events;

    void record_query(std::int64_t seq, std::int64_t state_id, double cost, std::int64_t phase,
                      std::uint64_t digest, std::vector<std::pair<std::int64_t, double>> costs = {}) {
        query_cost += cost;
        events.push_back({seq, EventKind::Query, state_id, cost, phase, digest, std::move(costs)});
    }
    void record_switch(std::int64_t seq, std::int64_t to_state, std::int64_t phase, std::uint64_t digest,
                       double movement_cost) {
        reorg_cost += movement_cost;
        events.push_back({seq, EventKind::Switch, to_state, movement_cost, phase, digest, {}});
    }
    void record_event(std::int64_t seq, EventKind kind, std::int64_t state_id, std::int64_t phase,
                      std::uint64_t digest) {
        events.push_back({seq, kind, state_id, 0.0, phase, digest, {}});
    }
    double total() const { return query_cost + reorg_cost; }
    std::size_t count(EventKind k) const {
        std::size_t n = 0;
        for (const auto& e : events) n += (e.kind == k) ? 1 : 0;
        return n;
    }
};

}  // namespace oreo
