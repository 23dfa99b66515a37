#include "oreo/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace oreo {

void Dataset::validate() const {
    const std::size_t rows = num_rows();
    for (const auto& col : columns) {
        if (col.values.size() != rows)
            throw std::invalid_argument("column " + col.name + " has inconsistent row count");
        if (col.kind == ColumnKind::Categorical) {
            std::set<std::int64_t> codes;
            for (double v : col.values) {
                if (v < 0 || v != std::floor(v))
                    throw std::invalid_argument("column " + col.name + " has a non-code categorical value");
                codes.insert(static_cast<std::int64_t>(v));
            }
            if (!codes.empty() && *codes.rbegin() != static_cast<std::int64_t>(codes.size()) - 1)
                throw std::invalid_argument("column " + col.name + " categorical codes are not dense");
        }
    }
}

const char* to_string(PredOp op) {
    switch (op) {
        case PredOp::Eq: return "eq";
        case PredOp::Lt: return "lt";
        case PredOp::Le: return "le";
        case PredOp::Gt: return "gt";
        case PredOp::Ge: return "ge";
        case PredOp::Between: return "between";
        case PredOp::In: return "in";
    }
    return "?";
}

PredOp pred_op_from_string(const std::string& s) {
    if (s == "eq") return PredOp::Eq;
    if (s == "lt") return PredOp::Lt;
    if (s == "le") return PredOp::Le;
    if (s == "gt") return PredOp::Gt;
    if (s == "ge") return PredOp::Ge;
    if (s == "between") return PredOp::Between;
    if (s == "in") return PredOp::In;
    throw std::invalid_argument("unknown predicate op: " + s);
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Query: return "query";
        case EventKind::Switch: return "switch";
        case EventKind::Add: return "add";
        case EventKind::Remove: return "remove";
        case EventKind::PhaseReset: return "phase_reset";
    }
    return "?";
}

bool predicate_matches_value(const Predicate& p, double v) {
    switch (p.op) {
        case PredOp::Eq: return v == p.lo;
        case PredOp::Lt: return v < p.lo;
        case PredOp::Le: return v <= p.lo;
        case PredOp::Gt: return v > p.lo;
        case PredOp::Ge: return v >= p.lo;
        case PredOp::Between: return p.lo <= v && v <= p.hi;
        case PredOp::In:
            return std::find(p.in_values.begin(), p.in_values.end(), v) != p.in_values.end();
    }
    return false;
}

Query normalize(Query q) {
    std::map<int, std::pair<double, double>> ranges;  // column -> intersected Between
    std::vector<Predicate> rest;
    for (auto& p : q.predicates) {
        if (p.op != PredOp::Between) {
            rest.push_back(std::move(p));
            continue;
        }
        if (p.lo > p.hi) throw std::invalid_argument("between bounds out of order");
        auto it = ranges.find(p.column);
        if (it == ranges.end()) {
            ranges.emplace(p.column, std::make_pair(p.lo, p.hi));
        } else {
            it->second.first = std::max(it->second.first, p.lo);
            it->second.second = std::min(it->second.second, p.hi);
        }
    }
    for (const auto& [col, r] : ranges) {
        if (r.first <= r.second) {
            rest.push_back(Predicate::between(col, r.first, r.second));
        } else {
            // Empty intersection: an empty In set matches nothing.
            rest.push_back(Predicate::in_set(col, {}));
        }
    }
    q.predicates = std::move(rest);
    return q;
}

PartitionMeta partition_meta(const Dataset& data, std::span<const std::size_t> row_ids,
                             std::size_t distinct_cap) {
    if (row_ids.empty()) throw std::invalid_argument("empty partition");
    const std::size_t rows = data.num_rows();
    PartitionMeta meta;
    meta.row_count = row_ids.size();
    meta.columns.resize(data.num_columns());
    for (std::size_t c = 0; c < data.num_columns(); ++c) {
        const auto& col = data.columns[c];
        ColumnMeta& m = meta.columns[c];
        m.kind = col.kind;
        double mn = 0, mx = 0;
        bool first = true;
        std::set<std::int32_t> codes;
        for (std::size_t r : row_ids) {
            if (r >= rows) throw std::out_of_range("row id out of range");
            const double v = col.values[r];
            if (first) {
                mn = mx = v;
                first = false;
            } else {
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            if (col.kind == ColumnKind::Categorical && !m.overflow) {
                codes.insert(static_cast<std::int32_t>(v));
                if (codes.size() > distinct_cap) m.overflow = true;
            }
        }
        m.min = mn;
        m.max = mx;
        if (col.kind == ColumnKind::Categorical && !m.overflow)
            m.distinct.assign(codes.begin(), codes.end());
    }
    return meta;
}

namespace {

bool meta_may_match(const ColumnMeta& m, const Predicate& p) {
    if (m.kind == ColumnKind::Categorical) {
        if (m.overflow) return true;  // any value possible
        for (std::int32_t code : m.distinct)
            if (predicate_matches_value(p, static_cast<double>(code))) return true;
        return false;
    }
    switch (p.op) {
        case PredOp::Eq: return m.min <= p.lo && p.lo <= m.max;
        case PredOp::Lt: return m.min < p.lo;
        case PredOp::Le: return m.min <= p.lo;
        case PredOp::Gt: return m.max > p.lo;
        case PredOp::Ge: return m.max >= p.lo;
        case PredOp::Between: return m.max >= p.lo && m.min <= p.hi;
        case PredOp::In:
            for (double v : p.in_values)
                if (m.min <= v && v <= m.max) return true;
            return false;
    }
    return true;
}

}  // namespace

bool partition_matches(const PartitionMeta& meta, const Query& query) {
    for (const auto& p : query.predicates) {
        if (p.column < 0 || static_cast<std::size_t>(p.column) >= meta.columns.size())
            throw std::out_of_range("predicate column out of range");
        if (!meta_may_match(meta.columns[p.column], p)) return false;
    }
    return true;
}

double query_cost(const Layout& layout, const Query& query) {
    if (layout.partitions.empty()) throw std::invalid_argument("layout has no partitions");
    std::size_t total = 0, matched = 0;
    for (const auto& part : layout.partitions) {
        total += part.row_count;
        if (partition_matches(part, query)) matched += part.row_count;
    }
    if (total == 0) return 0.0;
    const double f = static_cast<double>(matched) / static_cast<double>(total);
    return std::clamp(f, 0.0, 1.0);
}

double exact_fraction(const Dataset& data, const Query& query) {
    const std::size_t rows = data.num_rows();
    if (rows == 0) return 0.0;
    std::size_t hit = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        bool all = true;
        for (const auto& p : query.predicates) {
            if (!predicate_matches_value(p, data.value(p.column, r))) {
                all = false;
                break;
            }
        }
        hit += all ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(rows);
}

std::uint64_t zorder_key(const ZOrderRouting& z, const Dataset& data, std::size_t row) {
    const std::size_t ncols = z.columns.size();
    std::uint64_t key = 0;
    for (int b = 0; b < z.bits_per_column; ++b) {
        for (std::size_t c = 0; c < ncols; ++c) {
            const double v = data.value(z.columns[c], row);
            const auto& edges = z.bucket_edges[c];
            const std::uint64_t bucket =
                std::upper_bound(edges.begin(), edges.end(), v) - edges.begin();
            const std::uint64_t bit = (bucket >> b) & 1ULL;
            key |= bit << (static_cast<std::uint64_t>(b) * ncols + c);
        }
    }
    return key;
}

int route_row(const Layout& layout, const Dataset& data, std::size_t row) {
    if (layout.is_qdtree()) {
        const auto& tree = std::get<QdTreeRouting>(layout.routing);
        int node = 0;
        while (!tree.nodes[node].is_leaf()) {
            const auto& n = tree.nodes[node];
            node = predicate_matches_value(n.cut, data.value(n.cut.column, row)) ? n.on_true
                                                                                 : n.on_false;
        }
        return tree.nodes[node].partition;
    }
    const auto& z = std::get<ZOrderRouting>(layout.routing);
    const std::uint64_t key = zorder_key(z, data, row);
    return static_cast<int>(std::upper_bound(z.key_cuts.begin(), z.key_cuts.end(), key) -
                            z.key_cuts.begin());
}

}  // namespace oreo
