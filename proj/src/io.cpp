#include "oreo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oreo {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return in;
}

json predicate_to_json(const Predicate& p) {
    json j;
    j["col"] = p.column;
    j["op"] = to_string(p.op);
    if (p.op == PredOp::In)
        j["operands"] = p.in_values;
    else if (p.op == PredOp::Between)
        j["operands"] = {p.lo, p.hi};
    else
        j["operands"] = {p.lo};
    return j;
}

Predicate predicate_from_json(const json& j) {
    Predicate p;
    p.column = j.at("col").get<int>();
    p.op = pred_op_from_string(j.at("op").get<std::string>());
    const auto& ops = j.at("operands");
    if (p.op == PredOp::In) {
        p.in_values = ops.get<std::vector<double>>();
    } else if (p.op == PredOp::Between) {
        p.lo = ops.at(0).get<double>();
        p.hi = ops.at(1).get<double>();
    } else {
        p.lo = p.hi = ops.at(0).get<double>();
    }
    return p;
}

json column_meta_to_json(const ColumnMeta& m) {
    json j;
    j["kind"] = m.kind == ColumnKind::Numeric ? "num" : "cat";
    j["min"] = m.min;
    j["max"] = m.max;
    if (m.kind == ColumnKind::Categorical) {
        j["distinct"] = m.distinct;
        j["overflow"] = m.overflow;
    }
    return j;
}

ColumnMeta column_meta_from_json(const json& j) {
    ColumnMeta m;
    m.kind = j.at("kind").get<std::string>() == "num" ? ColumnKind::Numeric
                                                      : ColumnKind::Categorical;
    m.min = j.at("min").get<double>();
    m.max = j.at("max").get<double>();
    if (m.kind == ColumnKind::Categorical) {
        m.distinct = j.at("distinct").get<std::vector<std::int32_t>>();
        m.overflow = j.at("overflow").get<bool>();
    }
    return m;
}

}  // namespace

void write_dataset_csv(const Dataset& data, std::ostream& out) {
    std::ostringstream header;
    for (std::size_t c = 0; c < data.num_columns(); ++c) {
        if (c) header << ',';
        header << data.columns[c].name << ':'
               << (data.columns[c].kind == ColumnKind::Numeric ? "num" : "cat");
    }
    out << header.str() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < data.num_columns(); ++c) {
            if (c) line += ',';
            if (data.columns[c].kind == ColumnKind::Categorical) {
                std::snprintf(buf, sizeof buf, "%lld",
                              static_cast<long long>(data.columns[c].values[r]));
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", data.columns[c].values[r]);
            }
            line += buf;
        }
        out << line << '\n';
    }
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
    auto out = open_out(path);
    write_dataset_csv(data, out);
}

Dataset read_dataset_csv(std::istream& in) {
    Dataset data;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset file");
    std::stringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) {
        const auto colon = field.rfind(':');
        if (colon == std::string::npos)
            throw std::runtime_error("bad dataset header field: " + field);
        Column col;
        col.name = field.substr(0, colon);
        const std::string kind = field.substr(colon + 1);
        if (kind == "num")
            col.kind = ColumnKind::Numeric;
        else if (kind == "cat")
            col.kind = ColumnKind::Categorical;
        else
            throw std::runtime_error("bad column kind: " + kind);
        data.columns.push_back(std::move(col));
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        for (std::size_t c = 0; c < data.num_columns(); ++c) {
            if (!std::getline(ls, field, ','))
                throw std::runtime_error("short dataset row: " + line);
            data.columns[c].values.push_back(std::stod(field));
        }
    }
    data.validate();
    return data;
}

Dataset read_dataset_csv(const std::string& path) {
    auto in = open_in(path);
    return read_dataset_csv(in);
}

void write_queries_jsonl(const std::vector<Query>& queries, std::ostream& out) {
    for (const auto& q : queries) {
        json j;
        j["seq"] = q.seq;
        if (q.template_id)
            j["template_id"] = *q.template_id;
        else
            j["template_id"] = nullptr;
        json preds = json::array();
        for (const auto& p : q.predicates) preds.push_back(predicate_to_json(p));
        j["predicates"] = std::move(preds);
        out << j.dump() << '\n';
    }
}

void write_queries_jsonl(const std::vector<Query>& queries, const std::string& path) {
    auto out = open_out(path);
    write_queries_jsonl(queries, out);
}

std::vector<Query> read_queries_jsonl(std::istream& in) {
    std::vector<Query> queries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        Query q;
        q.seq = j.at("seq").get<std::int64_t>();
        if (!j.at("template_id").is_null()) q.template_id = j.at("template_id").get<int>();
        for (const auto& pj : j.at("predicates")) q.predicates.push_back(predicate_from_json(pj));
        queries.push_back(std::move(q));
    }
    return queries;
}

std::vector<Query> read_queries_jsonl(const std::string& path) {
    auto in = open_in(path);
    return read_queries_jsonl(in);
}

std::string layout_to_json(const Layout& layout) {
    json j;
    j["id"] = layout.id;
    j["created_at"] = layout.created_at;
    j["fitted_on_sample"] = layout.fitted_on_sample;
    j["fitted_rows"] = layout.fitted_rows;
    if (layout.is_qdtree()) {
        const auto& tree = std::get<QdTreeRouting>(layout.routing);
        j["kind"] = "qdtree";
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            json nj;
            if (n.is_leaf()) {
                nj["leaf"] = n.partition;
            } else {
                nj["cut"] = predicate_to_json(n.cut);
                nj["t"] = n.on_true;
                nj["f"] = n.on_false;
            }
            nodes.push_back(std::move(nj));
        }
        j["tree"] = std::move(nodes);
        j["leaf_count"] = tree.leaf_count;
    } else {
        const auto& z = std::get<ZOrderRouting>(layout.routing);
        j["kind"] = "zorder";
        j["columns"] = z.columns;
        j["bits_per_column"] = z.bits_per_column;
        j["bucket_edges"] = z.bucket_edges;
        j["key_cuts"] = z.key_cuts;
    }
    json parts = json::array();
    for (const auto& p : layout.partitions) {
        json pj;
        pj["rows"] = p.row_count;
        json cols = json::array();
        for (const auto& m : p.columns) cols.push_back(column_meta_to_json(m));
        pj["columns"] = std::move(cols);
        parts.push_back(std::move(pj));
    }
    j["partitions"] = std::move(parts);
    return j.dump();
}

Layout layout_from_json(const std::string& text) {
    const json j = json::parse(text);
    Layout layout;
    layout.id = j.at("id").get<std::int64_t>();
    layout.created_at = j.at("created_at").get<std::int64_t>();
    layout.fitted_on_sample = j.at("fitted_on_sample").get<bool>();
    layout.fitted_rows = j.at("fitted_rows").get<std::size_t>();
    if (j.at("kind").get<std::string>() == "qdtree") {
        QdTreeRouting tree;
        for (const auto& nj : j.at("tree")) {
            QdNode n;
            if (nj.contains("leaf")) {
                n.partition = nj.at("leaf").get<int>();
            } else {
                n.cut = predicate_from_json(nj.at("cut"));
                n.on_true = nj.at("t").get<int>();
                n.on_false = nj.at("f").get<int>();
            }
            tree.nodes.push_back(std::move(n));
        }
        tree.leaf_count = j.at("leaf_count").get<int>();
        layout.routing = std::move(tree);
    } else {
        ZOrderRouting z;
        z.columns = j.at("columns").get<std::vector<int>>();
        z.bits_per_column = j.at("bits_per_column").get<int>();
        z.bucket_edges = j.at("bucket_edges").get<std::vector<std::vector<double>>>();
        z.key_cuts = j.at("key_cuts").get<std::vector<std::uint64_t>>();
        layout.routing = std::move(z);
    }
    for (const auto& pj : j.at("partitions")) {
        PartitionMeta p;
        p.row_count = pj.at("rows").get<std::size_t>();
        for (const auto& cj : pj.at("columns")) p.columns.push_back(column_meta_from_json(cj));
        layout.partitions.push_back(std::move(p));
    }
    return layout;
}

std::map<std::string, std::string> read_config_kv(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> read_config_kv_file(const std::string& path) {
    auto in = open_in(path);
    return read_config_kv(in);
}

}  // namespace oreo
