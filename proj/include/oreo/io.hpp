#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "oreo/layout.hpp"
#include "oreo/types.hpp"

namespace oreo {

// Dataset dump: comma-separated rows under a `name:kind` header
// (kind is `num` or `cat`).
void write_dataset_csv(const Dataset& data, std::ostream& out);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

// Queries: one JSON record per line with fields
// {seq, template_id, predicates:[{col, op, operands}]}.
void write_queries_jsonl(const std::vector<Query>& queries, std::ostream& out);
void write_queries_jsonl(const std::vector<Query>& queries, const std::string& path);
std::vector<Query> read_queries_jsonl(std::istream& in);
std::vector<Query> read_queries_jsonl(const std::string& path);

// Lossless layout round trip.
std::string layout_to_json(const Layout& layout);
Layout layout_from_json(const std::string& text);

// Flat key=value config text ('#' starts a comment).
std::map<std::string, std::string> read_config_kv(std::istream& in);
std::map<std::string, std::string> read_config_kv_file(const std::string& path);

}  // namespace oreo
