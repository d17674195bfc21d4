#pragma once

#include "rlf/netlist.hpp"
#include "rlf/neumann.hpp"
#include "rlf/optimize.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace rlf {

using Json = nlohmann::json;

inline constexpr int schema_version = 1;

/// Every document carries {"schema": <name>, "schema_version": 1}.
inline constexpr const char* netlist_schema = "rlf.netlist";
inline constexpr const char* mutual_matrix_schema = "rlf.mutual_matrix";
inline constexpr const char* layout_schema = "rlf.layout";
inline constexpr const char* problem_schema = "rlf.problem";
inline constexpr const char* result_schema = "rlf.result";

/// Parses text and maps syntax errors to ParseError with a line number.
Json parse_json(std::string_view text);
/// Throws ParseError unless `doc` declares `schema` at a supported version.
void require_schema(const Json& doc, const char* schema);

Json to_json(const FrequencyGrid& grid);
FrequencyGrid grid_from_json(const Json& j);

Json to_json(const NetworkData& n);
NetworkData network_from_json(const Json& j);

Json to_json(const Netlist& netlist);
Netlist netlist_from_json(const Json& doc);

Json to_json(const MutualMatrix& mm);
MutualMatrix mutual_matrix_from_json(const Json& doc);

struct LayoutEntry {
    std::string inductor;
    Polyline3D path;
};

struct Layout {
    std::vector<LayoutEntry> entries;
    NeumannOptions options{};
};

/// Entries hold either "spiral" parameters or an explicit "path" vertex list.
Layout layout_from_json(const Json& doc);
Json to_json(const Layout& layout);

struct ProblemDocument {
    OptimizationProblem problem;
    SolverConfig solver;
};

ProblemDocument problem_from_json(const Json& doc);
Json to_json(const ProblemDocument& doc);

Json result_to_json(const OptimizationProblem& problem, const SolveResult& result);

std::string dump(const Json& j);

}  // namespace rlf
