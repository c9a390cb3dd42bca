#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "netctrb/hetero.hpp"
#include "netctrb/high_order.hpp"
#include "netctrb/steering.hpp"

namespace netctrb {

using Json = nlohmann::ordered_json;

using Network = std::variant<HighOrderNetwork, HeteroNetwork>;

/// {"n": int, "edges": [[i, j, w], ...]}; per-edge weight optional,
/// default 1.0. Throws ParseError on schema violations.
WeightedGraph parse_graph(const Json& j);
Json graph_to_json(const WeightedGraph& g);

/// Auto-detects the network flavor from the "type" field
/// ("high-order" | "hetero").
Network parse_network(const Json& j);
Network load_network_file(const std::string& path);

Json network_to_json(const HighOrderNetwork& net);
Json network_to_json(const HeteroNetwork& net);

Eigen::MatrixXd parse_matrix(const Json& j, const std::string& what);
Eigen::VectorXd parse_vector(const Json& j, const std::string& what);
Json matrix_to_json(const Eigen::MatrixXd& m);
Json vector_to_json(const Eigen::VectorXd& v);
Json complex_vector_to_json(const Eigen::VectorXcd& v);

Json verdict_to_json(const Verdict& v);
Json tolerances_to_json(const ToleranceConfig& cfg);
Json steering_summary_json(const SteeringResult& r);

}  // namespace netctrb
