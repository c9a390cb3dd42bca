#include "netctrb/json_io.hpp"

#include <fstream>

namespace netctrb {

namespace {

const Json& require_field(const Json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(ctx + ": missing field \"" + key + "\"");
    return j.at(key);
}

double as_number(const Json& j, const std::string& ctx) {
    if (!j.is_number()) throw ParseError(ctx + ": expected a number");
    return j.get<double>();
}

int as_int(const Json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw ParseError(ctx + ": expected an integer");
    return j.get<int>();
}

LeaderSet parse_leaders(const Json& j) {
    const Json& arr = require_field(j, "leaders", "network");
    if (!arr.is_array()) throw ParseError("leaders: expected an array of node indices");
    LeaderSet leaders;
    for (const auto& v : arr) leaders.indices.push_back(as_int(v, "leaders"));
    return leaders;
}

DriftSignal parse_drift(const Json& j) {
    DriftSignal f;
    const Json& bps = require_field(j, "breakpoints", "drift");
    const Json& vals = require_field(j, "values", "drift");
    if (!bps.is_array() || !vals.is_array())
        throw ParseError("drift: breakpoints and values must be arrays");
    for (const auto& t : bps) f.breakpoints.push_back(as_number(t, "drift.breakpoints"));
    for (const auto& v : vals) f.values.push_back(parse_vector(v, "drift.values"));
    try {
        f.validate();
    } catch (const DimensionMismatch& e) {
        throw ParseError(std::string("drift: ") + e.what());
    }
    return f;
}

}  // namespace

Eigen::VectorXd parse_vector(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array of numbers");
    Eigen::VectorXd v(static_cast<int>(j.size()));
    int i = 0;
    for (const auto& x : j) v(i++) = as_number(x, what);
    return v;
}

Eigen::MatrixXd parse_matrix(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty nested array");
    const int rows = static_cast<int>(j.size());
    int cols = -1;
    Eigen::MatrixXd m;
    for (int r = 0; r < rows; ++r) {
        const Json& row = j.at(r);
        if (!row.is_array()) throw ParseError(what + ": expected row-major nested arrays");
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<int>(row.size()) != cols) {
            throw ParseError(what + ": ragged rows");
        }
        for (int c = 0; c < cols; ++c) m(r, c) = as_number(row.at(c), what);
    }
    return m;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json arr = Json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Json complex_vector_to_json(const Eigen::VectorXcd& v) {
    Json arr = Json::array();
    for (int i = 0; i < v.size(); ++i)
        arr.push_back(Json{{"re", v(i).real()}, {"im", v(i).imag()}});
    return arr;
}

WeightedGraph parse_graph(const Json& j) {
    const int n = as_int(require_field(j, "n", "graph"), "graph.n");
    std::vector<Edge> edges;
    if (j.contains("edges")) {
        const Json& arr = j.at("edges");
        if (!arr.is_array()) throw ParseError("graph.edges: expected an array");
        for (const auto& e : arr) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3)
                throw ParseError("graph edge: expected [i, j] or [i, j, w]");
            Edge edge;
            edge.i = as_int(e.at(0), "graph edge");
            edge.j = as_int(e.at(1), "graph edge");
            edge.w = e.size() == 3 ? as_number(e.at(2), "graph edge weight") : 1.0;
            edges.push_back(edge);
        }
    }
    return WeightedGraph(n, std::move(edges));
}

Json graph_to_json(const WeightedGraph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back(Json::array({e.i, e.j, e.w}));
    return Json{{"n", g.node_count()}, {"edges", std::move(edges)}};
}

Network parse_network(const Json& j) {
    const Json& type = require_field(j, "type", "network");
    if (!type.is_string()) throw ParseError("network.type: expected a string");
    const std::string kind = type.get<std::string>();

    if (kind == "high-order") {
        HighOrderNetwork net;
        net.order = as_int(require_field(j, "m", "high-order network"), "m");
        net.agent_count = as_int(require_field(j, "n", "high-order network"), "n");
        const Json& graphs = require_field(j, "graphs", "high-order network");
        if (!graphs.is_array()) throw ParseError("graphs: expected an array of graph objects");
        for (const auto& g : graphs) net.graphs.push_back(parse_graph(g));
        if (j.contains("gains") && !j.at("gains").is_null())
            net.gains = parse_vector(j.at("gains"), "gains");
        net.leaders = parse_leaders(j);
        try {
            net.validate();
        } catch (const Error& e) {
            throw ParseError(std::string("high-order network: ") + e.what());
        }
        return net;
    }
    if (kind == "hetero") {
        const Json& agents = require_field(j, "agents", "hetero network");
        if (!agents.is_array() || agents.empty())
            throw ParseError("agents: expected a non-empty array");
        std::vector<LinearAgent> parsed;
        for (const auto& a : agents) {
            Eigen::MatrixXd am = parse_matrix(require_field(a, "A", "agent"), "agent.A");
            Eigen::VectorXd bv = parse_vector(require_field(a, "b", "agent"), "agent.b");
            try {
                parsed.emplace_back(std::move(am), std::move(bv));
            } catch (const DimensionMismatch& e) {
                throw ParseError(std::string("agent: ") + e.what());
            }
        }
        HeteroNetwork net{std::move(parsed), parse_graph(require_field(j, "graph", "hetero network")),
                          parse_leaders(j), std::nullopt, std::nullopt};
        if (j.contains("betas") && !j.at("betas").is_null()) {
            const Json& arr = j.at("betas");
            if (!arr.is_array()) throw ParseError("betas: expected an array of arrays");
            std::vector<Eigen::VectorXd> betas;
            for (const auto& b : arr) betas.push_back(parse_vector(b, "betas"));
            net.betas = std::move(betas);
        }
        if (j.contains("drift") && !j.at("drift").is_null()) net.drift = parse_drift(j.at("drift"));
        try {
            net.validate();
        } catch (const Error& e) {
            throw ParseError(std::string("hetero network: ") + e.what());
        }
        return net;
    }
    throw ParseError("network.type must be \"high-order\" or \"hetero\"");
}

Network load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_network(j);
}

Json network_to_json(const HighOrderNetwork& net) {
    Json j{{"type", "high-order"}, {"m", net.order}, {"n", net.agent_count}};
    Json graphs = Json::array();
    for (const auto& g : net.graphs) graphs.push_back(graph_to_json(g));
    j["graphs"] = std::move(graphs);
    if (net.gains) j["gains"] = vector_to_json(*net.gains);
    j["leaders"] = net.leaders.indices;
    return j;
}

Json network_to_json(const HeteroNetwork& net) {
    Json j{{"type", "hetero"}};
    Json agents = Json::array();
    for (const auto& a : net.agents)
        agents.push_back(Json{{"A", matrix_to_json(a.A)}, {"b", vector_to_json(a.b)}});
    j["agents"] = std::move(agents);
    j["graph"] = graph_to_json(net.graph);
    j["leaders"] = net.leaders.indices;
    if (net.betas) {
        Json betas = Json::array();
        for (const auto& b : *net.betas) betas.push_back(vector_to_json(b));
        j["betas"] = std::move(betas);
    }
    if (net.drift) {
        Json values = Json::array();
        for (const auto& v : net.drift->values) values.push_back(vector_to_json(v));
        j["drift"] = Json{{"breakpoints", net.drift->breakpoints}, {"values", std::move(values)}};
    }
    return j;
}

namespace {

std::string certificate_kind_name(Certificate::Kind k) {
    switch (k) {
        case Certificate::Kind::NotLeaderFollowerConnected:
            return "not_leader_follower_connected";
        case Certificate::Kind::UnionGraphNotLeaderFollowerConnected:
            return "union_graph_not_leader_follower_connected";
        case Certificate::Kind::AgentNotControllable:
            return "agent_not_controllable";
        default:
            return "pbh_violation";
    }
}

}  // namespace

Json verdict_to_json(const Verdict& v) {
    Json j{{"status", to_string(v.status)}, {"trials_used", v.trials_used}};
    if (v.witness_coefficients) {
        j["witness"] = Json{{"coefficients", vector_to_json(*v.witness_coefficients)}};
    }
    if (v.witness_betas) {
        Json betas = Json::array();
        for (const auto& b : *v.witness_betas) betas.push_back(vector_to_json(b));
        if (!j.contains("witness")) j["witness"] = Json::object();
        j["witness"]["betas"] = std::move(betas);
    }
    if (v.certificate) {
        Json c{{"kind", certificate_kind_name(v.certificate->kind)}};
        if (v.certificate->index > 0) c["index"] = v.certificate->index;
        if (!v.certificate->component.empty()) c["component"] = v.certificate->component;
        if (v.certificate->pbh) {
            c["lambda"] = Json{{"re", v.certificate->pbh->lambda.real()},
                               {"im", v.certificate->pbh->lambda.imag()}};
            c["xi"] = complex_vector_to_json(v.certificate->pbh->xi);
        }
        j["certificate"] = std::move(c);
    }
    if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
    return j;
}

Json tolerances_to_json(const ToleranceConfig& cfg) {
    return Json{{"rank_tol_factor", cfg.rank_tol_factor},
                {"eig_cluster_tol", cfg.eig_cluster_tol},
                {"residual_tol", cfg.residual_tol}};
}

Json steering_summary_json(const SteeringResult& r) {
    return Json{{"terminal_error", r.terminal_error},
                {"gramian_condition", r.gramian_condition},
                {"t0", r.times.front()},
                {"tf", r.times.back()},
                {"grid_points", static_cast<int>(r.times.size()) - 1}};
}

}  // namespace netctrb
