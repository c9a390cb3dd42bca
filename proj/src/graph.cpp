#include "netctrb/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace netctrb {

WeightedGraph::WeightedGraph(int node_count, std::vector<Edge> edges)
    : n_(node_count), edges_(std::move(edges)) {
    if (n_ < 1) throw ParseError("graph node count must be positive");
    std::set<std::pair<int, int>> seen;
    for (auto& e : edges_) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 1 || e.j > n_) throw ParseError("edge endpoint out of range");
        if (e.i == e.j) throw ParseError("self-loops are not allowed");
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw ParseError("edge weights must be strictly positive and finite");
        if (!seen.insert({e.i, e.j}).second)
            throw ParseError("duplicate edge (" + std::to_string(e.i) + "," +
                             std::to_string(e.j) + ")");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return std::pair{a.i, a.j} < std::pair{b.i, b.j};
    });
}

Eigen::MatrixXd WeightedGraph::adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto& e : edges_) {
        a(e.i - 1, e.j - 1) = e.w;
        a(e.j - 1, e.i - 1) = e.w;
    }
    return a;
}

void LeaderSet::validate_for(int n) const {
    if (indices.empty()) throw ParseError("leader set must be non-empty");
    int prev = 0;
    for (int idx : indices) {
        if (idx <= prev) throw ParseError("leader indices must be strictly increasing and unique");
        if (idx < 1 || idx > n) throw ParseError("leader index out of range");
        prev = idx;
    }
}

LaplacianMatrix laplacian(const WeightedGraph& g, const std::string& source) {
    const Eigen::MatrixXd a = g.adjacency();
    Eigen::MatrixXd l = -a;
    for (int k = 0; k < g.node_count(); ++k) l(k, k) = a.row(k).sum();
    return {std::move(l), source};
}

std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges()) {
        adj[e.i - 1].push_back(e.j - 1);
        adj[e.j - 1].push_back(e.i - 1);
    }
    std::vector<bool> visited(n, false);
    std::vector<std::vector<int>> components;
    for (int start = 0; start < n; ++start) {
        if (visited[start]) continue;
        std::vector<int> stack{start}, comp;
        visited[start] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v + 1);
            for (int w : adj[v]) {
                if (!visited[w]) {
                    visited[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

std::vector<int> leaderless_component(const WeightedGraph& g, const LeaderSet& leaders) {
    leaders.validate_for(g.node_count());
    for (const auto& comp : connected_components(g)) {
        const bool has_leader = std::any_of(comp.begin(), comp.end(), [&](int v) {
            return std::binary_search(leaders.indices.begin(), leaders.indices.end(), v);
        });
        if (!has_leader) return comp;
    }
    return {};
}

bool is_leader_follower_connected(const WeightedGraph& g, const LeaderSet& leaders) {
    return leaderless_component(g, leaders).empty();
}

WeightedGraph union_graph(const std::vector<WeightedGraph>& gs) {
    if (gs.empty()) throw MismatchedNodeCount("union of zero graphs is undefined");
    const int n = gs.front().node_count();
    std::map<std::pair<int, int>, double> weights;
    for (const auto& g : gs) {
        if (g.node_count() != n)
            throw MismatchedNodeCount("union graph requires a common node count");
        for (const auto& e : g.edges()) weights[{e.i, e.j}] += e.w;
    }
    std::vector<Edge> edges;
    edges.reserve(weights.size());
    for (const auto& [key, w] : weights) edges.push_back({key.first, key.second, w});
    return WeightedGraph(n, std::move(edges));
}

Eigen::MatrixXd leader_input_matrix(int n, const LeaderSet& leaders) {
    leaders.validate_for(n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, static_cast<int>(leaders.indices.size()));
    for (int k = 0; k < b.cols(); ++k) b(leaders.indices[k] - 1, k) = 1.0;
    return b;
}

}  // namespace netctrb
