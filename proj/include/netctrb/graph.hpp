#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/errors.hpp"

namespace netctrb {

/// Undirected weighted edge. Node indices are 1-based everywhere in the
/// public API and in all file formats; i < j after normalization.
struct Edge {
    int i;
    int j;
    double w;
};

/// Undirected weighted graph: no self-loops, no duplicate unordered pairs,
/// strictly positive weights. Immutable after construction.
class WeightedGraph {
public:
    /// Validates and normalizes (edges stored with i < j, sorted).
    /// Duplicate edges are rejected, not merged; merging weights is the job
    /// of union_graph only.
    WeightedGraph(int node_count, std::vector<Edge> edges);

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Dense symmetric adjacency matrix A with a_ij = a_ji = w.
    Eigen::MatrixXd adjacency() const;

private:
    int n_;
    std::vector<Edge> edges_;
};

/// Indices of agents receiving external inputs; strictly increasing, 1-based.
struct LeaderSet {
    std::vector<int> indices;

    /// Throws ParseError unless non-empty, strictly increasing and within [1, n].
    void validate_for(int n) const;
};

struct LaplacianMatrix {
    Eigen::MatrixXd entries;
    std::string source;  // originating graph identifier, informational
};

/// L = D - A with d_k = sum of row k of the adjacency matrix.
LaplacianMatrix laplacian(const WeightedGraph& g, const std::string& source = "");

/// Node sets of maximal connected subgraphs; each component sorted
/// ascending, components ordered by smallest member. Exact traversal,
/// no tolerances involved.
std::vector<std::vector<int>> connected_components(const WeightedGraph& g);

/// True iff every connected component contains at least one leader.
bool is_leader_follower_connected(const WeightedGraph& g, const LeaderSet& leaders);

/// First component containing no leader, empty if none.
std::vector<int> leaderless_component(const WeightedGraph& g, const LeaderSet& leaders);

/// Graph whose adjacency is the entrywise sum of the inputs' adjacencies.
/// Throws MismatchedNodeCount if the node counts differ.
WeightedGraph union_graph(const std::vector<WeightedGraph>& gs);

/// n x r input matrix whose k-th column is the standard basis vector of the
/// k-th leader.
Eigen::MatrixXd leader_input_matrix(int n, const LeaderSet& leaders);

}  // namespace netctrb
