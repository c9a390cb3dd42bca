#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/compact_system.hpp"
#include "netctrb/graph.hpp"
#include "netctrb/verdict.hpp"

namespace netctrb {

/// Single agent x' = A x + b u with one input column.
struct LinearAgent {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    LinearAgent(Eigen::MatrixXd a, Eigen::VectorXd bvec);
    int dim() const { return static_cast<int>(A.rows()); }
    MatrixPair pair() const { return MatrixPair(A, b); }
};

/// Piecewise-constant signal: values[k] applies on [breakpoints[k],
/// breakpoints[k+1]); the last value extends to +inf, and the signal is
/// zero before the first breakpoint.
struct DriftSignal {
    std::vector<double> breakpoints;
    std::vector<Eigen::VectorXd> values;

    void validate() const;
    int dim() const;
    Eigen::VectorXd at(double t) const;
};

/// Heterogeneous-dynamics network: n agents of possibly different
/// dimensions coupled over one graph; beta_i is agent i's feedback gain
/// row (in its transformed coordinates), unifying the exchanged
/// information to a scalar.
struct HeteroNetwork {
    std::vector<LinearAgent> agents;
    WeightedGraph graph;
    LeaderSet leaders;
    std::optional<std::vector<Eigen::VectorXd>> betas;
    std::optional<DriftSignal> drift;

    int total_dim() const;
    void validate() const;
};

/// Nonzero diagonal coupling gains k_1..k_n.
struct GainK {
    Eigen::VectorXd k;
};

/// Assembled network plus the per-agent companion transforms (so callers
/// can map verdicts back to original coordinates) and the cancelled
/// companion rows.
struct HeteroAssembly {
    CompactSystem system;
    std::vector<Eigen::MatrixXd> transforms;   // z_i = T_i x_i
    std::vector<Eigen::RowVectorXd> alphas;    // companion bottom rows, cancelled by feedback
};

/// Builds the closed loop in per-agent companion coordinates: each diagonal
/// block is the pure upshift, and the bottom row of agent i carries
/// -l_ij * beta_j^T in agent j's column block. Input columns are the last
/// coordinate of each leader's block. Requires betas and all agents
/// controllable (use assemble_hetero_decomposed otherwise).
HeteroAssembly assemble_hetero(const HeteroNetwork& net, const ToleranceConfig& cfg = {});

/// Controllable iff every agent passes the Kalman test and the graph is
/// leader-follower connected. With betas absent, a synthesized witness is
/// attached; with betas present, the assembled PBH result is reported in
/// the diagnostics.
Verdict analyze_hetero(const HeteroNetwork& net, const ToleranceConfig& cfg = {},
                       std::uint64_t seed = 0, int trials = 64);

/// Searches diagonal gains K with (L diag(k), B) controllable. Each
/// connected component is searched independently; the all-ones draw is
/// tested first, then seeded draws from [-2,-0.1] U [0.1,2]. Throws
/// NoGainExists (with the leaderless component) when the topology is not
/// leader-follower connected, SearchExhausted after `trials` failures.
GainK search_coupling_gains(const LaplacianMatrix& l, const LeaderSet& leaders, int trials,
                            std::uint64_t seed, const ToleranceConfig& cfg = {});

/// beta_i = (k_i, 0, ..., 0) with k_i from the component-wise gain search;
/// valid whenever the graph is leader-follower connected.
struct FirstEntryGain {
    std::uint64_t seed = 0;
    int trials = 64;
};

/// beta_i = (q, 0, ..., 0) with one common q != 0; valid only when (L, B)
/// itself is controllable, checked up front.
struct UniformFirstEntry {
    double q = 1.0;
};

using BetaStrategy = std::variant<FirstEntryGain, UniformFirstEntry>;

/// Synthesizes feedback gain rows for a network of controllable agents.
std::vector<Eigen::VectorXd> design_feedback_gains(const HeteroNetwork& net,
                                                   const BetaStrategy& strategy,
                                                   const ToleranceConfig& cfg = {});

/// One uncontrollable direction of one agent, embedded into the network.
struct EmbeddedXi {
    int agent;                    // 1-based
    std::complex<double> lambda;
    Eigen::VectorXcd xi_agent;    // unit vector in the agent's original coordinates
    Eigen::VectorXcd xi_network;  // unit vector in assembled (transformed) coordinates
};

struct DecomposedAssembly {
    CompactSystem system;
    std::vector<KalmanDecomposition> decompositions;  // per agent
    std::vector<EmbeddedXi> embedded_xi;
};

/// Assembly that tolerates uncontrollable agents: each agent is first put
/// through its controllability decomposition; coupling acts on the
/// controllable sub-block's bottom row only, with beta entries on
/// uncontrollable coordinates forced to zero. Also returns every agent's
/// uncontrollable left eigenvectors embedded into network coordinates
/// (agent block, zeros elsewhere).
DecomposedAssembly assemble_hetero_decomposed(const HeteroNetwork& net,
                                              const ToleranceConfig& cfg = {});

struct XiPropagationResult {
    UncontrollableBasis network_basis;
    std::vector<EmbeddedXi> embedded_xi;
    bool matches;                    // network span == embedded per-agent span
    bool leader_follower_connected;  // the condition under which equality is expected
};

/// Computes the assembled network's uncontrollable basis and compares its
/// span with the embedded per-agent directions. Betas are taken from the
/// network or synthesized (leaderless components fall back to unit gains).
XiPropagationResult analyze_xi_propagation(const HeteroNetwork& net,
                                           const ToleranceConfig& cfg = {},
                                           std::uint64_t seed = 0, int trials = 64);

/// Same network with a drift annotation; every controllability verdict is
/// computed on the identical (A, B) pair and is unchanged by drift.
HeteroNetwork with_drift(const HeteroNetwork& net, DriftSignal f);

}  // namespace netctrb
