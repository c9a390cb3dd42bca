#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/compact_system.hpp"
#include "netctrb/graph.hpp"
#include "netctrb/verdict.hpp"

namespace netctrb {

/// Network of n identical integrator chains of length `order`; the l-th
/// order information flows over its own graph graphs[l-1].
struct HighOrderNetwork {
    int order = 1;   // m
    int agent_count = 0;
    std::vector<WeightedGraph> graphs;       // size m, common node count
    std::optional<Eigen::VectorXd> gains;    // k_1..k_m
    LeaderSet leaders;

    void validate() const;
};

/// Closed-loop pair
///   A = S (x) I_n - sum_l (e_m e_l^T) (x) (k_l L_l),   B = e_m (x) B_leaders,
/// with S the m x m upshift. State ordering is order-major: all agents'
/// order-1 coordinates first, matching the Kronecker structure literally.
/// Throws MissingGains when gains are absent.
CompactSystem assemble_high_order(const HighOrderNetwork& net);

/// Main decision procedure. Uncontrollable when the order-1 graph or the
/// union graph is not leader-follower connected. Otherwise tests the
/// deterministic coefficient draw c = 1 first, then `trials` seeded draws
/// from [-1,1]^m, against pbh(sum_l c_l L_l, B); any success yields a
/// Controllable verdict with witness c. All failures yield Inconclusive:
/// the controllable coefficient set is either empty or generic, so a
/// definite negative cannot be concluded from finitely many draws.
Verdict analyze_high_order(const HighOrderNetwork& net, int trials = 16,
                           std::uint64_t seed = 0, const ToleranceConfig& cfg = {});

enum class UnionScreen { SufficientPass, NecessaryFail, Neither };

std::string to_string(UnionScreen s);

/// Cheap union-graph screen: SufficientPass certifies controllability,
/// NecessaryFail certifies uncontrollability, Neither decides nothing.
UnionScreen union_graph_screen(const HighOrderNetwork& net, const ToleranceConfig& cfg = {});

/// PBH test on the assembled closed loop; needs gains.
bool assembled_controllable(const HighOrderNetwork& net, const ToleranceConfig& cfg = {});

}  // namespace netctrb
