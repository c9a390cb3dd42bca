#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/ctrb.hpp"

namespace netctrb {

enum class Status { Controllable, Uncontrollable, Inconclusive };

std::string to_string(Status s);

/// Machine-checkable reason attached to an Uncontrollable verdict.
struct Certificate {
    enum class Kind {
        NotLeaderFollowerConnected,       // index = graph order, component = leaderless nodes
        UnionGraphNotLeaderFollowerConnected,
        AgentNotControllable,             // index = agent
        Pbh,                              // pbh holds the violating pair
    };
    Kind kind;
    int index = 0;
    std::vector<int> component;
    std::optional<PbhCertificate> pbh;

    std::string describe() const;
};

/// Three-valued controllability result. A witness is present exactly for
/// Controllable verdicts; a certificate exactly for Uncontrollable ones.
struct Verdict {
    Status status = Status::Inconclusive;
    std::optional<Eigen::VectorXd> witness_coefficients;       // per-order coefficients or diagonal gains
    std::optional<std::vector<Eigen::VectorXd>> witness_betas; // per-agent feedback gain rows
    std::optional<Certificate> certificate;
    int trials_used = 0;
    std::vector<std::string> diagnostics;
};

}  // namespace netctrb
