#pragma once

#include <vector>

#include <Eigen/Dense>

#include "netctrb/ctrb.hpp"

namespace netctrb {

/// Assembled closed-loop pair for a whole network, with block-structure
/// metadata mapping each state row to its (agent, coordinate).
struct CompactSystem {
    Eigen::MatrixXd A;  // N x N
    Eigen::MatrixXd B;  // N x r, distinct standard basis columns

    struct RowInfo {
        int agent;       // 1-based
        int coordinate;  // 1-based order (high-order nets) or block coordinate
    };
    std::vector<RowInfo> layout;  // size N

    int dim() const { return static_cast<int>(A.rows()); }
    MatrixPair pair() const { return MatrixPair(A, B); }
};

}  // namespace netctrb
