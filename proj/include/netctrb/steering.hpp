#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/compact_system.hpp"
#include "netctrb/hetero.hpp"

namespace netctrb {

/// Scaling-and-squaring with diagonal Pade approximants (orders 3/5/7/9/13);
/// backward error at the level of machine precision for desk-scale inputs.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

/// Controllability Gramian of the horizon, W = integral_0^{tf-t0}
/// e^{As} B B^T e^{A^T s} ds, computed through the augmented-block
/// exponential (no quadrature). Symmetric positive semidefinite; positive
/// definite iff the pair is controllable.
Eigen::MatrixXd gramian(const CompactSystem& system, double t0, double tf);

struct SteeringProblem {
    CompactSystem system;
    Eigen::VectorXd x0;
    Eigen::VectorXd xstar;
    double t0 = 0.0;
    double tf = 2.0;
    std::optional<DriftSignal> drift;
};

struct SteeringResult {
    std::vector<double> times;     // uniform grid, grid_points + 1 samples
    Eigen::MatrixXd input;         // (grid_points + 1) x r
    Eigen::MatrixXd trajectory;    // (grid_points + 1) x N
    double terminal_error;         // ||x(tf) - xstar|| / (1 + ||xstar||)
    double gramian_condition;
};

/// Minimum-energy open-loop steering:
///   u(tau) = B^T e^{A^T (tf - tau)} W^{-1} (xstar - e^{A (tf-t0)} x0 - d),
/// d being the exact drift response over the horizon. The trajectory is
/// integrated with classical RK4 on the grid. Throws GramianSingular when
/// the smallest Gramian eigenvalue falls below 1e-10 times the largest
/// (uncontrollable pair, or a numerically too harsh horizon).
SteeringResult min_energy_steer(const SteeringProblem& p, int grid_points = 1000);

/// Plot-ready CSV with columns t, u_1..u_r, x_1..x_N.
void write_csv(const SteeringResult& r, std::ostream& os);

}  // namespace netctrb
