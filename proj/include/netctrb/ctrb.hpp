#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/errors.hpp"

namespace netctrb {

/// Numerical thresholds used by every rank / eigenspace decision.
///
/// rank_tol_factor is configurable because Kalman matrices of companion
/// chains are ill-conditioned for n around 10 and beyond; eig_cluster_tol
/// groups eigenvalues that are equal in theory but split numerically
/// (repeated Laplacian eigenvalues).
struct ToleranceConfig {
    double rank_tol_factor = 100.0;
    double eig_cluster_tol = 1e-8;
    double residual_tol = 1e-8;

    void validate() const;
};

/// State/input pair of a linear system x' = Ax + Bu.
struct MatrixPair {
    Eigen::MatrixXd A;  // n x n
    Eigen::MatrixXd B;  // n x m

    MatrixPair(Eigen::MatrixXd a, Eigen::MatrixXd b);
    int order() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
};

/// One eigenvalue cluster with an orthonormal basis of its left eigenspace
/// { v : v^T A = lambda v^T }. Complex eigenvalues appear in conjugate pairs.
struct EigenPairGroup {
    std::complex<double> lambda;
    Eigen::MatrixXcd basis;  // n x k, orthonormal columns
};

/// Per-eigenvalue orthonormal bases of left eigenvectors orthogonal to B.
/// An empty group list encodes a controllable pair.
struct UncontrollableBasis {
    std::vector<EigenPairGroup> groups;

    bool empty() const { return groups.empty(); }
    int total_dim() const;
    /// All basis vectors side by side (n x total_dim).
    Eigen::MatrixXcd stacked() const;
};

struct KalmanTestResult {
    int rank;
    bool controllable;
};

struct PbhCertificate {
    std::complex<double> lambda;
    Eigen::VectorXcd xi;  // unit-norm left eigenvector with xi^T B ~ 0
};

struct PbhResult {
    bool controllable;
    std::optional<PbhCertificate> certificate;
};

/// Change of basis splitting the state into a controllable block (in
/// companion form) and an uncontrollable block:
///   T A T^-1 = [ Ac  Acoupling ]      T b = [ bc ]
///              [ 0   Auc       ],           [ 0  ].
struct KalmanDecomposition {
    Eigen::MatrixXd T;          // n x n invertible
    int dim_c;                  // controllable subspace dimension
    Eigen::MatrixXd Ac;         // dim_c x dim_c, companion form
    Eigen::MatrixXd Acoupling;  // dim_c x (n - dim_c)
    Eigen::MatrixXd Auc;        // (n - dim_c) x (n - dim_c)
    Eigen::VectorXd bc;         // dim_c, equals the last standard basis vector
};

/// Companion-form transform of a single-input controllable pair:
/// T A T^-1 has the upshift-plus-bottom-row shape with bottom row alpha,
/// and T b is the last standard basis vector.
struct CanonicalForm {
    Eigen::MatrixXd T;
    Eigen::RowVectorXd alpha;
};

/// Count of singular values above rank_tol_factor * eps * max(rows, cols) * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, const ToleranceConfig& cfg = {});

/// [B, AB, ..., A^{n-1}B], unscaled.
Eigen::MatrixXd kalman_matrix(const MatrixPair& p);

/// Rank of the controllability matrix; each power block is scaled to unit
/// max-norm before the rank decision to control the growth of ||A||^k.
KalmanTestResult kalman_test(const MatrixPair& p, const ToleranceConfig& cfg = {});

/// Eigenvalues of A clustered within eig_cluster_tol * (1 + ||A||); for each
/// cluster, an orthonormal basis of the left eigenspace at the cluster
/// representative. Groups are sorted by (Re, Im); conjugate clusters carry
/// conjugate bases. Throws EigenFailure if the eigen iteration fails.
std::vector<EigenPairGroup> left_eigenpairs(const Eigen::MatrixXd& a,
                                            const ToleranceConfig& cfg = {});

/// Controllable iff no left eigenvector of A is orthogonal to B (within
/// residual_tol * ||B||); otherwise returns one violating (lambda, xi).
PbhResult pbh_test(const MatrixPair& p, const ToleranceConfig& cfg = {});

/// For each eigenvalue cluster, the orthonormal basis of
/// (left eigenspace) ∩ (vectors orthogonal to B). Empty iff controllable.
UncontrollableBasis uncontrollable_basis(const MatrixPair& p, const ToleranceConfig& cfg = {});

/// True iff span(xi) equals the span of uncontrollable_basis(p), compared
/// over the complex field by mutual projection residuals.
bool is_xi_uncontrollable(const MatrixPair& p, const std::vector<Eigen::VectorXcd>& xi,
                          const ToleranceConfig& cfg = {});
bool is_xi_uncontrollable(const MatrixPair& p, const std::vector<Eigen::VectorXd>& xi,
                          const ToleranceConfig& cfg = {});

/// Controllability decomposition of a single-input pair; the controllable
/// block comes out in companion form. dim_c = n leaves the uncontrollable
/// block empty.
KalmanDecomposition kalman_decomposition(const MatrixPair& p, const ToleranceConfig& cfg = {});

/// Luenberger construction from the inverse controllability matrix's last
/// row. Throws NotControllable if the pair fails the Kalman test.
CanonicalForm to_controllable_canonical(const MatrixPair& p, const ToleranceConfig& cfg = {});

/// Orthonormal basis of the column span (SVD-based; columns with singular
/// value <= drop_tol * sigma_max are discarded).
Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& m, double drop_tol = 1e-12);

/// Mutual-projection span equality of two orthonormal column sets.
bool spans_equal(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v, double tol);

}  // namespace netctrb
