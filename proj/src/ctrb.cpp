#include "netctrb/ctrb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace netctrb {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Cplx = std::complex<double>;

Eigen::MatrixXcd complex_null_space(const Eigen::MatrixXcd& m, double abs_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const int cols = static_cast<int>(m.cols());
    const int nsv = static_cast<int>(s.size());
    int rank = 0;
    for (int i = 0; i < nsv; ++i)
        if (s(i) > abs_tol) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

Eigen::MatrixXd real_null_space(const Eigen::MatrixXd& m, double abs_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const int cols = static_cast<int>(m.cols());
    const int nsv = static_cast<int>(s.size());
    int rank = 0;
    for (int i = 0; i < nsv; ++i)
        if (s(i) > abs_tol) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

}  // namespace

void ToleranceConfig::validate() const {
    if (!(rank_tol_factor > 0.0) || !(eig_cluster_tol > 0.0) || !(residual_tol > 0.0))
        throw std::invalid_argument("tolerances must be strictly positive");
}

MatrixPair::MatrixPair(Eigen::MatrixXd a, Eigen::MatrixXd b) : A(std::move(a)), B(std::move(b)) {
    if (A.rows() != A.cols()) throw DimensionMismatch("state matrix must be square");
    if (B.rows() != A.rows()) throw DimensionMismatch("input matrix row count must match state dimension");
    if (!A.allFinite() || !B.allFinite()) throw DimensionMismatch("matrix entries must be finite");
}

int UncontrollableBasis::total_dim() const {
    int s = 0;
    for (const auto& g : groups) s += static_cast<int>(g.basis.cols());
    return s;
}

Eigen::MatrixXcd UncontrollableBasis::stacked() const {
    if (groups.empty()) return Eigen::MatrixXcd();
    const auto n = groups.front().basis.rows();
    Eigen::MatrixXcd out(n, total_dim());
    int c = 0;
    for (const auto& g : groups) {
        out.middleCols(c, g.basis.cols()) = g.basis;
        c += static_cast<int>(g.basis.cols());
    }
    return out;
}

int numerical_rank(const Eigen::MatrixXd& m, const ToleranceConfig& cfg) {
    cfg.validate();
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double thr =
        cfg.rank_tol_factor * kEps * static_cast<double>(std::max(m.rows(), m.cols())) * s(0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++rank;
    return rank;
}

Eigen::MatrixXd kalman_matrix(const MatrixPair& p) {
    const int n = p.order();
    const int m = p.inputs();
    Eigen::MatrixXd k(n, n * m);
    Eigen::MatrixXd block = p.B;
    for (int i = 0; i < n; ++i) {
        k.middleCols(i * m, m) = block;
        if (i + 1 < n) block = p.A * block;
    }
    return k;
}

KalmanTestResult kalman_test(const MatrixPair& p, const ToleranceConfig& cfg) {
    const int n = p.order();
    const int m = p.inputs();
    Eigen::MatrixXd k(n, n * m);
    Eigen::MatrixXd block = p.B;
    for (int i = 0; i < n; ++i) {
        const double scale = block.cwiseAbs().maxCoeff();
        k.middleCols(i * m, m) = scale > 0.0 ? (block / scale).eval() : block;
        if (i + 1 < n) block = p.A * block;
    }
    const int rank = numerical_rank(k, cfg);
    return {rank, rank == n};
}

std::vector<EigenPairGroup> left_eigenpairs(const Eigen::MatrixXd& a, const ToleranceConfig& cfg) {
    cfg.validate();
    if (a.rows() != a.cols()) throw DimensionMismatch("eigen analysis requires a square matrix");
    const int n = static_cast<int>(a.rows());
    if (n == 0) return {};

    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw EigenFailure("eigenvalue iteration did not converge");
    const Eigen::VectorXcd ev = es.eigenvalues();

    const double anorm = a.norm();
    const double cluster_tol = cfg.eig_cluster_tol * (1.0 + anorm);

    // Single-linkage clustering via union-find.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) <= cluster_tol) parent[find(i)] = find(j);

    std::vector<std::vector<int>> clusters;
    {
        std::vector<int> root_of(n, -1);
        for (int i = 0; i < n; ++i) {
            const int r = find(i);
            if (root_of[r] < 0) {
                root_of[r] = static_cast<int>(clusters.size());
                clusters.emplace_back();
            }
            clusters[root_of[r]].push_back(i);
        }
    }

    struct Cluster {
        Cplx rep;
        int size;
    };
    std::vector<Cluster> reps;
    reps.reserve(clusters.size());
    for (const auto& members : clusters) {
        Cplx mean{0.0, 0.0};
        for (int idx : members) mean += ev(idx);
        mean /= static_cast<double>(members.size());
        reps.push_back({mean, static_cast<int>(members.size())});
    }
    std::sort(reps.begin(), reps.end(), [](const Cluster& x, const Cluster& y) {
        if (x.rep.real() != y.rep.real()) return x.rep.real() < y.rep.real();
        return x.rep.imag() < y.rep.imag();
    });

    const double null_tol = std::max(cfg.eig_cluster_tol, cfg.residual_tol) * (1.0 + anorm);

    std::vector<EigenPairGroup> groups(reps.size());
    // Real-representative clusters keep a real basis; complex clusters are
    // computed for Im > 0 and mirrored onto the conjugate cluster.
    for (std::size_t c = 0; c < reps.size(); ++c) {
        const Cplx lam = reps[c].rep;
        if (std::abs(lam.imag()) <= cluster_tol) {
            const Cplx lam_real(lam.real(), 0.0);
            Eigen::MatrixXd shifted = a.transpose();
            shifted.diagonal().array() -= lam_real.real();
            Eigen::MatrixXd basis = real_null_space(shifted, null_tol);
            if (basis.cols() == 0) {
                // A cluster holds at least one computed eigenvalue, so one
                // direction always exists; fall back to the smallest
                // singular direction.
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
                basis = svd.matrixV().rightCols(1);
            }
            groups[c] = {lam_real, basis.cast<Cplx>()};
        } else if (lam.imag() > 0.0) {
            Eigen::MatrixXcd shifted = a.transpose().cast<Cplx>();
            shifted.diagonal().array() -= lam;
            Eigen::MatrixXcd basis = complex_null_space(shifted, null_tol);
            if (basis.cols() == 0) {
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
                basis = svd.matrixV().rightCols(1);
            }
            groups[c] = {lam, basis};
        }
    }
    for (std::size_t c = 0; c < reps.size(); ++c) {
        const Cplx lam = reps[c].rep;
        if (lam.imag() < -cluster_tol) {
            // Locate the conjugate partner (exists for real input matrices).
            bool found = false;
            for (std::size_t d = 0; d < reps.size(); ++d) {
                if (std::abs(reps[d].rep - std::conj(lam)) <= cluster_tol &&
                    reps[d].rep.imag() > cluster_tol) {
                    groups[c] = {std::conj(reps[d].rep), groups[d].basis.conjugate()};
                    found = true;
                    break;
                }
            }
            if (!found) {
                Eigen::MatrixXcd shifted = a.transpose().cast<Cplx>();
                shifted.diagonal().array() -= lam;
                Eigen::MatrixXcd basis = complex_null_space(shifted, null_tol);
                if (basis.cols() == 0) {
                    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
                    basis = svd.matrixV().rightCols(1);
                }
                groups[c] = {lam, basis};
            }
        }
    }
    return groups;
}

namespace {

// Smallest ||xi^T B|| over unit xi in the group's span, plus the minimizer.
// With W = B^T V (m x k), min_{|c|=1} ||W c|| is sigma_min(W); columns of V
// beyond rank(W) are exact kernel directions when k > m.
struct GroupOrthogonality {
    double min_residual;
    Eigen::VectorXcd minimizer;        // coefficients c in the group basis
    Eigen::MatrixXcd kernel_coeffs;    // all coefficient directions with ||Wc|| <= tol
};

GroupOrthogonality group_orthogonality(const Eigen::MatrixXd& b, const EigenPairGroup& g,
                                       double abs_tol) {
    const Eigen::MatrixXcd w = b.transpose().cast<Cplx>() * g.basis;  // m x k
    const int k = static_cast<int>(w.cols());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const int nsv = static_cast<int>(s.size());
    int rank = 0;
    for (int i = 0; i < nsv; ++i)
        if (s(i) > abs_tol) ++rank;
    GroupOrthogonality out;
    out.min_residual = (k > nsv) ? 0.0 : s(nsv - 1);
    out.minimizer = svd.matrixV().col(k - 1);
    out.kernel_coeffs = svd.matrixV().rightCols(k - rank);
    return out;
}

}  // namespace

PbhResult pbh_test(const MatrixPair& p, const ToleranceConfig& cfg) {
    const auto groups = left_eigenpairs(p.A, cfg);
    const double bnorm = p.B.norm();
    const double thr = cfg.residual_tol * (bnorm > 0.0 ? bnorm : 1.0);
    for (const auto& g : groups) {
        const auto orth = group_orthogonality(p.B, g, thr);
        if (orth.min_residual <= thr) {
            Eigen::VectorXcd xi = g.basis * orth.minimizer;
            xi /= xi.norm();
            return {false, PbhCertificate{g.lambda, std::move(xi)}};
        }
    }
    return {true, std::nullopt};
}

UncontrollableBasis uncontrollable_basis(const MatrixPair& p, const ToleranceConfig& cfg) {
    const auto groups = left_eigenpairs(p.A, cfg);
    const double bnorm = p.B.norm();
    const double thr = cfg.residual_tol * (bnorm > 0.0 ? bnorm : 1.0);
    UncontrollableBasis out;
    for (const auto& g : groups) {
        const auto orth = group_orthogonality(p.B, g, thr);
        if (orth.kernel_coeffs.cols() > 0)
            out.groups.push_back({g.lambda, g.basis * orth.kernel_coeffs});
    }
    return out;
}

Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& m, double drop_tol) {
    if (m.cols() == 0 || m.rows() == 0) return Eigen::MatrixXcd(m.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return Eigen::MatrixXcd(m.rows(), 0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > drop_tol * s(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

bool spans_equal(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v, double tol) {
    if (u.cols() != v.cols()) return false;
    if (u.cols() == 0) return true;
    const auto residual = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        const Eigen::MatrixXcd r = x - y * (y.adjoint() * x);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
        return svd.singularValues()(0);  // sine of the largest principal angle
    };
    return residual(u, v) <= tol && residual(v, u) <= tol;
}

bool is_xi_uncontrollable(const MatrixPair& p, const std::vector<Eigen::VectorXcd>& xi,
                          const ToleranceConfig& cfg) {
    const int n = p.order();
    for (const auto& v : xi)
        if (v.size() != n) throw DimensionMismatch("xi vector dimension must equal the state dimension");
    Eigen::MatrixXcd given(n, static_cast<int>(xi.size()));
    for (std::size_t i = 0; i < xi.size(); ++i) given.col(static_cast<int>(i)) = xi[i];

    const UncontrollableBasis ub = uncontrollable_basis(p, cfg);
    Eigen::MatrixXcd have = ub.empty() ? Eigen::MatrixXcd(n, 0) : ub.stacked();
    return spans_equal(orthonormal_span(given), orthonormal_span(have), cfg.residual_tol);
}

bool is_xi_uncontrollable(const MatrixPair& p, const std::vector<Eigen::VectorXd>& xi,
                          const ToleranceConfig& cfg) {
    std::vector<Eigen::VectorXcd> cxi;
    cxi.reserve(xi.size());
    for (const auto& v : xi) cxi.push_back(v.cast<Cplx>());
    return is_xi_uncontrollable(p, cxi, cfg);
}

CanonicalForm to_controllable_canonical(const MatrixPair& p, const ToleranceConfig& cfg) {
    if (p.inputs() != 1) throw DimensionMismatch("companion transform requires a single input column");
    const int n = p.order();
    if (!kalman_test(p, cfg).controllable)
        throw NotControllable("pair fails the Kalman rank test");

    const Eigen::MatrixXd km = kalman_matrix(p);
    // q = last row of inv(km): solve km^T q = e_n.
    const Eigen::VectorXd q =
        km.transpose().partialPivLu().solve(Eigen::VectorXd::Unit(n, n - 1));
    Eigen::MatrixXd t(n, n);
    Eigen::RowVectorXd row = q.transpose();
    for (int i = 0; i < n; ++i) {
        t.row(i) = row;
        if (i + 1 < n) row = row * p.A;
    }
    const Eigen::MatrixXd tinv = t.partialPivLu().inverse();
    const Eigen::RowVectorXd alpha = (t * p.A * tinv).row(n - 1);
    return {std::move(t), alpha};
}

KalmanDecomposition kalman_decomposition(const MatrixPair& p, const ToleranceConfig& cfg) {
    if (p.inputs() != 1)
        throw DimensionMismatch("controllability decomposition requires a single input column");
    const int n = p.order();
    const int r = kalman_test(p, cfg).rank;

    KalmanDecomposition out;
    out.dim_c = r;
    if (r == n) {
        const CanonicalForm cf = to_controllable_canonical(p, cfg);
        out.T = cf.T;
        const Eigen::MatrixXd tinv = out.T.partialPivLu().inverse();
        out.Ac = out.T * p.A * tinv;
        out.Acoupling = Eigen::MatrixXd(n, 0);
        out.Auc = Eigen::MatrixXd(0, 0);
        out.bc = out.T * p.B.col(0);
        return out;
    }

    // Orthonormal basis of the reachable subspace from the scaled Kalman
    // matrix; its orthogonal complement completes the change of basis.
    Eigen::MatrixXd scaled(n, n);
    Eigen::MatrixXd block = p.B;
    for (int i = 0; i < n; ++i) {
        const double s = block.cwiseAbs().maxCoeff();
        scaled.col(i) = s > 0.0 ? (block / s).eval() : block;
        if (i + 1 < n) block = p.A * block;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullU);
    const Eigen::MatrixXd qbasis = svd.matrixU();

    const Eigen::MatrixXd ahat = qbasis.transpose() * p.A * qbasis;
    const Eigen::VectorXd bhat = qbasis.transpose() * p.B.col(0);

    Eigen::MatrixXd tc = Eigen::MatrixXd::Identity(r, r);
    if (r > 0) {
        const CanonicalForm cf =
            to_controllable_canonical(MatrixPair(ahat.topLeftCorner(r, r), bhat.head(r)), cfg);
        tc = cf.T;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    t.topLeftCorner(r, r) = tc;
    t.bottomRightCorner(n - r, n - r).setIdentity();
    t = t * qbasis.transpose();

    const Eigen::MatrixXd tinv = t.partialPivLu().inverse();
    const Eigen::MatrixXd atil = t * p.A * tinv;
    out.T = t;
    out.Ac = atil.topLeftCorner(r, r);
    out.Acoupling = atil.topRightCorner(r, n - r);
    out.Auc = atil.bottomRightCorner(n - r, n - r);
    out.bc = (t * p.B.col(0)).head(r);
    return out;
}

}  // namespace netctrb
