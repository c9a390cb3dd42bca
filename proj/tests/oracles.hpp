#pragma once

// Independent test oracles. These deliberately avoid the library's
// numerical paths: controllability is decided here by rank tests on
// [lambda I - A, B] over the raw spectrum (rank-revealing QR), and ranks of
// unscaled controllability matrices come straight from Eigen. Expected
// values asserted in the tests are computed with these routines or by hand.

#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netctrb/graph.hpp"
#include "netctrb/hetero.hpp"
#include "netctrb/rng.hpp"

namespace oracles {

inline int ctrb_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(b.cols());
    Eigen::MatrixXd k(n, n * m);
    Eigen::MatrixXd block = b;
    for (int i = 0; i < n; ++i) {
        k.middleCols(i * m, m) = block;
        if (i + 1 < n) block = a * block;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(k);
    return static_cast<int>(qr.rank());
}

/// PBH route: controllable iff rank [lambda I - A, B] = n for every
/// eigenvalue lambda of A.
inline bool pbh_controllable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(a.rows());
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXcd m(n, n + b.cols());
        m.leftCols(n) = ev(i) * Eigen::MatrixXcd::Identity(n, n) - a.cast<std::complex<double>>();
        m.rightCols(b.cols()) = b.cast<std::complex<double>>();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
        if (static_cast<int>(qr.rank()) < n) return false;
    }
    return true;
}

/// All unit left eigenvectors of A orthogonal to B, via Eigen's solver on
/// A^T and a direct orthogonality filter. Adequate for fixtures with
/// well-separated, non-defective spectra.
inline std::vector<std::pair<std::complex<double>, Eigen::VectorXcd>> orthogonal_left_eigenvectors(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol = 1e-9) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a.transpose());
    std::vector<std::pair<std::complex<double>, Eigen::VectorXcd>> out;
    for (int i = 0; i < a.rows(); ++i) {
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        v /= v.norm();
        if ((b.transpose().cast<std::complex<double>>() * v).norm() <= tol * (1.0 + b.norm()))
            out.emplace_back(es.eigenvalues()(i), std::move(v));
    }
    return out;
}

/// Random dense pair; when `uncontrollable` is set, a pair with reachable
/// dimension < n is built from a block-triangular form conjugated by a
/// well-conditioned similarity.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> random_pair(netctrb::Rng& rng, int n, int m,
                                                               bool uncontrollable) {
    const auto fill = [&](Eigen::MatrixXd& x) {
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < x.cols(); ++c) x(r, c) = rng.uniform(-1.0, 1.0);
    };
    Eigen::MatrixXd a(n, n), b(n, m);
    fill(a);
    fill(b);
    if (!uncontrollable || n < 2) return {a, b};

    const int nc = rng.uniform_int(1, n - 1);
    a.bottomLeftCorner(n - nc, nc).setZero();
    b.bottomRows(n - nc).setZero();
    Eigen::MatrixXd s(n, n);
    fill(s);
    s = Eigen::MatrixXd::Identity(n, n) + 0.2 * s;
    const Eigen::MatrixXd sinv = s.partialPivLu().inverse();
    return {s * a * sinv, s * b};
}

/// Random connected weighted graph: a random spanning tree plus extra edges,
/// weights in [0.5, 2].
inline netctrb::WeightedGraph random_connected_graph(netctrb::Rng& rng, int n) {
    std::vector<netctrb::Edge> edges;
    for (int v = 2; v <= n; ++v)
        edges.push_back({rng.uniform_int(1, v - 1), v, rng.uniform(0.5, 2.0)});
    const int extra = rng.uniform_int(0, n);
    for (int e = 0; e < extra; ++e) {
        const int i = rng.uniform_int(1, n);
        const int j = rng.uniform_int(1, n);
        if (i == j) continue;
        const auto lo = std::min(i, j), hi = std::max(i, j);
        const bool dup = std::any_of(edges.begin(), edges.end(), [&](const netctrb::Edge& ed) {
            return ed.i == lo && ed.j == hi;
        });
        if (!dup) edges.push_back({lo, hi, rng.uniform(0.5, 2.0)});
    }
    return netctrb::WeightedGraph(n, std::move(edges));
}

/// Random controllable single-input agent of dimension d (rejection
/// sampled on the oracle rank).
inline netctrb::LinearAgent random_controllable_agent(netctrb::Rng& rng, int d) {
    for (;;) {
        Eigen::MatrixXd a(d, d);
        Eigen::VectorXd b(d);
        for (int r = 0; r < d; ++r) {
            b(r) = rng.uniform(-1.0, 1.0);
            for (int c = 0; c < d; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
        }
        if (ctrb_rank(a, b) == d) return netctrb::LinearAgent(a, b);
    }
}

}  // namespace oracles
