// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned in code; the random families are seeded and
// deterministic. Runs standalone (fixtures are embedded).

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "netctrb/graph.hpp"
#include "netctrb/ctrb.hpp"
#include "netctrb/high_order.hpp"
#include "netctrb/hetero.hpp"
#include "netctrb/steering.hpp"
#include "netctrb/rng.hpp"

using namespace netctrb;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Cplx = std::complex<double>;

namespace {

struct Criterion {
    std::string name;
    double time_budget_s;
    std::function<bool(std::ostringstream&)> run;
};

MatrixPair regression_pair() {
    MatrixXd a(3, 3);
    a << 1, 2, 0, 1, 1, 1, 2, 1, 0;
    MatrixXd b(3, 1);
    b << 0, -1, 3;
    return MatrixPair(a, b);
}

HeteroNetwork star_network(std::vector<Edge> edges = {{1, 2, 1.0}, {1, 3, 1.0}}) {
    MatrixXd a2(2, 2);
    a2 << 1, 1, 1, 0;
    VectorXd b2(2);
    b2 << 1, 1;
    MatrixXd a3(3, 3);
    a3 << 1, 0, 0, 1, 1, 0, 1, 2, 1;
    VectorXd b3(3);
    b3 << 1, 0, 1;
    HeteroNetwork net{{LinearAgent(MatrixXd::Zero(1, 1), VectorXd::Ones(1)),
                       LinearAgent(a2, b2), LinearAgent(a3, b3)},
                      WeightedGraph(3, std::move(edges)), LeaderSet{{1}}, std::nullopt,
                      std::nullopt};
    VectorXd beta1(1), beta2(2), beta3(3);
    beta1 << 1;
    beta2 << 2, 0;
    beta3 << 3, 0, 0;
    net.betas = std::vector<VectorXd>{beta1, beta2, beta3};
    return net;
}

HighOrderNetwork five_agent_fixture() {
    std::vector<WeightedGraph> graphs{
        WeightedGraph(5, {{1, 2, 0.5}, {1, 3, 0.5}, {1, 4, 2.5}, {1, 5, 0.5}}),
        WeightedGraph(5, {{2, 3, 1.0}, {2, 5, 0.5}, {3, 4, 1.5}}),
        WeightedGraph(5, {{2, 5, 0.5}, {3, 4, 2.5}}),
    };
    return HighOrderNetwork{3, 5, std::move(graphs), Eigen::Vector3d(1.0, 1.0, 1.0),
                            LeaderSet{{1}}};
}

double span_distance(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& basis) {
    const Eigen::VectorXcd unit = v / v.norm();
    return (unit - basis * (basis.adjoint() * unit)).norm();
}

std::pair<MatrixXd, MatrixXd> seeded_pair(Rng& rng, int n, int m, bool uncontrollable) {
    MatrixXd a(n, n), b(n, m);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
        for (int c = 0; c < m; ++c) b(r, c) = rng.uniform(-1.0, 1.0);
    }
    if (!uncontrollable || n < 2) return {a, b};
    const int nc = rng.uniform_int(1, n - 1);
    a.bottomLeftCorner(n - nc, nc).setZero();
    b.bottomRows(n - nc).setZero();
    MatrixXd s(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) s(r, c) = rng.uniform(-1.0, 1.0);
    s = MatrixXd::Identity(n, n) + 0.2 * s;
    return {s * a * s.partialPivLu().inverse(), s * b};
}

WeightedGraph seeded_connected_graph(Rng& rng, int n) {
    std::vector<Edge> edges;
    for (int v = 2; v <= n; ++v)
        edges.push_back({rng.uniform_int(1, v - 1), v, rng.uniform(0.5, 2.0)});
    const int extra = rng.uniform_int(0, n);
    for (int e = 0; e < extra; ++e) {
        const int i = rng.uniform_int(1, n);
        const int j = rng.uniform_int(1, n);
        if (i == j) continue;
        const int lo = std::min(i, j), hi = std::max(i, j);
        bool dup = false;
        for (const auto& ed : edges) dup = dup || (ed.i == lo && ed.j == hi);
        if (!dup) edges.push_back({lo, hi, rng.uniform(0.5, 2.0)});
    }
    return WeightedGraph(n, std::move(edges));
}

bool criterion_regression_pair(std::ostringstream& why) {
    const auto p = regression_pair();
    const auto ub = uncontrollable_basis(p);
    if (ub.groups.size() != 1) {
        why << "expected exactly one eigenvalue group, got " << ub.groups.size();
        return false;
    }
    if (std::abs(ub.groups[0].lambda - Cplx(3, 0)) > 1e-8) {
        why << "eigenvalue " << ub.groups[0].lambda << " is not 3";
        return false;
    }
    Eigen::VectorXcd xi(3);
    xi << 5, 6, 2;
    const double resid = span_distance(xi, ub.groups[0].basis);
    if (resid > 1e-8) {
        why << "span residual " << resid;
        return false;
    }
    const auto kt = kalman_test(p);
    if (kt.rank != 2) {
        why << "kalman rank " << kt.rank << " != 2";
        return false;
    }
    return true;
}

bool criterion_star_network(std::ostringstream& why) {
    const auto net = star_network();
    const MatrixXd l = laplacian(net.graph).entries;
    const MatrixXd b = leader_input_matrix(3, net.leaders);
    if (pbh_test(MatrixPair(l, b)).controllable) {
        why << "(L, e1) unexpectedly controllable";
        return false;
    }
    const auto assembly = assemble_hetero(net);
    const auto kt = kalman_test(assembly.system.pair());
    if (kt.rank != 6 || !pbh_test(assembly.system.pair()).controllable) {
        why << "assembled rank " << kt.rank << " (want 6) or pbh failure";
        return false;
    }
    for (const auto& removed : {std::vector<Edge>{{1, 3, 1.0}}, std::vector<Edge>{{1, 2, 1.0}}}) {
        if (analyze_hetero(star_network(removed)).status != Status::Uncontrollable) {
            why << "edge removal did not destroy controllability";
            return false;
        }
    }
    return true;
}

bool criterion_five_agent_fixture(std::ostringstream& why) {
    const auto net = five_agent_fixture();
    const MatrixXd b = leader_input_matrix(5, net.leaders);
    for (int l = 0; l < 3; ++l) {
        if (pbh_test(MatrixPair(laplacian(net.graphs[l]).entries, b)).controllable) {
            why << "order-" << (l + 1) << " pair unexpectedly controllable";
            return false;
        }
    }
    if (!is_leader_follower_connected(net.graphs[0], net.leaders)) {
        why << "order-1 graph not leader-follower connected";
        return false;
    }
    if (!pbh_test(MatrixPair(laplacian(union_graph(net.graphs)).entries, b)).controllable) {
        why << "union pair not controllable";
        return false;
    }
    if (!assembled_controllable(net)) {
        why << "assembled closed loop fails the PBH test with unit gains";
        return false;
    }
    const auto v = analyze_high_order(net, 16, 1);
    if (v.status != Status::Controllable || v.trials_used > 16) {
        why << "verdict " << to_string(v.status) << " after " << v.trials_used << " trials";
        return false;
    }
    return true;
}

bool criterion_gain_statistics(std::ostringstream& why) {
    int ok = 0;
    for (int t = 0; t < 200; ++t) {
        Rng rng = sub_rng(2024, t);
        const int n = rng.uniform_int(2, 8);
        const auto g = seeded_connected_graph(rng, n);
        const LeaderSet leaders{{rng.uniform_int(1, n)}};
        VectorXd k(n);
        for (int i = 0; i < n; ++i) k(i) = rng.signed_magnitude(0.1, 2.0);
        const MatrixXd l = laplacian(g).entries;
        if (pbh_test(MatrixPair(l * k.asDiagonal(), leader_input_matrix(n, leaders))).controllable)
            ++ok;
    }
    why << ok << "/200 controllable";
    return ok >= 199;
}

bool criterion_route_agreement(std::ostringstream& why) {
    int agree = 0;
    for (int t = 0; t < 200; ++t) {
        Rng rng = sub_rng(5150, t);
        const int n = rng.uniform_int(1, 10);
        // deeper single-input chains have gramians beyond the pinned
        // 1e-10 singularity resolution, so the input count grows with n
        const int m = n <= 5 ? rng.uniform_int(1, 3) : (n <= 8 ? rng.uniform_int(2, 3) : 3);
        const bool force = rng.uniform01() < 0.35 && n >= 2;
        auto [a, b] = seeded_pair(rng, n, m, force);
        const MatrixPair p(a, b);
        const bool via_rank = kalman_test(p).controllable;
        const bool via_pbh = pbh_test(p).controllable;
        CompactSystem cs;
        cs.A = a;
        cs.B = b;
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(gramian(cs, 0.0, 2.0));
        const bool via_gramian =
            es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff();
        if (via_rank == via_pbh && via_pbh == via_gramian) ++agree;
    }
    why << agree << "/200 agree";
    return agree == 200;
}

bool criterion_steering_certificate(std::ostringstream& why) {
    const auto net = star_network();
    const auto assembly = assemble_hetero(net);
    Rng rng = sub_rng(7, 0);
    VectorXd target(6);
    for (int i = 0; i < 6; ++i) target(i) = rng.uniform(-1.0, 1.0);
    target.normalize();

    SteeringProblem p;
    p.system = assembly.system;
    p.x0 = VectorXd::Zero(6);
    p.xstar = target;
    p.t0 = 0.0;
    p.tf = 2.0;
    const auto plain = min_energy_steer(p, 1000);
    if (plain.terminal_error > 1e-5) {
        why << "terminal error " << plain.terminal_error;
        return false;
    }

    DriftSignal f;
    f.breakpoints = {0.0, 0.5, 1.5};
    for (int s = 0; s < 3; ++s) {
        Rng drift_rng = sub_rng(100, s);
        VectorXd v(6);
        for (int i = 0; i < 6; ++i) v(i) = drift_rng.uniform(-1.0, 1.0);
        f.values.push_back(v);
    }
    const auto drifted_net = with_drift(net, f);
    if (analyze_hetero(drifted_net).status != Status::Controllable) {
        why << "drift changed the verdict";
        return false;
    }
    SteeringProblem pd = p;
    pd.drift = f;
    const auto drifted = min_energy_steer(pd, 1000);
    if (drifted.terminal_error > 1e-5) {
        why << "drifted terminal error " << drifted.terminal_error;
        return false;
    }
    why << "terminal " << plain.terminal_error << ", with drift " << drifted.terminal_error;
    return true;
}

bool criterion_embedding_span(std::ostringstream& why) {
    const auto t = regression_pair();
    HeteroNetwork net{{LinearAgent(t.A, t.B.col(0)),
                       LinearAgent(MatrixXd::Zero(1, 1), VectorXd::Ones(1))},
                      WeightedGraph(2, {{1, 2, 1.0}}), LeaderSet{{1}}, std::nullopt, std::nullopt};
    VectorXd b1(3), b2(1);
    b1 << 1, 0, 0;
    b2 << 1;
    net.betas = std::vector<VectorXd>{b1, b2};

    const auto prop = analyze_xi_propagation(net);
    if (!prop.matches || !prop.leader_follower_connected) {
        why << "expected span equality on the connected fixture";
        return false;
    }
    // mutual projection residuals at 1e-8
    const auto dec = assemble_hetero_decomposed(net);
    const auto nb = uncontrollable_basis(dec.system.pair());
    if (nb.total_dim() != 1 || dec.embedded_xi.size() != 1) {
        why << "unexpected basis sizes " << nb.total_dim() << "/" << dec.embedded_xi.size();
        return false;
    }
    const Eigen::MatrixXcd u = orthonormal_span(nb.stacked());
    const Eigen::MatrixXcd v = orthonormal_span(dec.embedded_xi[0].xi_network);
    const double r1 = (u - v * (v.adjoint() * u)).norm();
    const double r2 = (v - u * (u.adjoint() * v)).norm();
    if (r1 > 1e-8 || r2 > 1e-8) {
        why << "projection residuals " << r1 << ", " << r2;
        return false;
    }

    HeteroNetwork split = net;
    split.graph = WeightedGraph(2, {});
    if (analyze_xi_propagation(split).matches) {
        why << "span equality should break without the leader-follower connection";
        return false;
    }
    return true;
}

bool criterion_basis_change(std::ostringstream& why) {
    const auto p = regression_pair();
    const MatrixPair deg(MatrixXd::Identity(3, 3) * 2.0, MatrixXd::Ones(3, 1));
    int ok = 0;
    for (int t = 0; t < 50; ++t) {
        Rng rng = sub_rng(600, t);
        const MatrixPair& pair = (t % 2 == 0) ? p : deg;
        const auto ub = uncontrollable_basis(pair);
        std::vector<Eigen::VectorXcd> xi;
        for (const auto& g : ub.groups) {
            const int r = static_cast<int>(g.basis.cols());
            MatrixXd c(r, r);
            do {
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) c(i, j) = rng.uniform(-1.0, 1.0);
            } while (std::abs(c.determinant()) < 0.1);
            const Eigen::MatrixXcd mixed = g.basis * c.cast<Cplx>();
            for (int col = 0; col < r; ++col) xi.push_back(mixed.col(col));
        }
        if (is_xi_uncontrollable(pair, xi)) ++ok;
    }
    why << ok << "/50 invariant";
    return ok == 50;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"uncontrollable-triple regression (eigenvalue 3, span (5,6,2), rank 2)", 0.1,
         criterion_regression_pair},
        {"star network with printed gain rows (rank 6, edge fragility)", 0.5,
         criterion_star_network},
        {"five-agent third-order fixture (per-order fail, union pass, unit gains)", 2.0,
         criterion_five_agent_fixture},
        {"coupling-gain statistics (200 seeded draws)", 10.0, criterion_gain_statistics},
        {"rank/PBH/gramian agreement (200 seeded pairs)", 20.0, criterion_route_agreement},
        {"minimum-energy certification with and without drift", 2.0,
         criterion_steering_certificate},
        {"uncontrollable-direction embedding span equality", 0.5, criterion_embedding_span},
        {"group basis changes preserve the xi verdict (50 draws)", 5.0, criterion_basis_change},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        std::ostringstream why;
        const auto start = std::chrono::steady_clock::now();
        bool pass = false;
        try {
            pass = c.run(why);
        } catch (const std::exception& e) {
            why << "exception: " << e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.time_budget_s) {
            pass = false;
            why << (why.str().empty() ? "" : "; ") << "over time budget " << c.time_budget_s << "s";
        }
        std::printf("[%s] %zu. %s (%.3fs)%s%s\n", pass ? "PASS" : "FAIL", i + 1, c.name.c_str(),
                    secs, why.str().empty() ? "" : " -- ", why.str().c_str());
        if (!pass) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria satisfied\n", criteria.size());
    else
        std::printf("%d criteria failed\n", failures);
    return failures;
}
