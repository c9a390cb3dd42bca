#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "netctrb/graph.hpp"
#include "netctrb/rng.hpp"
#include "oracles.hpp"

using namespace netctrb;
using Eigen::MatrixXd;

TEST_CASE("laplacian of K2 with unit weight") {
    WeightedGraph g(2, {{1, 2, 1.0}});
    MatrixXd expected(2, 2);
    expected << 1, -1, -1, 1;
    CHECK((laplacian(g).entries - expected).norm() == 0.0);
}

TEST_CASE("laplacian of the 3-node star") {
    WeightedGraph g(3, {{1, 2, 1.0}, {1, 3, 1.0}});
    MatrixXd expected(3, 3);
    expected << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    CHECK((laplacian(g).entries - expected).norm() == 0.0);
}

TEST_CASE("laplacian of the empty graph is zero") {
    WeightedGraph g(3, {});
    CHECK(laplacian(g).entries.isZero(0.0));
}

TEST_CASE("connected components") {
    CHECK(connected_components(WeightedGraph(3, {{1, 2, 1.0}, {2, 3, 1.0}})) ==
          std::vector<std::vector<int>>{{1, 2, 3}});
    CHECK(connected_components(WeightedGraph(4, {{1, 2, 1.0}, {3, 4, 1.0}})) ==
          std::vector<std::vector<int>>{{1, 2}, {3, 4}});
    CHECK(connected_components(WeightedGraph(1, {})) == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("leader-follower connectivity") {
    WeightedGraph path(3, {{1, 2, 1.0}, {2, 3, 1.0}});
    CHECK(is_leader_follower_connected(path, LeaderSet{{1}}));

    WeightedGraph split(4, {{1, 2, 1.0}, {3, 4, 1.0}});
    CHECK_FALSE(is_leader_follower_connected(split, LeaderSet{{1}}));
    CHECK(leaderless_component(split, LeaderSet{{1}}) == std::vector<int>{3, 4});
    CHECK(is_leader_follower_connected(split, LeaderSet{{1, 2, 3, 4}}));
}

TEST_CASE("union graph") {
    WeightedGraph a(3, {{1, 2, 1.0}});
    WeightedGraph b(3, {{2, 3, 1.0}});
    const auto u = union_graph({a, b});
    REQUIRE(u.edges().size() == 2);
    CHECK(u.edges()[0].i == 1);
    CHECK(u.edges()[0].j == 2);
    CHECK(u.edges()[1].i == 2);
    CHECK(u.edges()[1].j == 3);

    const auto same = union_graph({a, WeightedGraph(3, {})});
    CHECK((same.adjacency() - a.adjacency()).norm() == 0.0);

    const auto merged = union_graph({WeightedGraph(2, {{1, 2, 1.0}}), WeightedGraph(2, {{1, 2, 2.0}})});
    REQUIRE(merged.edges().size() == 1);
    CHECK(merged.edges()[0].w == 3.0);

    CHECK_THROWS_AS(union_graph({a, WeightedGraph(2, {})}), MismatchedNodeCount);
}

TEST_CASE("graph construction rejects invalid input") {
    CHECK_THROWS_AS(WeightedGraph(2, {{1, 1, 1.0}}), ParseError);              // self-loop
    CHECK_THROWS_AS(WeightedGraph(2, {{1, 2, 1.0}, {2, 1, 2.0}}), ParseError); // duplicate pair
    CHECK_THROWS_AS(WeightedGraph(2, {{1, 2, 0.0}}), ParseError);              // nonpositive weight
    CHECK_THROWS_AS(WeightedGraph(2, {{1, 3, 1.0}}), ParseError);              // out of range
    CHECK_THROWS_AS(WeightedGraph(0, {}), ParseError);
    // reversed endpoints are normalized, not rejected
    WeightedGraph g(3, {{3, 1, 2.0}});
    CHECK(g.edges()[0].i == 1);
    CHECK(g.edges()[0].j == 3);
}

TEST_CASE("leader set validation") {
    CHECK_THROWS_AS(LeaderSet{}.validate_for(3), ParseError);
    CHECK_THROWS_AS((LeaderSet{{2, 2}}.validate_for(3)), ParseError);
    CHECK_THROWS_AS((LeaderSet{{0}}.validate_for(3)), ParseError);
    CHECK_THROWS_AS((LeaderSet{{4}}.validate_for(3)), ParseError);
}

TEST_CASE("laplacian rows sum to zero on random graphs") {
    for (int t = 0; t < 30; ++t) {
        Rng rng = sub_rng(11, t);
        const int n = rng.uniform_int(2, 10);
        const auto g = oracles::random_connected_graph(rng, n);
        const MatrixXd l = laplacian(g).entries;
        const double row_sum = (l * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff();
        CHECK(row_sum <= 10.0 * std::numeric_limits<double>::epsilon() *
                             l.cwiseAbs().rowwise().sum().maxCoeff());
        CHECK((l - l.transpose()).norm() == 0.0);
    }
}

TEST_CASE("laplacian of a union equals the sum of laplacians") {
    for (int t = 0; t < 20; ++t) {
        Rng rng = sub_rng(12, t);
        const int n = rng.uniform_int(2, 8);
        std::vector<WeightedGraph> gs;
        MatrixXd sum = MatrixXd::Zero(n, n);
        for (int k = 0; k < 3; ++k) {
            gs.push_back(oracles::random_connected_graph(rng, n));
            sum += laplacian(gs.back()).entries;
        }
        const MatrixXd l_union = laplacian(union_graph(gs)).entries;
        CHECK((l_union - sum).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + sum.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("leader-follower connectivity is monotone") {
    for (int t = 0; t < 25; ++t) {
        Rng rng = sub_rng(13, t);
        const int n = rng.uniform_int(2, 8);
        std::vector<Edge> edges;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (rng.uniform01() < 0.3) edges.push_back({i, j, 1.0});
        WeightedGraph g(n, edges);
        LeaderSet leaders{{rng.uniform_int(1, n)}};
        if (!is_leader_follower_connected(g, leaders)) continue;

        // adding a leader never flips true -> false
        LeaderSet more = leaders;
        const int extra = rng.uniform_int(1, n);
        if (!std::binary_search(more.indices.begin(), more.indices.end(), extra)) {
            more.indices.push_back(extra);
            std::sort(more.indices.begin(), more.indices.end());
        }
        CHECK(is_leader_follower_connected(g, more));

        // adding an edge never flips true -> false
        bool added = false;
        for (int i = 1; i <= n && !added; ++i)
            for (int j = i + 1; j <= n && !added; ++j) {
                const bool present = std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
                    return e.i == i && e.j == j;
                });
                if (!present) {
                    auto extended = edges;
                    extended.push_back({i, j, 1.0});
                    CHECK(is_leader_follower_connected(WeightedGraph(n, extended), leaders));
                    added = true;
                }
            }
    }
}

TEST_CASE("zero eigenvalue count of the laplacian equals the component count") {
    for (int t = 0; t < 25; ++t) {
        Rng rng = sub_rng(14, t);
        const int n = rng.uniform_int(2, 10);
        std::vector<Edge> edges;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (rng.uniform01() < 0.25) edges.push_back({i, j, rng.uniform(0.5, 2.0)});
        WeightedGraph g(n, edges);
        const MatrixXd l = laplacian(g).entries;
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(l);
        const double tol = 1e-9 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff());
        int zeros = 0;
        for (int i = 0; i < n; ++i)
            if (std::abs(es.eigenvalues()(i)) <= tol) ++zeros;
        CHECK(zeros == static_cast<int>(connected_components(g).size()));
    }
}
