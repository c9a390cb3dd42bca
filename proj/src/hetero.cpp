#include "netctrb/hetero.hpp"

#include <algorithm>
#include <cmath>

#include "netctrb/rng.hpp"

namespace netctrb {

LinearAgent::LinearAgent(Eigen::MatrixXd a, Eigen::VectorXd bvec)
    : A(std::move(a)), b(std::move(bvec)) {
    if (A.rows() != A.cols()) throw DimensionMismatch("agent state matrix must be square");
    if (A.rows() < 1) throw DimensionMismatch("agent dimension must be at least 1");
    if (b.size() != A.rows()) throw DimensionMismatch("agent input column must match its dimension");
    if (!A.allFinite() || !b.allFinite()) throw DimensionMismatch("agent entries must be finite");
}

void DriftSignal::validate() const {
    if (breakpoints.size() != values.size())
        throw DimensionMismatch("drift needs one value per breakpoint");
    if (breakpoints.empty()) throw DimensionMismatch("drift needs at least one breakpoint");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw DimensionMismatch("drift breakpoints must be strictly increasing");
    const auto d = values.front().size();
    for (const auto& v : values) {
        if (v.size() != d) throw DimensionMismatch("drift values must share a dimension");
        if (!v.allFinite()) throw DimensionMismatch("drift values must be finite");
    }
}

int DriftSignal::dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }

Eigen::VectorXd DriftSignal::at(double t) const {
    if (breakpoints.empty() || t < breakpoints.front())
        return Eigen::VectorXd::Zero(dim());
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto idx = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    return values[idx];
}

int HeteroNetwork::total_dim() const {
    int d = 0;
    for (const auto& a : agents) d += a.dim();
    return d;
}

void HeteroNetwork::validate() const {
    if (agents.empty()) throw ParseError("network needs at least one agent");
    if (graph.node_count() != static_cast<int>(agents.size()))
        throw MismatchedNodeCount("graph node count must equal the agent count");
    leaders.validate_for(graph.node_count());
    if (betas) {
        if (betas->size() != agents.size())
            throw DimensionMismatch("betas must have one row per agent");
        for (std::size_t i = 0; i < agents.size(); ++i)
            if ((*betas)[i].size() != agents[i].dim())
                throw DimensionMismatch("beta row length must match the agent dimension");
    }
    if (drift) {
        drift->validate();
        if (drift->dim() != total_dim())
            throw DimensionMismatch("drift dimension must equal the total state dimension");
    }
}

namespace {

std::vector<int> block_offsets(const std::vector<LinearAgent>& agents) {
    std::vector<int> off(agents.size() + 1, 0);
    for (std::size_t i = 0; i < agents.size(); ++i) off[i + 1] = off[i] + agents[i].dim();
    return off;
}

Eigen::MatrixXd upshift(int n) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) s(i, i + 1) = 1.0;
    return s;
}

// Gain search over one connected component; b_c holds the component's
// leader columns. Returns the found diagonal, or nothing after `trials`
// failed seeded draws.
std::optional<Eigen::VectorXd> search_component_gains(const Eigen::MatrixXd& l_c,
                                                      const Eigen::MatrixXd& b_c, int trials,
                                                      std::uint64_t seed, std::uint64_t stream,
                                                      const ToleranceConfig& cfg) {
    const int nc = static_cast<int>(l_c.rows());
    const auto works = [&](const Eigen::VectorXd& k) {
        return pbh_test(MatrixPair(l_c * k.asDiagonal(), b_c), cfg).controllable;
    };
    Eigen::VectorXd k = Eigen::VectorXd::Ones(nc);
    if (works(k)) return k;
    for (int t = 1; t <= trials; ++t) {
        Rng rng = sub_rng(seed, stream * 1000003ull + static_cast<std::uint64_t>(t));
        for (int i = 0; i < nc; ++i) k(i) = rng.signed_magnitude(0.1, 2.0);
        if (works(k)) return k;
    }
    return std::nullopt;
}

}  // namespace

HeteroAssembly assemble_hetero(const HeteroNetwork& net, const ToleranceConfig& cfg) {
    net.validate();
    if (!net.betas) throw MissingBetas("assembly requires per-agent feedback gain rows");
    const int n = static_cast<int>(net.agents.size());
    for (int i = 0; i < n; ++i)
        if (!kalman_test(net.agents[i].pair(), cfg).controllable)
            throw AgentNotControllable(i + 1, "agent " + std::to_string(i + 1) +
                                                  " is not controllable; use the decomposed assembly");

    const auto off = block_offsets(net.agents);
    const int dim = off.back();
    const Eigen::MatrixXd lap = laplacian(net.graph).entries;

    HeteroAssembly out;
    out.system.A = Eigen::MatrixXd::Zero(dim, dim);
    out.transforms.reserve(n);
    out.alphas.reserve(n);
    for (int i = 0; i < n; ++i) {
        const int mi = net.agents[i].dim();
        const CanonicalForm cf = to_controllable_canonical(net.agents[i].pair(), cfg);
        out.transforms.push_back(cf.T);
        out.alphas.push_back(cf.alpha);
        // Companion feedback cancels the bottom row exactly: pure upshift.
        out.system.A.block(off[i], off[i], mi, mi) = upshift(mi);
    }
    for (int i = 0; i < n; ++i) {
        const int row = off[i] + net.agents[i].dim() - 1;
        for (int j = 0; j < n; ++j) {
            if (lap(i, j) == 0.0) continue;
            out.system.A.block(row, off[j], 1, net.agents[j].dim()) -=
                lap(i, j) * (*net.betas)[j].transpose();
        }
    }

    const auto& leads = net.leaders.indices;
    out.system.B = Eigen::MatrixXd::Zero(dim, static_cast<int>(leads.size()));
    for (int k = 0; k < out.system.B.cols(); ++k) {
        const int agent = leads[k] - 1;
        out.system.B(off[agent] + net.agents[agent].dim() - 1, k) = 1.0;
    }

    out.system.layout.resize(dim);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < net.agents[i].dim(); ++c)
            out.system.layout[off[i] + c] = {i + 1, c + 1};
    return out;
}

GainK search_coupling_gains(const LaplacianMatrix& l, const LeaderSet& leaders, int trials,
                            std::uint64_t seed, const ToleranceConfig& cfg) {
    const int n = static_cast<int>(l.entries.rows());
    if (l.entries.cols() != n) throw DimensionMismatch("Laplacian must be square");
    leaders.validate_for(n);

    // Recover the topology from the off-diagonal pattern and search each
    // component independently: the block-diagonal structure makes the full
    // pair controllable iff every component's sub-pair is.
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (l.entries(i, j) != 0.0) edges.push_back({i + 1, j + 1, -l.entries(i, j)});
    const WeightedGraph g(n, std::move(edges));
    const auto components = connected_components(g);

    Eigen::VectorXd k = Eigen::VectorXd::Ones(n);
    std::uint64_t stream = 0;
    for (const auto& comp : components) {
        std::vector<int> comp_leaders;
        for (int v : comp)
            if (std::binary_search(leaders.indices.begin(), leaders.indices.end(), v))
                comp_leaders.push_back(v);
        if (comp_leaders.empty())
            throw NoGainExists(comp, "component without a leader admits no coupling gain");

        const int nc = static_cast<int>(comp.size());
        Eigen::MatrixXd l_c(nc, nc);
        for (int a = 0; a < nc; ++a)
            for (int b = 0; b < nc; ++b) l_c(a, b) = l.entries(comp[a] - 1, comp[b] - 1);
        Eigen::MatrixXd b_c = Eigen::MatrixXd::Zero(nc, static_cast<int>(comp_leaders.size()));
        for (std::size_t q = 0; q < comp_leaders.size(); ++q) {
            const auto pos = std::lower_bound(comp.begin(), comp.end(), comp_leaders[q]) - comp.begin();
            b_c(static_cast<int>(pos), static_cast<int>(q)) = 1.0;
        }

        const auto found = search_component_gains(l_c, b_c, trials, seed, stream++, cfg);
        if (!found)
            throw SearchExhausted("no gain found for component of size " + std::to_string(nc) +
                                  " after " + std::to_string(trials) + " draws (seed " +
                                  std::to_string(seed) + ")");
        for (int a = 0; a < nc; ++a) k(comp[a] - 1) = (*found)(a);
    }
    return GainK{k};
}

std::vector<Eigen::VectorXd> design_feedback_gains(const HeteroNetwork& net,
                                                   const BetaStrategy& strategy,
                                                   const ToleranceConfig& cfg) {
    net.validate();
    const int n = static_cast<int>(net.agents.size());
    for (int i = 0; i < n; ++i)
        if (!kalman_test(net.agents[i].pair(), cfg).controllable)
            throw AgentNotControllable(i + 1, "gain design requires controllable agents");

    Eigen::VectorXd k(n);
    if (const auto* fe = std::get_if<FirstEntryGain>(&strategy)) {
        k = search_coupling_gains(laplacian(net.graph), net.leaders, fe->trials, fe->seed, cfg).k;
    } else {
        const auto& uf = std::get<UniformFirstEntry>(strategy);
        if (uf.q == 0.0) throw std::invalid_argument("uniform first entry must be nonzero");
        const Eigen::MatrixXd b = leader_input_matrix(n, net.leaders);
        if (!pbh_test(MatrixPair(laplacian(net.graph).entries, b), cfg).controllable)
            throw LBNotControllable("uniform gains require a controllable (L, B) pair");
        k.setConstant(uf.q);
    }

    std::vector<Eigen::VectorXd> betas;
    betas.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(net.agents[i].dim());
        beta(0) = k(i);
        betas.push_back(std::move(beta));
    }
    return betas;
}

Verdict analyze_hetero(const HeteroNetwork& net, const ToleranceConfig& cfg, std::uint64_t seed,
                       int trials) {
    net.validate();
    Verdict v;
    const int n = static_cast<int>(net.agents.size());
    for (int i = 0; i < n; ++i) {
        const auto kt = kalman_test(net.agents[i].pair(), cfg);
        v.diagnostics.push_back("agent_" + std::to_string(i + 1) + "_kalman_rank=" +
                                std::to_string(kt.rank) + "/" + std::to_string(net.agents[i].dim()));
        if (!kt.controllable) {
            v.status = Status::Uncontrollable;
            v.certificate =
                Certificate{Certificate::Kind::AgentNotControllable, i + 1, {}, std::nullopt};
            return v;
        }
    }
    if (auto comp = leaderless_component(net.graph, net.leaders); !comp.empty()) {
        v.status = Status::Uncontrollable;
        v.certificate = Certificate{Certificate::Kind::NotLeaderFollowerConnected, 0,
                                    std::move(comp), std::nullopt};
        return v;
    }

    v.status = Status::Controllable;
    v.trials_used = 1;
    if (net.betas) {
        v.witness_betas = *net.betas;
        const bool ok = pbh_test(assemble_hetero(net, cfg).system.pair(), cfg).controllable;
        v.diagnostics.push_back(std::string("assembled_pbh=") + (ok ? "true" : "false"));
    } else {
        v.witness_betas = design_feedback_gains(net, FirstEntryGain{seed, trials}, cfg);
        v.diagnostics.push_back("betas synthesized by component-wise gain search (seed " +
                                std::to_string(seed) + ")");
    }
    return v;
}

DecomposedAssembly assemble_hetero_decomposed(const HeteroNetwork& net,
                                              const ToleranceConfig& cfg) {
    net.validate();
    if (!net.betas) throw MissingBetas("assembly requires per-agent feedback gain rows");
    const int n = static_cast<int>(net.agents.size());
    const auto off = block_offsets(net.agents);
    const int dim = off.back();
    const Eigen::MatrixXd lap = laplacian(net.graph).entries;

    DecomposedAssembly out;
    out.decompositions.reserve(n);
    for (int i = 0; i < n; ++i)
        out.decompositions.push_back(kalman_decomposition(net.agents[i].pair(), cfg));

    out.system.A = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        const auto& kd = out.decompositions[i];
        const int mi = net.agents[i].dim();
        const int r = kd.dim_c;
        out.system.A.block(off[i], off[i], r, r) = upshift(r);
        out.system.A.block(off[i], off[i] + r, r, mi - r) = kd.Acoupling;
        out.system.A.block(off[i] + r, off[i] + r, mi - r, mi - r) = kd.Auc;
    }
    for (int i = 0; i < n; ++i) {
        const int ri = out.decompositions[i].dim_c;
        if (ri == 0) continue;  // zero input column: no feedback path into this agent
        const int row = off[i] + ri - 1;
        for (int j = 0; j < n; ++j) {
            if (lap(i, j) == 0.0) continue;
            const int rj = out.decompositions[j].dim_c;
            // beta entries on uncontrollable coordinates are forced to zero.
            out.system.A.block(row, off[j], 1, rj) -=
                lap(i, j) * (*net.betas)[j].head(rj).transpose();
        }
    }

    const auto& leads = net.leaders.indices;
    out.system.B = Eigen::MatrixXd::Zero(dim, static_cast<int>(leads.size()));
    for (int k = 0; k < out.system.B.cols(); ++k) {
        const int agent = leads[k] - 1;
        const int r = out.decompositions[agent].dim_c;
        if (r > 0) out.system.B(off[agent] + r - 1, k) = 1.0;
    }

    out.system.layout.resize(dim);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < net.agents[i].dim(); ++c)
            out.system.layout[off[i] + c] = {i + 1, c + 1};

    for (int i = 0; i < n; ++i) {
        const UncontrollableBasis ub = uncontrollable_basis(net.agents[i].pair(), cfg);
        const Eigen::MatrixXd tinv_t =
            out.decompositions[i].T.transpose().partialPivLu().inverse();
        for (const auto& group : ub.groups) {
            for (int c = 0; c < group.basis.cols(); ++c) {
                EmbeddedXi e;
                e.agent = i + 1;
                e.lambda = group.lambda;
                e.xi_agent = group.basis.col(c);
                Eigen::VectorXcd z = tinv_t.cast<std::complex<double>>() * e.xi_agent;
                z /= z.norm();
                e.xi_network = Eigen::VectorXcd::Zero(dim);
                e.xi_network.segment(off[i], net.agents[i].dim()) = z;
                out.embedded_xi.push_back(std::move(e));
            }
        }
    }
    return out;
}

namespace {

// Betas for the propagation analysis when the network carries none:
// component-wise searched gains where a leader exists, unit gains on
// leaderless components (any value works there; the extra uncontrollable
// directions come from the topology, not the gain).
std::vector<Eigen::VectorXd> synthesize_propagation_betas(const HeteroNetwork& net,
                                                          const ToleranceConfig& cfg,
                                                          std::uint64_t seed, int trials) {
    const int n = static_cast<int>(net.agents.size());
    const Eigen::MatrixXd lap = laplacian(net.graph).entries;
    Eigen::VectorXd k = Eigen::VectorXd::Ones(n);
    std::uint64_t stream = 0;
    for (const auto& comp : connected_components(net.graph)) {
        std::vector<int> comp_leaders;
        for (int v : comp)
            if (std::binary_search(net.leaders.indices.begin(), net.leaders.indices.end(), v))
                comp_leaders.push_back(v);
        ++stream;
        if (comp_leaders.empty()) continue;
        const int nc = static_cast<int>(comp.size());
        Eigen::MatrixXd l_c(nc, nc);
        for (int a = 0; a < nc; ++a)
            for (int b = 0; b < nc; ++b) l_c(a, b) = lap(comp[a] - 1, comp[b] - 1);
        Eigen::MatrixXd b_c = Eigen::MatrixXd::Zero(nc, static_cast<int>(comp_leaders.size()));
        for (std::size_t q = 0; q < comp_leaders.size(); ++q) {
            const auto pos = std::lower_bound(comp.begin(), comp.end(), comp_leaders[q]) - comp.begin();
            b_c(static_cast<int>(pos), static_cast<int>(q)) = 1.0;
        }
        if (const auto found = search_component_gains(l_c, b_c, trials, seed, stream, cfg))
            for (int a = 0; a < nc; ++a) k(comp[a] - 1) = (*found)(a);
    }
    std::vector<Eigen::VectorXd> betas;
    betas.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(net.agents[i].dim());
        beta(0) = k(i);
        betas.push_back(std::move(beta));
    }
    return betas;
}

}  // namespace

XiPropagationResult analyze_xi_propagation(const HeteroNetwork& net, const ToleranceConfig& cfg,
                                           std::uint64_t seed, int trials) {
    net.validate();
    HeteroNetwork work = net;
    if (!work.betas) work.betas = synthesize_propagation_betas(net, cfg, seed, trials);

    const DecomposedAssembly assembly = assemble_hetero_decomposed(work, cfg);
    XiPropagationResult out;
    out.network_basis = uncontrollable_basis(assembly.system.pair(), cfg);
    out.embedded_xi = assembly.embedded_xi;
    out.leader_follower_connected = is_leader_follower_connected(net.graph, net.leaders);

    const int dim = assembly.system.dim();
    Eigen::MatrixXcd embedded(dim, static_cast<int>(assembly.embedded_xi.size()));
    for (std::size_t c = 0; c < assembly.embedded_xi.size(); ++c)
        embedded.col(static_cast<int>(c)) = assembly.embedded_xi[c].xi_network;
    const Eigen::MatrixXcd have =
        out.network_basis.empty() ? Eigen::MatrixXcd(dim, 0) : out.network_basis.stacked();
    out.matches = spans_equal(orthonormal_span(embedded), orthonormal_span(have), cfg.residual_tol);
    return out;
}

HeteroNetwork with_drift(const HeteroNetwork& net, DriftSignal f) {
    f.validate();
    if (f.dim() != net.total_dim())
        throw DimensionMismatch("drift dimension must equal the total state dimension");
    HeteroNetwork out = net;
    out.drift = std::move(f);
    return out;
}

}  // namespace netctrb
