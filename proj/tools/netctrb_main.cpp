// netctrb: controllability analysis of multi-agent networks.
//
// Subcommands:
//   analyze    decide controllability of a network file, emit a JSON report
//   gains      synthesize coupling gains / feedback gain rows
//   steer      minimum-energy open-loop steering with CSV trajectory export
//   decompose  per-agent controllability decompositions and network embedding

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "netctrb/json_io.hpp"
#include "netctrb/rng.hpp"

namespace {

using namespace netctrb;

constexpr int kExitControllable = 0;
constexpr int kExitUncontrollable = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitParse = 64;
constexpr int kExitDimension = 65;
constexpr int kExitEigen = 70;

struct CommonOptions {
    std::string file;
    std::string out;
    std::uint64_t seed = 0;
    ToleranceConfig tol;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream os(out_path);
        if (!os) throw ParseError("cannot write " + out_path);
        os << report.dump(2) << "\n";
    }
}

int exit_code_for(Status s) {
    switch (s) {
        case Status::Controllable: return kExitControllable;
        case Status::Uncontrollable: return kExitUncontrollable;
        default: return kExitInconclusive;
    }
}

Eigen::VectorXd random_unit_target(int dim, std::uint64_t seed) {
    Rng rng = sub_rng(seed, 0xa11ce);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.uniform(-1.0, 1.0);
    const double norm = v.norm();
    return norm > 0.0 ? (v / norm).eval() : Eigen::VectorXd::Unit(dim, 0).eval();
}

// Assembled pair used for certification / steering. High-order networks
// fall back to the verdict's witness coefficients as gains when none are
// given; hetero networks synthesize betas the same way analyze does.
CompactSystem assembled_for_steering(const Network& network, const Verdict& verdict,
                                     const CommonOptions& opt) {
    if (const auto* high = std::get_if<HighOrderNetwork>(&network)) {
        HighOrderNetwork net = *high;
        if (!net.gains) {
            if (!verdict.witness_coefficients)
                throw NotControllable("no gains available for steering");
            net.gains = *verdict.witness_coefficients;
        }
        return assemble_high_order(net);
    }
    const auto& hetero = std::get<HeteroNetwork>(network);
    HeteroNetwork net = hetero;
    if (!net.betas) {
        if (verdict.witness_betas)
            net.betas = *verdict.witness_betas;
        else
            net.betas = design_feedback_gains(net, FirstEntryGain{opt.seed, 64}, opt.tol);
    }
    // The decomposed assembly coincides with the plain one for controllable
    // agents and stays well-defined otherwise; uncontrollable networks then
    // surface as a singular gramian rather than an assembly error.
    return assemble_hetero_decomposed(net, opt.tol).system;
}

Json analysis_checks(const HighOrderNetwork& net, const ToleranceConfig& tol) {
    Json checks = Json::array();
    for (int l = 0; l < net.order; ++l) {
        checks.push_back(Json{
            {"name", "leader_follower_connected_order_" + std::to_string(l + 1)},
            {"pass", is_leader_follower_connected(net.graphs[l], net.leaders)}});
    }
    checks.push_back(Json{{"name", "union_graph_screen"},
                          {"result", to_string(union_graph_screen(net, tol))}});
    if (net.gains) {
        checks.push_back(
            Json{{"name", "assembled_pbh"}, {"pass", assembled_controllable(net, tol)}});
    }
    return checks;
}

Json analysis_checks(const HeteroNetwork& net, const ToleranceConfig& tol) {
    Json checks = Json::array();
    for (std::size_t i = 0; i < net.agents.size(); ++i) {
        const auto kt = kalman_test(net.agents[i].pair(), tol);
        checks.push_back(Json{{"name", "agent_" + std::to_string(i + 1) + "_controllable"},
                              {"rank", kt.rank},
                              {"dim", net.agents[i].dim()},
                              {"pass", kt.controllable}});
    }
    checks.push_back(Json{{"name", "leader_follower_connected"},
                          {"pass", is_leader_follower_connected(net.graph, net.leaders)}});
    if (net.betas) {
        bool all_ok = true;
        for (const auto& a : net.agents)
            all_ok = all_ok && kalman_test(a.pair(), tol).controllable;
        if (all_ok) {
            const auto assembly = assemble_hetero(net, tol);
            const auto kt = kalman_test(assembly.system.pair(), tol);
            checks.push_back(Json{{"name", "assembled_pbh"},
                                  {"pass", pbh_test(assembly.system.pair(), tol).controllable},
                                  {"kalman_rank", kt.rank},
                                  {"dim", assembly.system.dim()}});
        }
    }
    return checks;
}

int run_analyze(const CommonOptions& opt, int trials, bool certify) {
    const auto t_start = std::chrono::steady_clock::now();
    const Network network = load_network_file(opt.file);
    const double parse_ms = elapsed_ms(t_start);

    const auto t_analysis = std::chrono::steady_clock::now();
    Json report{{"schema", "netctrb-report-v1"}};
    Verdict verdict;
    if (const auto* high = std::get_if<HighOrderNetwork>(&network)) {
        verdict = analyze_high_order(*high, trials, opt.seed, opt.tol);
        report["network_type"] = "high-order";
        report["checks"] = analysis_checks(*high, opt.tol);
    } else {
        const auto& het = std::get<HeteroNetwork>(network);
        verdict = analyze_hetero(het, opt.tol, opt.seed, trials);
        report["network_type"] = "hetero";
        report["checks"] = analysis_checks(het, opt.tol);
    }
    report["verdict"] = verdict_to_json(verdict);
    report["seed"] = opt.seed;
    report["trials"] = trials;
    report["tolerances"] = tolerances_to_json(opt.tol);
    const double analysis_ms = elapsed_ms(t_analysis);

    double steer_ms = 0.0;
    if (certify && verdict.status == Status::Controllable) {
        const auto t_steer = std::chrono::steady_clock::now();
        try {
            SteeringProblem problem;
            problem.system = assembled_for_steering(network, verdict, opt);
            problem.x0 = Eigen::VectorXd::Zero(problem.system.dim());
            problem.xstar = random_unit_target(problem.system.dim(), opt.seed);
            if (const auto* het = std::get_if<HeteroNetwork>(&network); het && het->drift)
                problem.drift = het->drift;
            const SteeringResult sr = min_energy_steer(problem, 1000);
            report["steering"] = steering_summary_json(sr);
        } catch (const GramianSingular& e) {
            report["steering"] = Json{{"error", e.what()}, {"gramian_condition", e.condition}};
        }
        steer_ms = elapsed_ms(t_steer);
    }

    report["timing_ms"] = Json{{"parse", parse_ms},
                               {"analysis", analysis_ms},
                               {"steer", steer_ms},
                               {"total", elapsed_ms(t_start)}};
    emit(report, opt.out);
    return exit_code_for(verdict.status);
}

int run_gains(const CommonOptions& opt, int trials, const std::string& strategy, double q) {
    std::ifstream in(opt.file);
    if (!in) throw ParseError("cannot open " + opt.file);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(opt.file + ": " + e.what());
    }

    Json report{{"schema", "netctrb-gains-v1"}, {"seed", opt.seed}, {"strategy", strategy}};

    std::optional<HeteroNetwork> hetero;
    WeightedGraph graph(1, {});
    LeaderSet leaders;
    if (j.contains("type")) {
        const Network network = parse_network(j);
        const auto* het = std::get_if<HeteroNetwork>(&network);
        if (!het) throw ParseError("gains synthesis expects a hetero network or a graph file");
        hetero = *het;
        graph = het->graph;
        leaders = het->leaders;
    } else {
        // Bare {"graph": {...}, "leaders": [...]} input.
        if (!j.contains("graph") || !j.contains("leaders"))
            throw ParseError("gains input needs a network \"type\" or \"graph\"+\"leaders\"");
        graph = parse_graph(j.at("graph"));
        if (!j.at("leaders").is_array()) throw ParseError("leaders: expected an array");
        for (const auto& v : j.at("leaders")) {
            if (!v.is_number_integer()) throw ParseError("leaders: expected integers");
            leaders.indices.push_back(v.get<int>());
        }
        leaders.validate_for(graph.node_count());
    }

    try {
        const GainK gains =
            search_coupling_gains(laplacian(graph), leaders, trials, opt.seed, opt.tol);
        report["K"] = vector_to_json(gains.k);
        const Eigen::MatrixXd b = leader_input_matrix(graph.node_count(), leaders);
        const bool verified =
            pbh_test(MatrixPair(laplacian(graph).entries * gains.k.asDiagonal(), b), opt.tol)
                .controllable;
        report["verification"] = Json{{"pbh", verified}};

        if (hetero) {
            BetaStrategy bs = FirstEntryGain{opt.seed, trials};
            if (strategy == "uniform") bs = UniformFirstEntry{q};
            const auto betas = design_feedback_gains(*hetero, bs, opt.tol);
            Json jb = Json::array();
            for (const auto& beta : betas) jb.push_back(vector_to_json(beta));
            report["betas"] = std::move(jb);
            HeteroNetwork with_betas = *hetero;
            with_betas.betas = betas;
            report["verification"]["assembled_pbh"] =
                pbh_test(assemble_hetero(with_betas, opt.tol).system.pair(), opt.tol).controllable;
        }
        emit(report, opt.out);
        return 0;
    } catch (const NoGainExists& e) {
        report["error"] = e.what();
        report["leaderless_component"] = e.leaderless_component;
        emit(report, opt.out);
        return 1;
    } catch (const LBNotControllable& e) {
        report["error"] = e.what();
        emit(report, opt.out);
        return 1;
    }
}

int run_steer(const CommonOptions& opt, double t0, double tf, int grid,
              const std::string& target_spec, const std::string& out_csv, int trials) {
    const Network network = load_network_file(opt.file);
    Verdict verdict;
    if (const auto* high = std::get_if<HighOrderNetwork>(&network))
        verdict = analyze_high_order(*high, trials, opt.seed, opt.tol);
    else
        verdict = analyze_hetero(std::get<HeteroNetwork>(network), opt.tol, opt.seed, trials);

    SteeringProblem problem;
    problem.system = assembled_for_steering(network, verdict, opt);
    problem.t0 = t0;
    problem.tf = tf;
    problem.x0 = Eigen::VectorXd::Zero(problem.system.dim());
    if (target_spec.empty() || target_spec == "random") {
        problem.xstar = random_unit_target(problem.system.dim(), opt.seed);
    } else {
        Json tj;
        try {
            tj = Json::parse(target_spec);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("--target: ") + e.what());
        }
        problem.xstar = parse_vector(tj, "--target");
        if (problem.xstar.size() != problem.system.dim())
            throw DimensionMismatch("--target dimension must equal the assembled state dimension");
    }
    if (const auto* het = std::get_if<HeteroNetwork>(&network); het && het->drift)
        problem.drift = het->drift;

    try {
        const SteeringResult sr = min_energy_steer(problem, grid);
        if (!out_csv.empty()) {
            std::ofstream os(out_csv);
            if (!os) throw ParseError("cannot write " + out_csv);
            write_csv(sr, os);
        }
        Json report = steering_summary_json(sr);
        report["schema"] = "netctrb-steer-v1";
        report["verdict"] = to_string(verdict.status);
        if (!out_csv.empty()) report["csv"] = out_csv;
        emit(report, opt.out);
        return 0;
    } catch (const GramianSingular& e) {
        Json report{{"schema", "netctrb-steer-v1"},
                    {"error", e.what()},
                    {"gramian_condition", e.condition}};
        emit(report, opt.out);
        return 1;
    }
}

int run_decompose(const CommonOptions& opt, const std::string& agent_spec, int trials) {
    const Network network = load_network_file(opt.file);
    const auto* het = std::get_if<HeteroNetwork>(&network);
    if (!het) throw ParseError("decompose expects a hetero network file");

    Json report{{"schema", "netctrb-decompose-v1"}};
    const auto agent_json = [&](int i) {
        const auto kd = kalman_decomposition(het->agents[i].pair(), opt.tol);
        const auto ub = uncontrollable_basis(het->agents[i].pair(), opt.tol);
        Json xi = Json::array();
        for (const auto& g : ub.groups)
            for (int c = 0; c < g.basis.cols(); ++c)
                xi.push_back(Json{{"lambda", Json{{"re", g.lambda.real()}, {"im", g.lambda.imag()}}},
                                  {"xi", complex_vector_to_json(g.basis.col(c))}});
        return Json{{"agent", i + 1},
                    {"dim", het->agents[i].dim()},
                    {"dim_c", kd.dim_c},
                    {"T", matrix_to_json(kd.T)},
                    {"Ac", matrix_to_json(kd.Ac)},
                    {"Acoupling", matrix_to_json(kd.Acoupling)},
                    {"Auc", matrix_to_json(kd.Auc)},
                    {"bc", vector_to_json(kd.bc)},
                    {"xi_basis", std::move(xi)}};
    };

    if (agent_spec == "all") {
        Json agents = Json::array();
        for (std::size_t i = 0; i < het->agents.size(); ++i)
            agents.push_back(agent_json(static_cast<int>(i)));
        report["agents"] = std::move(agents);

        const auto prop = analyze_xi_propagation(*het, opt.tol, opt.seed, trials);
        Json embedded = Json::array();
        for (const auto& e : prop.embedded_xi)
            embedded.push_back(Json{{"agent", e.agent},
                                    {"lambda", Json{{"re", e.lambda.real()}, {"im", e.lambda.imag()}}},
                                    {"xi_network", complex_vector_to_json(e.xi_network)}});
        report["network"] = Json{{"embedded_xi", std::move(embedded)},
                                 {"uncontrollable_dim", prop.network_basis.total_dim()},
                                 {"span_matches_embedding", prop.matches},
                                 {"leader_follower_connected", prop.leader_follower_connected}};
    } else {
        int idx = 0;
        try {
            idx = std::stoi(agent_spec);
        } catch (const std::exception&) {
            throw ParseError("--agent expects an index or \"all\"");
        }
        if (idx < 1 || idx > static_cast<int>(het->agents.size()))
            throw ParseError("--agent index out of range");
        report["agents"] = Json::array({agent_json(idx - 1)});
    }
    emit(report, opt.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Controllability analysis of multi-agent networks"};
    app.require_subcommand(1);

    CommonOptions opt;
    int trials = 16;
    bool certify = false;
    double t0 = 0.0, tf = 2.0, q = 1.0;
    int grid = 1000;
    std::string target_spec, out_csv, strategy = "first-entry-k", agent_spec = "all";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", opt.file, "network JSON file")->required();
        cmd->add_option("--out", opt.out, "write the JSON report here instead of stdout");
        cmd->add_option("--seed", opt.seed, "seed for every randomized draw")
            ->envname("HETNET_SEED");
        cmd->add_option("--tol-rank-factor", opt.tol.rank_tol_factor,
                        "singular-value rank threshold factor");
        cmd->add_option("--tol-eig-cluster", opt.tol.eig_cluster_tol,
                        "eigenvalue clustering tolerance");
        cmd->add_option("--tol-residual", opt.tol.residual_tol, "orthogonality residual tolerance");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "decide controllability of a network file");
    add_common(analyze);
    analyze->add_option("--trials", trials, "coefficient draws for the randomized decision");
    analyze->add_flag("--certify", certify, "also run a minimum-energy steering certificate");

    CLI::App* gains = app.add_subcommand("gains", "synthesize coupling gains");
    add_common(gains);
    gains->add_option("--trials", trials, "draws per connected component");
    gains->add_option("--strategy", strategy, "first-entry-k | uniform")
        ->check(CLI::IsMember({"first-entry-k", "uniform"}));
    gains->add_option("--q", q, "common first entry for the uniform strategy");

    CLI::App* steer = app.add_subcommand("steer", "minimum-energy steering");
    add_common(steer);
    steer->add_option("--t0", t0, "horizon start");
    steer->add_option("--tf", tf, "horizon end");
    steer->add_option("--grid", grid, "RK4 grid points");
    steer->add_option("--target", target_spec, "JSON array target state, or \"random\"");
    steer->add_option("--out-csv", out_csv, "trajectory CSV path");
    steer->add_option("--trials", trials, "verdict trials before steering");

    CLI::App* decompose = app.add_subcommand("decompose", "per-agent controllability decomposition");
    add_common(decompose);
    decompose->add_option("--agent", agent_spec, "agent index or \"all\"");
    decompose->add_option("--trials", trials, "gain-search draws for the network embedding");

    CLI11_PARSE(app, argc, argv);

    try {
        opt.tol.validate();
        if (analyze->parsed()) return run_analyze(opt, trials, certify);
        if (gains->parsed()) return run_gains(opt, trials, strategy, q);
        if (steer->parsed()) return run_steer(opt, t0, tf, grid, target_spec, out_csv, trials);
        if (decompose->parsed()) return run_decompose(opt, agent_spec, trials);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DimensionMismatch& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const EigenFailure& e) {
        std::cerr << "eigen failure: " << e.what() << "\n";
        return kExitEigen;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitDimension;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEigen;
    }
    return 0;
}
