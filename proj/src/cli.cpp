#include "neat/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "neat/evalstats.hpp"
#include "neat/io.hpp"

namespace neat {

namespace {

using ordered_json = nlohmann::ordered_json;

enum class LogLevel { Warn = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("NEAT_LOG");
        if (!env) return LogLevel::Warn;
        const std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Warn;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "info: " << msg << '\n';
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "debug: " << msg << '\n';
}

void log_warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int effective_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<NodeSet> sets_from_gmt(const Network& net, const std::vector<GmtSet>& gmt_sets) {
    std::vector<NodeSet> sets;
    sets.reserve(gmt_sets.size());
    for (const GmtSet& g : gmt_sets) {
        std::vector<std::string> missing;
        sets.push_back(NodeSet::from_names(net, g.name, g.members, &missing));
        if (!missing.empty()) {
            std::string joined;
            for (const std::string& m : missing) {
                if (!joined.empty()) joined += ", ";
                joined += m;
            }
            log_warn("set '" + g.name + "': " + std::to_string(missing.size()) +
                     " member(s) absent from the network, dropped: " + joined);
        }
    }
    return sets;
}

Network load_network(const std::string& path, NetworkKind kind, BuildStats& stats) {
    const auto rows = read_edge_tsv_file(path, kind);
    Network net = Network::build(rows, kind, &stats);
    for (const std::string& node : stats.self_loop_nodes)
        log_warn("self-loop on node '" + node + "' rejected");
    if (stats.duplicate_rows > 0)
        log_warn(std::to_string(stats.duplicate_rows) + " duplicate edge row(s) collapsed");
    log_debug("network: " + std::to_string(net.node_count()) + " nodes, " +
              std::to_string(net.edge_count()) +
              (kind == NetworkKind::Undirected ? " edges" : " arcs"));
    return net;
}

// Network and set grid for simulate/bench presets, without any injection.
struct ScenarioFixture {
    Network net;
    std::vector<NodeSet> sets;
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
};

ScenarioFixture build_fixture(const ScenarioSpec& spec) {
    Rng root(spec.seed);
    Rng deg_rng = root.stream(1);
    Rng graph_rng = root.stream(2);
    Rng set_rng = root.stream(3);
    Network net = [&] {
        if (spec.kind == NetworkKind::Undirected) {
            const auto degrees =
                sample_degree_sequence_undirected(spec.degrees, spec.node_count, deg_rng);
            return realize_undirected(degrees, graph_rng);
        }
        const auto [out, in] = sample_degree_sequence_directed(spec.degrees, spec.node_count, deg_rng);
        return realize_directed(out, in, graph_rng);
    }();
    std::vector<NodeSet> sets =
        make_set_grid(net, spec.set_count, spec.set_size_min, spec.set_size_max, set_rng);
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    for (std::int32_t i = 0; i < spec.set_count; ++i)
        for (std::int32_t j = 0; j < spec.set_count; ++j) {
            if (i == j) continue;
            if (spec.kind == NetworkKind::Undirected && i > j) continue;
            pairs.emplace_back(i, j);
        }
    return {std::move(net), std::move(sets), std::move(pairs)};
}

ordered_json spec_to_json(const ScenarioSpec& spec) {
    ordered_json j;
    j["id"] = spec.id;
    j["kind"] = to_string(spec.kind);
    j["law"] = spec.degrees.law == DegreeSpec::Law::PowerLaw ? "power_law" : "poisson_mixture";
    if (spec.degrees.law == DegreeSpec::Law::PowerLaw) {
        j["exponent"] = spec.degrees.exponent;
        j["min_degree"] = spec.degrees.min_degree;
    } else {
        j["lambda1"] = spec.degrees.lambda1;
        j["lambda2"] = spec.degrees.lambda2;
        j["weight1"] = spec.degrees.weight1;
        j["weight2"] = spec.degrees.weight2;
    }
    j["node_count"] = spec.node_count;
    if (spec.overlap_mode()) {
        j["set_size"] = spec.set_size_max;
        j["overlap_schedule"] = spec.overlap_schedule;
        j["tests_per_level"] = spec.tests_per_level;
        j["inject_link_count"] = spec.inject_link_count;
    } else {
        j["set_count"] = spec.set_count;
        j["set_size_min"] = spec.set_size_min;
        j["set_size_max"] = spec.set_size_max;
        j["enriched_pair_count"] = spec.enriched_pair_count;
        j["effect_min"] = spec.effect_min;
        j["effect_max"] = spec.effect_max;
    }
    j["seed"] = spec.seed;
    return j;
}

}  // namespace

std::string scenario_report_to_json(const ScenarioReport& report) {
    ordered_json j;
    j["spec"] = spec_to_json(report.spec);
    j["n_tests"] = report.n_tests;
    j["n_null"] = report.n_null;
    j["n_enriched"] = report.n_enriched;
    j["degenerate"] = report.degenerate_count;
    j["graph_density"] = report.graph_density;
    if (!report.spec.overlap_mode()) {
        j["overlap_mean_jaccard"] = report.overlap.mean_jaccard;
        j["overlap_max_jaccard"] = report.overlap.max_jaccard;
    }
    j["ks_D"] = report.ks_d;
    j["ks_p"] = report.ks_p;
    j["R1"] = report.r1;
    j["R5"] = report.r5;
    j["sensitivity"] = report.sensitivity_defined ? ordered_json(report.sensitivity)
                                                  : ordered_json(nullptr);
    j["specificity"] = report.specificity_defined ? ordered_json(report.specificity)
                                                  : ordered_json(nullptr);
    j["auc"] = report.auc_defined ? ordered_json(report.auc_value) : ordered_json(nullptr);
    if (report.spec.overlap_mode()) {
        ordered_json levels = ordered_json::array();
        for (const auto& lv : report.levels) {
            ordered_json l;
            l["intersection"] = lv.intersection;
            l["jaccard"] = lv.jaccard;
            l["sensitivity"] = lv.sensitivity;
            l["specificity"] = lv.specificity;
            l["n_tests"] = lv.n_tests;
            levels.push_back(std::move(l));
        }
        j["levels"] = std::move(levels);
    }
    return j.dump(2) + "\n";
}

int cmd_test(const TestCommandConfig& config) {
    apply_threads(config.threads);

    BuildStats stats;
    const Network net = load_network(config.network_path, config.kind, stats);
    const auto gmt_a = read_gmt_file(config.sets_a_path);
    const auto gmt_b = read_gmt_file(config.sets_b_path);
    if (gmt_a.empty()) throw BadInput("no sets in '" + config.sets_a_path + "'");
    if (gmt_b.empty()) throw BadInput("no sets in '" + config.sets_b_path + "'");

    const std::vector<NodeSet> targets = sets_from_gmt(net, gmt_a);
    const std::vector<NodeSet> functionals = sets_from_gmt(net, gmt_b);

    TestSpec spec;
    spec.alpha = config.alpha;
    spec.adjust = config.adjust;
    spec.validate();

    const std::vector<EnrichmentResult> results = test_batch(net, targets, functionals, spec);

    std::ostringstream body;
    body << "# network: nodes=" << net.node_count() << " edges=" << net.edge_count()
         << " duplicates_collapsed=" << stats.duplicate_rows
         << " self_loops_rejected=" << stats.self_loop_nodes.size() << "\n";
    write_results_tsv(body, results);

    if (config.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(config.out_path, std::ios::binary);
        if (!out) throw BadInput("cannot write to '" + config.out_path + "'");
        out << body.str();
    }

    std::int64_t over = 0, under = 0, none = 0, degenerate = 0;
    for (const auto& r : results) {
        if (r.degenerate) {
            ++degenerate;
            continue;
        }
        switch (r.call) {
            case Call::Over: ++over; break;
            case Call::Under: ++under; break;
            case Call::NoEvidence: ++none; break;
        }
    }
    std::cerr << "tests=" << results.size() << " over=" << over << " under=" << under
              << " no_evidence=" << none << " degenerate=" << degenerate
              << " alpha=" << config.alpha << '\n';
    return 0;
}

int cmd_simulate(const SimulateCommandConfig& config) {
    apply_threads(config.threads);

    ScenarioSpec spec;
    if (!config.config_path.empty()) {
        std::ifstream in(config.config_path);
        if (!in) throw BadInput("cannot open config '" + config.config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        spec = scenario_from_kv(ss.str());
        if (config.nodes > 0) spec.node_count = config.nodes;
        spec.seed = config.seed;
        spec.validate();
    } else {
        spec = scenario_preset(config.scenario, config.nodes, config.seed);
    }

    log_info("scenario " + spec.id + ": " + std::to_string(spec.node_count) + " nodes, seed " +
             std::to_string(spec.seed));
    const ScenarioReport report = run_scenario(spec);
    log_info("scenario batch wall time: " + std::to_string(report.wall_time_seconds) + " s");

    const std::string json = scenario_report_to_json(report);
    if (config.out_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(config.out_path, std::ios::binary);
        if (!out) throw BadInput("cannot write to '" + config.out_path + "'");
        out << json;
    }
    return 0;
}

int cmd_bench(const BenchCommandConfig& config) {
    apply_threads(config.threads);
    if (config.perms < 1) throw BadInput("--perms must be at least 1");

    const ScenarioSpec spec = scenario_preset(config.scenario, config.nodes, config.seed);
    if (spec.overlap_mode())
        throw BadInput("bench uses the grid scenarios (s1, s2, s4, s5)");
    ScenarioFixture fx = build_fixture(spec);
    log_info("bench fixture: " + std::to_string(fx.pairs.size()) + " pairs on " +
             std::to_string(spec.node_count) + " nodes");

    Rng root(spec.seed);
    Rng bench_rng = root.stream(6);
    const SpeedBenchmark bench = speed_benchmark(fx.net, fx.sets, fx.pairs, config.perms, bench_rng);

    ordered_json j;
    j["scenario"] = spec.id;
    j["seed"] = spec.seed;
    j["n_pairs"] = bench.n_pairs;
    j["n_perms"] = bench.n_perms;
    j["t_neat_seconds"] = bench.t_neat_seconds;
    j["t_perm_seconds"] = bench.t_perm_seconds;
    j["ratio"] = bench.ratio;
    j["threads"] = effective_threads();
#ifdef __VERSION__
    j["hardware_note"] = std::string("compiled with ") + __VERSION__ + ", " +
                         std::to_string(effective_threads()) + " thread(s)";
#else
    j["hardware_note"] = std::to_string(effective_threads()) + " thread(s)";
#endif
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"network enrichment analysis test"};
    app.require_subcommand(1);

    TestCommandConfig test_cfg;
    std::string type_str = "directed";
    std::string adjust_str = "none";
    CLI::App* test = app.add_subcommand("test", "run enrichment tests on a network and set files");
    test->add_option("--network", test_cfg.network_path, "edge-list TSV")->required();
    test->add_option("--type", type_str, "directed|undirected|mixed")->required();
    test->add_option("--sets-a", test_cfg.sets_a_path, "target sets (GMT)")->required();
    test->add_option("--sets-b", test_cfg.sets_b_path, "functional sets (GMT)")->required();
    test->add_option("--alpha", test_cfg.alpha, "significance level (default 0.01)");
    test->add_option("--adjust", adjust_str, "none|bh");
    test->add_option("--out", test_cfg.out_path, "results TSV path (default stdout)");
    test->add_option("--threads", test_cfg.threads, "worker threads (default: all)");

    SimulateCommandConfig sim_cfg;
    CLI::App* simulate = app.add_subcommand("simulate", "run a simulation scenario");
    simulate->add_option("--scenario", sim_cfg.scenario, "s1|s2|s3|s4|s5");
    simulate->add_option("--config", sim_cfg.config_path, "custom ScenarioSpec (key=value file)");
    simulate->add_option("--nodes", sim_cfg.nodes, "scale the network down/up");
    simulate->add_option("--seed", sim_cfg.seed, "RNG seed")->required();
    simulate->add_option("--out", sim_cfg.out_path, "report JSON path (default stdout)");
    simulate->add_option("--threads", sim_cfg.threads, "worker threads (default: all)");

    BenchCommandConfig bench_cfg;
    CLI::App* bench = app.add_subcommand("bench", "compare against the permutation baseline");
    bench->add_option("--scenario", bench_cfg.scenario, "s1|s2|s4|s5")->required();
    bench->add_option("--seed", bench_cfg.seed, "RNG seed")->required();
    bench->add_option("--perms", bench_cfg.perms, "permutations (default 100)");
    bench->add_option("--nodes", bench_cfg.nodes, "scale the network down/up");
    bench->add_option("--threads", bench_cfg.threads, "worker threads (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (test->parsed()) {
            test_cfg.kind = network_kind_from_string(type_str);
            if (adjust_str == "bh")
                test_cfg.adjust = TestSpec::Adjust::BenjaminiHochberg;
            else if (adjust_str != "none")
                throw BadInput("--adjust must be none or bh");
            return cmd_test(test_cfg);
        }
        if (simulate->parsed()) {
            if (sim_cfg.scenario.empty() == sim_cfg.config_path.empty())
                throw BadInput("simulate needs exactly one of --scenario or --config");
            return cmd_simulate(sim_cfg);
        }
        if (bench->parsed()) return cmd_bench(bench_cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}

}  // namespace neat
