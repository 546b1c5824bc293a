#pragma once

#include <cstdint>
#include <string>

#include "neat/enrich.hpp"
#include "neat/simgen.hpp"

namespace neat {

struct TestCommandConfig {
    std::string network_path;
    NetworkKind kind = NetworkKind::Directed;
    std::string sets_a_path;
    std::string sets_b_path;
    double alpha = 0.01;
    TestSpec::Adjust adjust = TestSpec::Adjust::None;
    std::string out_path;  // empty = stdout
    int threads = 0;       // 0 = available parallelism
};

struct SimulateCommandConfig {
    std::string scenario;     // s1..s5, or empty when config_path is given
    std::string config_path;  // key=value ScenarioSpec file
    int nodes = 0;            // 0 keeps the preset size
    std::uint64_t seed = 0;
    std::string out_path;
    int threads = 0;
};

struct BenchCommandConfig {
    std::string scenario;
    std::uint64_t seed = 0;
    std::int64_t perms = 100;
    int nodes = 0;
    int threads = 0;
};

int cmd_test(const TestCommandConfig& config);
int cmd_simulate(const SimulateCommandConfig& config);
int cmd_bench(const BenchCommandConfig& config);

// Deterministic serialization (wall-clock time is deliberately excluded so
// identical runs give identical bytes).
std::string scenario_report_to_json(const ScenarioReport& report);

// Full argument parser; returns the process exit code. Errors print a single
// `error: ...` line on stderr and exit nonzero (2).
int cli_main(int argc, char** argv);

}  // namespace neat
