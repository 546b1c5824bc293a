// Acceptance suite: worked examples, oracle equivalence, calibration and
// power replication, permutation cross-check, speed, and the cross-module
// property set. Prints one PASS/FAIL line per criterion; exits nonzero when
// anything fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "exact_oracle.hpp"
#include "fixtures.hpp"
#include "neat/cli.hpp"
#include "neat/enrich.hpp"
#include "neat/evalstats.hpp"
#include "neat/io.hpp"
#include "neat/simgen.hpp"

using namespace neat;
using neat::testing::directed_example_rows;
using neat::testing::exact_oracle_p;
using neat::testing::named_set;
using neat::testing::undirected_example_rows;

namespace {

constexpr std::uint64_t kScenarioSeed = 160352;

struct Harness {
    int failed = 0;
    int index = 0;

    void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
        ++index;
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

bool check_grid_scenario(const std::string& id, std::string& detail, double min_sensitivity) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioReport r = run_scenario(scenario_preset(id, 1000, kScenarioSeed));
    const double elapsed = seconds_since(t0);
    detail = fmt("spec=%.3f auc=%.3f ks_p=%.3f r5=%.2f sens=%.3f %.1fs", r.specificity,
                 r.auc_value, r.ks_p, r.r5, r.sensitivity, elapsed);
    bool ok = within(r.specificity, 0.91, 0.98) && r.auc_defined && r.auc_value >= 0.85 &&
              r.ks_p > 0.01 && within(r.r5, 0.7, 1.5) && elapsed < 60.0;
    if (min_sensitivity > 0) ok = ok && r.sensitivity >= min_sensitivity;
    return ok;
}

}  // namespace

int main() {
    Harness h;

    h.criterion("directed worked example", [](std::string& detail) {
        const Network net = Network::build(directed_example_rows(), NetworkKind::Directed);
        const NodeSet a = named_set(net, "A", {"1", "4"});
        const NodeSet b = named_set(net, "B", {"3", "5", "7"});
        const NodeSet c = named_set(net, "C", {"2", "5"});
        TestSpec spec;
        spec.alpha = 0.05;
        const auto t0 = std::chrono::steady_clock::now();
        const EnrichmentResult ab = test_directed(net, a, b, spec);
        const EnrichmentResult bc = test_directed(net, b, c, spec);
        const double elapsed = seconds_since(t0);
        detail = fmt("n_ab=%lld mu0=%.4f p=%.4f | mu0=%.4f p=%.4f | %.2f ms",
                     static_cast<long long>(ab.n_ab), ab.mu0, ab.p, bc.mu0, bc.p, elapsed * 1e3);
        return ab.n_ab == 2 && std::abs(ab.mu0 - 1.3333) < 5e-4 && std::abs(ab.p - 0.4835) < 0.005 &&
               std::abs(bc.mu0 - 1.0667) < 5e-4 && std::abs(bc.p - 0.0337) < 0.005 &&
               elapsed < 0.010;
    });

    h.criterion("undirected worked example", [](std::string& detail) {
        const Network net = Network::build(undirected_example_rows(), NetworkKind::Undirected);
        const NodeSet a = named_set(net, "A", {"1", "5"});
        const NodeSet b = named_set(net, "B", {"2", "4", "7"});
        const NodeSet c = named_set(net, "C", {"6", "8"});
        TestSpec spec;
        spec.alpha = 0.05;
        const auto t0 = std::chrono::steady_clock::now();
        const double p_ab = test_undirected(net, a, b, spec).p;
        const double p_ac = test_undirected(net, a, c, spec).p;
        const double p_bc = test_undirected(net, b, c, spec).p;
        const double elapsed = seconds_since(t0);
        detail = fmt("p_ab=%.4f p_ac=%.4f p_bc=%.4f | %.2f ms", p_ab, p_ac, p_bc, elapsed * 1e3);
        return std::abs(p_ab - 0.0232) < 0.001 && std::abs(p_ac - 0.465) < 0.005 &&
               std::abs(p_bc - 0.038) < 0.005 && elapsed < 0.010;
    });

    h.criterion("oracle equivalence (10,000 randomized parameter sets)", [](std::string& detail) {
        Rng rng(0xac5e97);
        double worst_rel = 0, worst_identity = 0;
        for (int it = 0; it < 10000; ++it) {
            const std::int64_t N = 1 + static_cast<std::int64_t>(rng.below(500));
            const std::int64_t n =
                static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N + 1)));
            const std::int64_t K =
                static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N + 1)));
            const HypergeomParams theta{n, K, N};
            const auto sup = support(theta);
            const std::int64_t k = sup.lo + static_cast<std::int64_t>(rng.below(
                                                static_cast<std::uint64_t>(sup.hi - sup.lo + 1)));
            const TwoSidedP got = two_sided_p(k, theta);
            const auto want = exact_oracle_p(k, theta);
            worst_rel = std::max(worst_rel, std::abs(got.p - want.p) / want.p);
            const double p1 = 2.0 * std::min(got.lower_tail + got.point, got.upper_tail + got.point);
            worst_identity = std::max(worst_identity, std::abs(p1 - got.p - got.point));
        }
        detail = fmt("max rel err=%.2e, max |p1-p-point|=%.2e", worst_rel, worst_identity);
        return worst_rel <= 1e-10 && worst_identity <= 1e-12;
    });

    h.criterion("S1 replication (power-law directed)", [](std::string& detail) {
        return check_grid_scenario("s1", detail, 0.0);
    });

    h.criterion("S2 replication (Poisson-mixture directed)", [](std::string& detail) {
        return check_grid_scenario("s2", detail, 0.0);
    });

    h.criterion("S3 replication (overlap sweep)", [](std::string& detail) {
        const ScenarioReport r = run_scenario(scenario_preset("s3", 1000, kScenarioSeed));
        bool spec_ok = true;
        double worst_spec = 1.0;
        for (const auto& lv : r.levels) {
            worst_spec = std::min(worst_spec, lv.specificity);
            if (!within(lv.specificity, 0.92, 0.98)) spec_ok = false;
        }
        const double sens_first = r.levels.front().sensitivity;
        const double sens_last = r.levels.back().sensitivity;
        detail = fmt("worst level spec=%.3f, sens J=0: %.3f -> J=1: %.3f", worst_spec, sens_first,
                     sens_last);
        return spec_ok && sens_last >= sens_first - 0.15 && !r.levels.empty();
    });

    h.criterion("S4 replication (power-law undirected)", [](std::string& detail) {
        return check_grid_scenario("s4", detail, 0.6);
    });

    h.criterion("S5 replication (Poisson-mixture undirected)", [](std::string& detail) {
        return check_grid_scenario("s5", detail, 0.6);
    });

    h.criterion("permutation cross-check of the null mean", [](std::string& detail) {
        // Moderate degrees and set sizes keep the O(1/n) gap between the
        // fixed-degree ensemble mean and n*K/N well inside the 3-SE budget.
        Rng rng(kScenarioSeed + 7);
        DegreeSpec degrees;
        degrees.law = DegreeSpec::Law::PoissonMixture;
        degrees.lambda1 = 5.0;
        degrees.lambda2 = 5.0;
        degrees.weight1 = 0.5;
        degrees.weight2 = 0.5;
        const auto seq = sample_degree_sequence_undirected(degrees, 200, rng);
        const Network net = realize_undirected(seq, rng);

        std::vector<NodeSet> sets;
        std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
        std::vector<NodeId> pool(static_cast<std::size_t>(net.node_count()));
        std::iota(pool.begin(), pool.end(), 0);
        for (int q = 0; q < 20; ++q) {
            rng.partial_shuffle(pool, 30);
            sets.push_back(NodeSet::from_ids("A" + std::to_string(q),
                                             {pool.begin(), pool.begin() + 15}, net));
            sets.push_back(NodeSet::from_ids("B" + std::to_string(q),
                                             {pool.begin() + 15, pool.begin() + 30}, net));
            pairs.emplace_back(2 * q, 2 * q + 1);
        }

        Rng perm_rng(kScenarioSeed + 11);
        const auto calibrations = permutation_null_batch(net, sets, pairs, 1000, -1, perm_rng);
        double worst_sigma = 0;
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            const SetDegrees da = set_degrees(net, sets[2 * q]);
            const SetDegrees db = set_degrees(net, sets[2 * q + 1]);
            const double mu0 = static_cast<double>(da.total) * static_cast<double>(db.total) /
                               static_cast<double>(net.total_degree());
            const double se =
                std::sqrt(calibrations[q].empirical_var / static_cast<double>(calibrations[q].samples));
            worst_sigma = std::max(worst_sigma, std::abs(calibrations[q].empirical_mean - mu0) / se);
        }
        detail = fmt("worst |mean-mu0| = %.2f standard errors over 20 pairs", worst_sigma);
        return worst_sigma <= 3.0;
    });

    h.criterion("speed: 1225 tests under 1 s, permutation baseline >= 10x slower",
                [](std::string& detail) {
                    const ScenarioSpec spec = scenario_preset("s5", 1000, kScenarioSeed);
                    Rng root(spec.seed);
                    Rng deg_rng = root.stream(1);
                    Rng graph_rng = root.stream(2);
                    Rng set_rng = root.stream(3);
                    const auto seq =
                        sample_degree_sequence_undirected(spec.degrees, spec.node_count, deg_rng);
                    const Network net = realize_undirected(seq, graph_rng);
                    const auto sets = make_set_grid(net, 50, 50, 100, set_rng);
                    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
                    for (std::int32_t i = 0; i < 50; ++i)
                        for (std::int32_t j = i + 1; j < 50; ++j) pairs.emplace_back(i, j);

                    Rng bench_rng = root.stream(6);
                    const SpeedBenchmark bench = speed_benchmark(net, sets, pairs, 100, bench_rng);
                    detail = fmt("t_neat=%.4fs t_perm=%.2fs ratio=%.0fx", bench.t_neat_seconds,
                                 bench.t_perm_seconds, bench.ratio);
                    return bench.n_pairs == 1225 && bench.t_neat_seconds < 1.0 &&
                           bench.ratio >= 10.0;
                });

    h.criterion("property suite: symmetry, expansion, determinism, degrees, normalization",
                [](std::string& detail) {
                    int checks = 0, ok = 0;
                    Rng rng(0x9a9a);

                    // undirected symmetry + expansion consistency on random graphs
                    for (int it = 0; it < 20; ++it) {
                        DegreeSpec degrees;
                        degrees.law = DegreeSpec::Law::PoissonMixture;
                        degrees.lambda1 = 8;
                        degrees.lambda2 = 8;
                        degrees.weight1 = 0.5;
                        degrees.weight2 = 0.5;
                        const auto seq = sample_degree_sequence_undirected(degrees, 120, rng);
                        const Network net = realize_undirected(seq, rng);
                        std::vector<NodeId> pool(static_cast<std::size_t>(net.node_count()));
                        std::iota(pool.begin(), pool.end(), 0);
                        rng.partial_shuffle(pool, 50);
                        const NodeSet a =
                            NodeSet::from_ids("a", {pool.begin(), pool.begin() + 20}, net);
                        const NodeSet b =
                            NodeSet::from_ids("b", {pool.begin() + 20, pool.begin() + 50}, net);
                        TestSpec spec;
                        spec.alpha = 0.05;
                        const auto ab = test_undirected(net, a, b, spec);
                        const auto ba = test_undirected(net, b, a, spec);
                        ++checks;
                        if (ab.p == ba.p && ab.n_ab == ba.n_ab &&
                            std::abs(ab.mu0 - ba.mu0) < 1e-12)
                            ++ok;

                        const Network expanded = to_directed_expansion(net);
                        const auto direct = test_directed(expanded, a, b, spec);
                        ++checks;
                        if (direct.params.pop_size == ab.params.pop_size &&
                            direct.n_ab == ab.n_ab && std::abs(direct.p - ab.p) < 1e-12)
                            ++ok;
                    }

                    // batch determinism across thread counts (byte-level)
                    {
                        DegreeSpec degrees;
                        degrees.law = DegreeSpec::Law::PoissonMixture;
                        const auto seq = sample_degree_sequence_undirected(degrees, 300, rng);
                        const Network net = realize_undirected(seq, rng);
                        const auto sets = make_set_grid(net, 12, 30, 60, rng);
                        TestSpec spec;
                        spec.adjust = TestSpec::Adjust::BenjaminiHochberg;
                        std::string first;
#ifdef _OPENMP
                        const int saved = omp_get_max_threads();
#endif
                        for (int threads : {1, 2, 4}) {
#ifdef _OPENMP
                            omp_set_num_threads(threads);
#else
                            (void)threads;
#endif
                            std::ostringstream out;
                            write_results_tsv(out, test_batch(net, sets, sets, spec));
                            ++checks;
                            if (first.empty()) first = out.str();
                            if (out.str() == first) ++ok;
                        }
#ifdef _OPENMP
                        omp_set_num_threads(saved);
#endif

                        // degree preservation is asserted inside every
                        // replicate; a completed run certifies it
                        Rng perm_rng(1);
                        const auto cal = permutation_null(net, sets[0], sets[1], 100, -1, perm_rng);
                        ++checks;
                        if (cal.samples == 100) ++ok;
                    }

                    // pmf normalization within 1e-12 for N <= 2000
                    for (int it = 0; it < 10; ++it) {
                        const std::int64_t N = 100 + static_cast<std::int64_t>(rng.below(1901));
                        const std::int64_t n =
                            1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N)));
                        const std::int64_t K =
                            1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N)));
                        const HypergeomParams theta{n, K, N};
                        const auto sup = support(theta);
                        double sum = 0;
                        for (std::int64_t k = sup.lo; k <= sup.hi; ++k)
                            sum += std::exp(log_pmf(k, theta));
                        ++checks;
                        if (std::abs(sum - 1.0) <= 1e-12) ++ok;
                    }

                    detail = fmt("%d/%d property checks", ok, checks);
                    return ok == checks;
                });

    if (h.failed == 0)
        std::printf("\nACCEPTANCE PASSED (%d criteria)\n", h.index);
    else
        std::printf("\nACCEPTANCE FAILED (%d of %d criteria)\n", h.failed, h.index);
    return h.failed == 0 ? 0 : 1;
}
