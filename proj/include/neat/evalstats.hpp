#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "neat/graph.hpp"
#include "neat/rng.hpp"

namespace neat {

// ---- calibration / power metrics ------------------------------------------

struct KsResult {
    double d = 0;  // one-sample KS statistic against Uniform(0,1)
    double p = 1;  // asymptotic Kolmogorov p with small-sample correction
};

KsResult ks_uniform(std::span<const double> pvalues);

struct RejectionRatios {
    double r1 = 0;  // #{p < 0.01} / (0.01 m)
    double r5 = 0;  // #{p < 0.05} / (0.05 m)
};

RejectionRatios rejection_ratios(std::span<const double> null_pvalues);

struct ConfusionCounts {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct ConfusionMetrics {
    double sensitivity = 0;  // tp / (tp + fn)
    double specificity = 0;  // tn / (tn + fp)
    bool sensitivity_defined = false;
    bool specificity_defined = false;
    ConfusionCounts counts;
};

// Rejection rule is strict: p < alpha. NaN p-values never reject. Truth is
// a byte per test (nonzero = enriched).
ConfusionMetrics confusion_metrics(std::span<const double> pvalues,
                                   std::span<const std::uint8_t> truth, double alpha);

// Mann-Whitney AUC with half credit for ties; throws BadInput when either
// class is empty. Larger score = more enriched (callers pass 1 - p).
double auc(std::span<const double> scores, std::span<const std::uint8_t> truth);

// ---- degree-preserving permutation baseline --------------------------------

struct NullCalibration {
    double empirical_mean = 0;
    double empirical_var = 0;  // sample variance
    std::int64_t samples = 0;
    std::int64_t observed = 0;
    double z = 0;
    double p_normal = 1;  // two-sided normal tail
    bool degenerate = false;  // zero variance across replicates
};

// Rewires `n_perms` copies of the network by `swaps_per_perm` attempted
// double-edge swaps each (swaps creating self-loops or duplicate edges are
// rejected), records n_AB per replicate, and summarizes the empirical null.
// swaps_per_perm < 0 selects the default 10 * edge_count. Replicates use
// per-replicate RNG streams and may be evaluated in parallel; statistics are
// reduced in replicate order.
NullCalibration permutation_null(const Network& net, const NodeSet& a, const NodeSet& b,
                                 std::int64_t n_perms, std::int64_t swaps_per_perm, Rng& rng);

// Same ensemble shared across many pairs, the way resampling tools amortize
// network permutations over a batch of tests.
std::vector<NullCalibration> permutation_null_batch(
    const Network& net, const std::vector<NodeSet>& sets,
    std::span<const std::pair<std::int32_t, std::int32_t>> pairs, std::int64_t n_perms,
    std::int64_t swaps_per_perm, Rng& rng);

// Serial reference for the replicate loop, kept for testing and benchmarks.
std::vector<NullCalibration> permutation_null_batch_serial(
    const Network& net, const std::vector<NodeSet>& sets,
    std::span<const std::pair<std::int32_t, std::int32_t>> pairs, std::int64_t n_perms,
    std::int64_t swaps_per_perm, Rng& rng);

struct SpeedBenchmark {
    double t_neat_seconds = 0;
    double t_perm_seconds = 0;
    double ratio = 0;  // t_perm / t_neat
    std::int64_t n_pairs = 0;
    std::int64_t n_perms = 0;
};

// Wall-clock comparison of the hypergeometric batch against the permutation
// baseline over the same pairs. Requires >= 100 pairs and >= 1 permutation.
SpeedBenchmark speed_benchmark(const Network& net, const std::vector<NodeSet>& sets,
                               std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                               std::int64_t n_perms, Rng& rng);

}  // namespace neat
