#include "neat/evalstats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "neat/enrich.hpp"

namespace neat {

namespace {

inline std::uint64_t pair_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

double kolmogorov_q(double lambda) {
    // Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), first 100
    // terms with early exit; the series is effectively 1 when it fails to
    // converge (tiny lambda).
    double sum = 0;
    const double a = -2.0 * lambda * lambda;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(a * j * j);
        sum += sign * term;
        if (term < 1e-12) return std::clamp(2.0 * sum, 0.0, 1.0);
        sign = -sign;
    }
    return 1.0;
}

// ---- edge-list replicate used by the permutation chain ----------------------

struct EdgeSoup {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::unordered_set<std::uint64_t> present;
    bool directed = false;

    explicit EdgeSoup(const Network& net)
        : edges(net.edge_list()), directed(net.kind() != NetworkKind::Undirected) {
        present.reserve(edges.size() * 2);
        for (auto [u, v] : edges) present.insert(key(u, v));
    }

    std::uint64_t key(NodeId u, NodeId v) const {
        if (!directed && u > v) std::swap(u, v);
        return pair_key(u, v);
    }

    // One attempted double-edge swap; returns whether it was applied.
    bool try_swap(Rng& rng) {
        const std::size_t m = edges.size();
        const std::size_t i = static_cast<std::size_t>(rng.below(m));
        const std::size_t j = static_cast<std::size_t>(rng.below(m));
        if (i == j) return false;
        const auto [u, v] = edges[i];
        const auto [x, y] = edges[j];

        NodeId a1, b1, a2, b2;
        if (directed) {
            // (u->v),(x->y) -> (u->y),(x->v)
            a1 = u; b1 = y; a2 = x; b2 = v;
        } else {
            // orientation coin to keep the chain symmetric
            if (rng.below(2) == 0) {
                a1 = u; b1 = x; a2 = v; b2 = y;
            } else {
                a1 = u; b1 = y; a2 = v; b2 = x;
            }
        }
        if (a1 == b1 || a2 == b2) return false;

        const std::uint64_t old1 = key(u, v), old2 = key(x, y);
        const std::uint64_t new1 = key(a1, b1), new2 = key(a2, b2);
        if (new1 == new2) return false;
        if (new1 != old1 && new1 != old2 && present.count(new1)) return false;
        if (new2 != old1 && new2 != old2 && present.count(new2)) return false;
        if (new1 == old1 && new2 == old2) return false;  // no-op

        present.erase(old1);
        present.erase(old2);
        present.insert(new1);
        present.insert(new2);
        edges[i] = {a1, b1};
        edges[j] = {a2, b2};
        return true;
    }

    std::int64_t count_cut(const SetMask& mask_a, const SetMask& mask_b) const {
        std::int64_t n = 0;
        if (directed) {
            for (auto [u, v] : edges)
                if (mask_a[u] && mask_b[v]) ++n;
        } else {
            for (auto [u, v] : edges)
                if ((mask_a[u] && mask_b[v]) || (mask_a[v] && mask_b[u])) ++n;
        }
        return n;
    }
};

struct DegreeProfile {
    std::vector<std::int32_t> out, in;

    DegreeProfile(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                  bool directed)
        : out(n, 0), in(n, 0) {
        for (auto [u, v] : edges) {
            ++out[static_cast<std::size_t>(u)];
            if (directed)
                ++in[static_cast<std::size_t>(v)];
            else
                ++out[static_cast<std::size_t>(v)];
        }
    }

    bool operator==(const DegreeProfile&) const = default;
};

std::vector<NullCalibration> run_permutation_batch(
    const Network& net, const std::vector<NodeSet>& sets,
    std::span<const std::pair<std::int32_t, std::int32_t>> pairs, std::int64_t n_perms,
    std::int64_t swaps_per_perm, Rng& rng, bool parallel) {
    if (net.kind() == NetworkKind::Mixed)
        throw BadInput("permutation baseline supports directed and undirected networks only");
    if (n_perms < 1) throw BadInput("permutation baseline needs at least 1 replicate");
    if (pairs.empty()) throw BadInput("permutation baseline needs at least one set pair");
    if (swaps_per_perm < 0) swaps_per_perm = 10 * net.edge_count();
    if (swaps_per_perm > 0 && net.edge_count() < 2)
        throw BadInput("swap starvation: fewer than two edges");

    std::vector<SetMask> masks(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) masks[i] = SetMask(net, sets[i]);

    const EdgeSoup base(net);
    const bool directed = base.directed;
    const DegreeProfile base_degrees(static_cast<std::size_t>(net.node_count()), base.edges,
                                     directed);

    const std::size_t n_pairs = pairs.size();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_perms) * n_pairs);
    bool degree_violation = false;

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t r = 0; r < n_perms; ++r) {
        Rng stream = rng.stream(static_cast<std::uint64_t>(r) + 0x7e57);
        EdgeSoup soup = base;
        for (std::int64_t s = 0; s < swaps_per_perm; ++s) soup.try_swap(stream);
        const DegreeProfile deg(static_cast<std::size_t>(net.node_count()), soup.edges, directed);
        if (!(deg == base_degrees)) {
#pragma omp atomic write
            degree_violation = true;
        }
        for (std::size_t q = 0; q < n_pairs; ++q) {
            const auto [i, j] = pairs[q];
            counts[static_cast<std::size_t>(r) * n_pairs + q] =
                soup.count_cut(masks[static_cast<std::size_t>(i)],
                               masks[static_cast<std::size_t>(j)]);
        }
    }
    if (degree_violation)
        throw BadInput("internal error: permutation replicate changed a degree");

    std::vector<NullCalibration> result(n_pairs);
    for (std::size_t q = 0; q < n_pairs; ++q) {
        const auto [i, j] = pairs[q];
        NullCalibration& c = result[q];
        c.samples = n_perms;
        c.observed = base.count_cut(masks[static_cast<std::size_t>(i)],
                                    masks[static_cast<std::size_t>(j)]);
        // fixed-order two-pass reduction for reproducibility
        double sum = 0;
        for (std::int64_t r = 0; r < n_perms; ++r)
            sum += static_cast<double>(counts[static_cast<std::size_t>(r) * n_pairs + q]);
        c.empirical_mean = sum / static_cast<double>(n_perms);
        double ss = 0;
        for (std::int64_t r = 0; r < n_perms; ++r) {
            const double d =
                static_cast<double>(counts[static_cast<std::size_t>(r) * n_pairs + q]) -
                c.empirical_mean;
            ss += d * d;
        }
        c.empirical_var = n_perms > 1 ? ss / static_cast<double>(n_perms - 1) : 0.0;
        if (c.empirical_var <= 0.0) {
            c.degenerate = true;
            c.z = std::numeric_limits<double>::quiet_NaN();
            c.p_normal = std::numeric_limits<double>::quiet_NaN();
        } else {
            c.z = (static_cast<double>(c.observed) - c.empirical_mean) /
                  std::sqrt(c.empirical_var);
            c.p_normal = std::erfc(std::abs(c.z) / std::numbers::sqrt2);
        }
    }
    return result;
}

}  // namespace

KsResult ks_uniform(std::span<const double> pvalues) {
    if (pvalues.empty()) throw BadInput("KS test needs at least one value");
    std::vector<double> x(pvalues.begin(), pvalues.end());
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) throw BadInput("KS input outside [0,1]");
    std::sort(x.begin(), x.end());

    const double m = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / m - x[i];
        const double lo = x[i] - static_cast<double>(i) / m;
        d = std::max({d, hi, lo});
    }
    const double sqrt_m = std::sqrt(m);
    const double lambda = (sqrt_m + 0.12 + 0.11 / sqrt_m) * d;
    return {d, kolmogorov_q(lambda)};
}

RejectionRatios rejection_ratios(std::span<const double> null_pvalues) {
    if (null_pvalues.empty()) throw BadInput("rejection ratios need at least one p-value");
    std::int64_t below1 = 0, below5 = 0;
    for (double p : null_pvalues) {
        if (p < 0.01) ++below1;
        if (p < 0.05) ++below5;
    }
    const double m = static_cast<double>(null_pvalues.size());
    return {static_cast<double>(below1) / (0.01 * m), static_cast<double>(below5) / (0.05 * m)};
}

ConfusionMetrics confusion_metrics(std::span<const double> pvalues,
                                   std::span<const std::uint8_t> truth, double alpha) {
    if (pvalues.size() != truth.size())
        throw BadInput("confusion_metrics requires equal-length inputs");
    ConfusionMetrics m;
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const bool reject = pvalues[i] < alpha;  // NaN compares false
        if (truth[i] != 0)
            reject ? ++m.counts.tp : ++m.counts.fn;
        else
            reject ? ++m.counts.fp : ++m.counts.tn;
    }
    if (m.counts.tp + m.counts.fn > 0) {
        m.sensitivity_defined = true;
        m.sensitivity = static_cast<double>(m.counts.tp) /
                        static_cast<double>(m.counts.tp + m.counts.fn);
    }
    if (m.counts.tn + m.counts.fp > 0) {
        m.specificity_defined = true;
        m.specificity = static_cast<double>(m.counts.tn) /
                        static_cast<double>(m.counts.tn + m.counts.fp);
    }
    return m;
}

double auc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    if (scores.size() != truth.size()) throw BadInput("auc requires equal-length inputs");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // rank sum of the positive class with midranks for ties
    double rank_sum_pos = 0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (truth[order[k]] != 0) {
                rank_sum_pos += midrank;
                ++n_pos;
            }
        }
        i = j + 1;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw BadInput("auc requires both classes to be non-empty");
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

NullCalibration permutation_null(const Network& net, const NodeSet& a, const NodeSet& b,
                                 std::int64_t n_perms, std::int64_t swaps_per_perm, Rng& rng) {
    if (n_perms < 100) throw BadInput("permutation_null needs at least 100 replicates");
    std::vector<NodeSet> sets{a, b};
    const std::pair<std::int32_t, std::int32_t> pair{0, 1};
    return run_permutation_batch(net, sets, {&pair, 1}, n_perms, swaps_per_perm, rng, true)[0];
}

std::vector<NullCalibration> permutation_null_batch(
    const Network& net, const std::vector<NodeSet>& sets,
    std::span<const std::pair<std::int32_t, std::int32_t>> pairs, std::int64_t n_perms,
    std::int64_t swaps_per_perm, Rng& rng) {
    return run_permutation_batch(net, sets, pairs, n_perms, swaps_per_perm, rng, true);
}

std::vector<NullCalibration> permutation_null_batch_serial(
    const Network& net, const std::vector<NodeSet>& sets,
    std::span<const std::pair<std::int32_t, std::int32_t>> pairs, std::int64_t n_perms,
    std::int64_t swaps_per_perm, Rng& rng) {
    return run_permutation_batch(net, sets, pairs, n_perms, swaps_per_perm, rng, false);
}

SpeedBenchmark speed_benchmark(const Network& net, const std::vector<NodeSet>& sets,
                               std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                               std::int64_t n_perms, Rng& rng) {
    if (pairs.size() < 100) throw BadInput("speed benchmark needs at least 100 pairs");
    if (n_perms < 1) throw BadInput("speed benchmark needs at least 1 permutation");

    using clock = std::chrono::steady_clock;
    SpeedBenchmark bench;
    bench.n_pairs = static_cast<std::int64_t>(pairs.size());
    bench.n_perms = n_perms;

    const TestSpec spec;
    const auto t0 = clock::now();
    volatile double sink = 0;
    const auto results = test_pairs(net, sets, pairs, spec);
    for (const auto& r : results) sink = sink + r.mu0;
    const auto t1 = clock::now();
    const auto calibrations = permutation_null_batch(net, sets, pairs, n_perms, -1, rng);
    for (const auto& c : calibrations) sink = sink + c.empirical_mean;
    const auto t2 = clock::now();

    bench.t_neat_seconds = std::chrono::duration<double>(t1 - t0).count();
    bench.t_perm_seconds = std::chrono::duration<double>(t2 - t1).count();
    bench.ratio = bench.t_perm_seconds / std::max(bench.t_neat_seconds, 1e-9);
    return bench;
}

}  // namespace neat
