#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "neat/enrich.hpp"
#include "neat/evalstats.hpp"
#include "neat/graph.hpp"
#include "neat/rng.hpp"

namespace neat {

// ---- degree sequences -------------------------------------------------------

struct DegreeSpec {
    enum class Law { PowerLaw, PoissonMixture };
    Law law = Law::PowerLaw;

    // power law: P(D=d) proportional to d^-exponent, d >= min_degree,
    // truncated at node_count - 1
    double exponent = 4.0;
    int min_degree = 20;

    // two-component Poisson mixture
    double lambda1 = 40.0;
    double lambda2 = 100.0;
    double weight1 = 0.99;
    double weight2 = 0.01;

    void validate() const;
};

// i.i.d. draws with the parity of the sum repaired by incrementing one
// uniformly chosen node. Any entry >= node_count triggers a full resample
// (up to a retry cap).
std::vector<int> sample_degree_sequence_undirected(const DegreeSpec& spec, int node_count,
                                                   Rng& rng);

// out- and in-sequences drawn independently; the smaller total is raised by
// +1 increments at uniformly chosen nodes until the totals agree.
std::pair<std::vector<int>, std::vector<int>> sample_degree_sequence_directed(
    const DegreeSpec& spec, int node_count, Rng& rng);

// ---- fixed-degree-sequence random graphs ------------------------------------

// Stub matching followed by random double-edge swaps that eliminate
// self-loops and duplicate edges while preserving every degree exactly
// (verified before returning). Throws BadInput when rectification does not
// finish within ~100 * edge_count swap attempts.
Network realize_undirected(const std::vector<int>& degrees, Rng& rng);
Network realize_directed(const std::vector<int>& out_degrees, const std::vector<int>& in_degrees,
                         Rng& rng);

// ---- node-set grids ---------------------------------------------------------

struct OverlapStats {
    double mean_jaccard = 0;
    double max_jaccard = 0;
};

// `count` uniform random subsets with sizes drawn from {size_min..size_max}.
std::vector<NodeSet> make_set_grid(const Network& net, int count, int size_min, int size_max,
                                   Rng& rng, OverlapStats* stats = nullptr);

// Pair of equal-size sets with |A n B| == intersection exactly.
std::pair<NodeSet, NodeSet> make_overlap_pair(const Network& net, int size, int intersection,
                                              Rng& rng, int pair_index);

// ---- controlled enrichment injection ----------------------------------------

enum class EffectSign { Add, Remove };

struct InjectionOutcome {
    Network network;
    std::int64_t n_ab_before = 0;
    std::int64_t n_ab_after = 0;
    std::int64_t target = 0;
};

// Move the A->B (or A--B) link count to round((1 +/- delta) * n_AB); added
// links are drawn uniformly from absent cut pairs, removed links uniformly
// from present ones. Nothing outside the cut changes.
InjectionOutcome inject_enrichment(const Network& net, const NodeSet& a, const NodeSet& b,
                                   double delta, EffectSign sign, Rng& rng);

// Absolute form: add or remove exactly `count` cut links.
InjectionOutcome inject_links(const Network& net, const NodeSet& a, const NodeSet& b,
                              std::int64_t count, EffectSign sign, Rng& rng);

// ---- scenarios --------------------------------------------------------------

struct ScenarioSpec {
    std::string id = "custom";  // s1..s5 or custom
    NetworkKind kind = NetworkKind::Directed;
    DegreeSpec degrees;
    int node_count = 1000;
    int set_count = 50;
    int set_size_min = 50;
    int set_size_max = 100;
    int enriched_pair_count = 200;
    double effect_min = 0.10;
    double effect_max = 0.50;
    // overlap-sweep mode (S3): tested pair schedule instead of the grid
    std::vector<int> overlap_schedule;
    int tests_per_level = 2000;  // half under H0, half under H1
    int inject_link_count = 35;  // absolute injection per H1 test
    std::uint64_t seed = 0;

    bool overlap_mode() const { return !overlap_schedule.empty(); }
    void validate() const;
};

// Table-1 presets; `nodes` <= 0 keeps the preset's 1000.
ScenarioSpec scenario_preset(const std::string& id, int nodes, std::uint64_t seed);

// flat key=value serialization (one pair per line)
std::string scenario_to_kv(const ScenarioSpec& spec);
ScenarioSpec scenario_from_kv(const std::string& text);

struct GroundTruthEntry {
    bool enriched = false;
    enum class Effect { Added, Removed, None } effect = Effect::None;
};

struct ScenarioReport {
    ScenarioSpec spec;
    std::int64_t n_tests = 0;
    std::int64_t n_null = 0;
    std::int64_t n_enriched = 0;
    std::int64_t degenerate_count = 0;
    double graph_density = 0;
    OverlapStats overlap;
    double ks_d = 0;
    double ks_p = 0;
    double r1 = 0;
    double r5 = 0;
    double sensitivity = 0;
    bool sensitivity_defined = false;
    double specificity = 0;
    bool specificity_defined = false;
    double auc_value = 0;
    bool auc_defined = false;
    double wall_time_seconds = 0;  // measured; excluded from serialized reports

    struct OverlapLevel {
        int intersection = 0;
        double jaccard = 0;
        double sensitivity = 0;
        double specificity = 0;
        std::int64_t n_tests = 0;
    };
    std::vector<OverlapLevel> levels;  // overlap-sweep runs only
};

// Builds the network and sets, plants ground-truth enrichments, runs the
// batch, and scores it. Identical specs (including seed) give identical
// reports.
ScenarioReport run_scenario(const ScenarioSpec& spec);

}  // namespace neat
