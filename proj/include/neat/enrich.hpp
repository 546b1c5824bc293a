#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "neat/graph.hpp"
#include "neat/hypergeom.hpp"

namespace neat {

enum class Direction { AtoB, Undirected };
enum class Call { Over, Under, NoEvidence };

const char* to_string(Direction d);
const char* to_string(Call c);

struct TestSpec {
    double alpha = 0.01;
    enum class Adjust { None, BenjaminiHochberg } adjust = Adjust::None;
    // Batch grids skip pairs of identical name by default (self tests are
    // rarely meaningful); set to true to emit them anyway.
    bool include_self_pairs = false;

    void validate() const;
};

// One enrichment test outcome. `p` and `adj_p` are NaN when absent
// (degenerate margins, no adjustment requested).
struct EnrichmentResult {
    std::string set_a;
    std::string set_b;
    Direction direction = Direction::AtoB;
    std::int64_t n_ab = 0;
    double mu0 = 0;
    double p = std::numeric_limits<double>::quiet_NaN();
    double log10_p = std::numeric_limits<double>::quiet_NaN();
    double adj_p = std::numeric_limits<double>::quiet_NaN();
    Call call = Call::NoEvidence;
    std::string flags;  // comma-separated tokens, empty when clean
    bool degenerate = false;

    HypergeomParams params;  // the (n, K, N) actually tested

    bool has_p() const { return !std::isnan(p); }
};

// Directed/Mixed networks: n_AB arcs from A to B against
// hypergeom(n=o_A, K=i_B, N=i_V). Throws DegenerateTest when o_A or i_B is 0.
EnrichmentResult test_directed(const Network& net, const NodeSet& a, const NodeSet& b,
                               const TestSpec& spec);

// Undirected networks: edges joining A and B against
// hypergeom(n=d_A, K=d_B, N=d_V). Throws DegenerateTest when d_A or d_B is 0.
EnrichmentResult test_undirected(const Network& net, const NodeSet& a, const NodeSet& b,
                                 const TestSpec& spec);

// All ordered target->functional pairs (Directed/Mixed) or unordered pairs
// (Undirected), in input row-major order. Degenerate pairs become flagged
// rows instead of failures. The map over pairs runs in parallel when OpenMP
// is enabled; results are assembled in input order regardless of thread
// count.
std::vector<EnrichmentResult> test_batch(const Network& net, const std::vector<NodeSet>& targets,
                                         const std::vector<NodeSet>& functionals,
                                         const TestSpec& spec);

// Single-threaded reference of the same map, kept for testing and for the
// kernel benchmark.
std::vector<EnrichmentResult> test_batch_serial(const Network& net,
                                                const std::vector<NodeSet>& targets,
                                                const std::vector<NodeSet>& functionals,
                                                const TestSpec& spec);

// Explicit pair list (indices into `sets`), one result per pair in input
// order; degenerate pairs become flagged rows. Parallel and serial variants.
std::vector<EnrichmentResult> test_pairs(const Network& net, const std::vector<NodeSet>& sets,
                                         std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                                         const TestSpec& spec);
std::vector<EnrichmentResult> test_pairs_serial(const Network& net,
                                                const std::vector<NodeSet>& sets,
                                                std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                                                const TestSpec& spec);

// Benjamini-Hochberg step-up over rows with a p-value; original order is
// preserved, rows without p are flagged and skipped.
std::vector<EnrichmentResult> bh_adjust(std::vector<EnrichmentResult> results);

// |A n B| / |A u B|; throws BadInput when both sets are empty.
double jaccard(const NodeSet& a, const NodeSet& b);

}  // namespace neat
