#include "neat/simgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace neat {

namespace {

constexpr int kSequenceRetryCap = 100;

std::int64_t round_half_up(double x) { return static_cast<std::int64_t>(std::floor(x + 0.5)); }

// ---- degree sampling --------------------------------------------------------

struct PowerLawTable {
    std::vector<double> cum;  // cumulative weights for d = min_degree .. max_degree
    int min_degree;

    PowerLawTable(double exponent, int min_degree_, int max_degree) : min_degree(min_degree_) {
        cum.reserve(static_cast<std::size_t>(max_degree - min_degree + 1));
        double total = 0;
        for (int d = min_degree; d <= max_degree; ++d) {
            total += std::pow(static_cast<double>(d), -exponent);
            cum.push_back(total);
        }
    }

    int draw(Rng& rng) const {
        const double u = rng.uniform01() * cum.back();
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        return min_degree + static_cast<int>(it - cum.begin());
    }
};

std::vector<int> sample_raw_sequence(const DegreeSpec& spec, int node_count, Rng& rng) {
    spec.validate();
    if (node_count < 2) throw BadInput("degree sequence needs at least 2 nodes");

    const int max_degree = node_count - 1;
    std::optional<PowerLawTable> table;
    if (spec.law == DegreeSpec::Law::PowerLaw) {
        if (spec.min_degree > max_degree)
            throw BadInput("minimum degree exceeds node_count - 1");
        table.emplace(spec.exponent, spec.min_degree, max_degree);
    }

    for (int attempt = 0; attempt < kSequenceRetryCap; ++attempt) {
        std::vector<int> degrees(static_cast<std::size_t>(node_count));
        bool feasible = true;
        for (int& d : degrees) {
            if (table) {
                d = table->draw(rng);
            } else {
                const double lambda = rng.uniform01() < spec.weight1 ? spec.lambda1 : spec.lambda2;
                d = rng.poisson(lambda);
            }
            if (d > max_degree) {
                feasible = false;
                break;
            }
        }
        if (feasible) return degrees;
    }
    throw BadInput("could not sample a feasible degree sequence (max degree >= node count)");
}

// +1 at a uniformly chosen node that is not already at the cap.
void bump_one(std::vector<int>& degrees, int max_degree, Rng& rng) {
    for (int tries = 0; tries < 10000; ++tries) {
        const std::size_t i = static_cast<std::size_t>(rng.below(degrees.size()));
        if (degrees[i] < max_degree) {
            ++degrees[i];
            return;
        }
    }
    throw BadInput("degree repair failed: all nodes at maximum degree");
}

// ---- stub matching + swap rectification -------------------------------------

struct Rectifier {
    std::vector<std::pair<NodeId, NodeId>>& edges;
    bool directed;
    std::unordered_map<std::uint64_t, int> multiplicity;
    std::vector<std::size_t> suspects;  // indices that may still be defective

    Rectifier(std::vector<std::pair<NodeId, NodeId>>& edges_, bool directed_)
        : edges(edges_), directed(directed_) {
        multiplicity.reserve(edges.size() * 2);
        for (auto [u, v] : edges) ++multiplicity[key(u, v)];
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (defective(i)) suspects.push_back(i);
    }

    std::uint64_t key(NodeId u, NodeId v) const {
        if (!directed && u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
               static_cast<std::uint32_t>(v);
    }

    bool defective(std::size_t i) const {
        const auto [u, v] = edges[i];
        return u == v || multiplicity.at(key(u, v)) > 1;
    }

    // Swaps only ever take keys from count >= 1 to a key at count 0, so the
    // defect set shrinks monotonically.
    void run(Rng& rng) {
        if (edges.size() < 2 && !suspects.empty())
            throw BadInput("degree sequence admits no simple realization");
        const std::int64_t cap = 100 * static_cast<std::int64_t>(edges.size()) + 1000;
        std::int64_t attempts = 0;
        while (!suspects.empty()) {
            const std::size_t pos = static_cast<std::size_t>(rng.below(suspects.size()));
            const std::size_t i = suspects[pos];
            if (!defective(i)) {
                suspects[pos] = suspects.back();
                suspects.pop_back();
                continue;
            }
            if (++attempts > cap)
                throw BadInput(
                    "rectification did not converge; check the degree sequence for graphicality");

            const std::size_t j = static_cast<std::size_t>(rng.below(edges.size()));
            if (j == i) continue;
            const auto [u, v] = edges[i];
            const auto [x, y] = edges[j];

            NodeId a1, b1, a2, b2;
            if (directed) {
                a1 = u; b1 = y; a2 = x; b2 = v;
            } else if (rng.below(2) == 0) {
                a1 = u; b1 = x; a2 = v; b2 = y;
            } else {
                a1 = u; b1 = y; a2 = v; b2 = x;
            }
            if (a1 == b1 || a2 == b2) continue;

            const std::uint64_t k1 = key(a1, b1), k2 = key(a2, b2);
            if (k1 == k2) continue;
            auto& c_old1 = multiplicity[key(u, v)];
            auto& c_old2 = multiplicity[key(x, y)];
            --c_old1;
            --c_old2;
            if (multiplicity[k1] > 0 || multiplicity[k2] > 0) {
                ++c_old1;
                ++c_old2;
                continue;
            }
            ++multiplicity[k1];
            ++multiplicity[k2];
            edges[i] = {a1, b1};
            edges[j] = {a2, b2};
            if (defective(j)) suspects.push_back(j);  // j could have been a duplicate's twin
        }
    }
};

void verify_degrees(const Network& net, const std::vector<int>& out_expected,
                    const std::vector<int>& in_expected, bool directed) {
    for (NodeId v = 0; v < net.node_count(); ++v) {
        const std::size_t i = static_cast<std::size_t>(v);
        if (directed) {
            if (net.out_degree(v) != out_expected[i] || net.in_degree(v) != in_expected[i])
                throw BadInput("internal error: realized graph does not match degree sequence");
        } else {
            if (net.degree(v) != out_expected[i])
                throw BadInput("internal error: realized graph does not match degree sequence");
        }
    }
}

// ---- cut-pair enumeration ----------------------------------------------------

std::vector<std::pair<NodeId, NodeId>> absent_cut_pairs(const Network& net, const NodeSet& a,
                                                        const NodeSet& b) {
    std::vector<std::pair<NodeId, NodeId>> out;
    if (net.kind() == NetworkKind::Undirected) {
        const SetMask mask_a(net, a), mask_b(net, b);
        for (NodeId u : a.members)
            for (NodeId v : b.members) {
                if (u == v || net.has_edge(u, v)) continue;
                if (mask_a[v] && mask_b[u] && u > v) continue;  // unordered dedup
                out.emplace_back(u, v);
            }
    } else {
        for (NodeId u : a.members)
            for (NodeId v : b.members)
                if (u != v && !net.has_arc(u, v)) out.emplace_back(u, v);
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> present_cut_pairs(const Network& net, const NodeSet& a,
                                                         const NodeSet& b) {
    std::vector<std::pair<NodeId, NodeId>> out;
    const SetMask mask_a(net, a), mask_b(net, b);
    if (net.kind() == NetworkKind::Undirected) {
        for (NodeId u : a.members)
            for (NodeId v : net.neighbors(u)) {
                if (!mask_b[v]) continue;
                if (mask_a[v] && mask_b[u] && u > v) continue;
                out.emplace_back(u, v);
            }
    } else {
        for (NodeId u : a.members)
            for (NodeId v : net.out_neighbors(u))
                if (mask_b[v]) out.emplace_back(u, v);
    }
    return out;
}

}  // namespace

// ---- public: degree sequences ------------------------------------------------

void DegreeSpec::validate() const {
    if (law == Law::PowerLaw) {
        if (!(exponent > 2.0)) throw BadInput("power-law exponent must exceed 2");
        if (min_degree < 1) throw BadInput("power-law minimum degree must be >= 1");
    } else {
        if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw BadInput("Poisson rates must be positive");
        if (!(weight1 > 0.0) || !(weight2 > 0.0) ||
            std::abs(weight1 + weight2 - 1.0) > 1e-9)
            throw BadInput("mixture weights must be positive and sum to 1");
    }
}

std::vector<int> sample_degree_sequence_undirected(const DegreeSpec& spec, int node_count,
                                                   Rng& rng) {
    std::vector<int> degrees = sample_raw_sequence(spec, node_count, rng);
    std::int64_t sum = std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
    if (sum % 2 != 0) bump_one(degrees, node_count - 1, rng);
    return degrees;
}

std::pair<std::vector<int>, std::vector<int>> sample_degree_sequence_directed(
    const DegreeSpec& spec, int node_count, Rng& rng) {
    std::vector<int> out = sample_raw_sequence(spec, node_count, rng);
    std::vector<int> in = sample_raw_sequence(spec, node_count, rng);
    std::int64_t out_sum = std::accumulate(out.begin(), out.end(), std::int64_t{0});
    std::int64_t in_sum = std::accumulate(in.begin(), in.end(), std::int64_t{0});
    while (out_sum < in_sum) {
        bump_one(out, node_count - 1, rng);
        ++out_sum;
    }
    while (in_sum < out_sum) {
        bump_one(in, node_count - 1, rng);
        ++in_sum;
    }
    return {std::move(out), std::move(in)};
}

// ---- public: graph realization ------------------------------------------------

Network realize_undirected(const std::vector<int>& degrees, Rng& rng) {
    const int n = static_cast<int>(degrees.size());
    if (n < 2) throw BadInput("need at least 2 nodes");
    std::int64_t sum = 0;
    for (int d : degrees) {
        if (d < 0 || d > n - 1) throw BadInput("degree outside [0, node_count-1]");
        sum += d;
    }
    if (sum % 2 != 0) throw BadInput("undirected degree sum must be even");
    if (sum == 0) throw BadInput("degree sequence has no edges");

    std::vector<NodeId> stubs;
    stubs.reserve(static_cast<std::size_t>(sum));
    for (int v = 0; v < n; ++v)
        for (int c = 0; c < degrees[static_cast<std::size_t>(v)]; ++c)
            stubs.push_back(static_cast<NodeId>(v));
    rng.shuffle(stubs);

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);

    Rectifier rect(edges, /*directed=*/false);
    rect.run(rng);
    for (auto& [u, v] : edges)
        if (u > v) std::swap(u, v);

    Network net = Network::from_ids(static_cast<NodeId>(n), edges, NetworkKind::Undirected);
    verify_degrees(net, degrees, degrees, false);
    return net;
}

Network realize_directed(const std::vector<int>& out_degrees, const std::vector<int>& in_degrees,
                         Rng& rng) {
    const int n = static_cast<int>(out_degrees.size());
    if (n < 2) throw BadInput("need at least 2 nodes");
    if (in_degrees.size() != out_degrees.size())
        throw BadInput("out/in degree sequences differ in length");
    std::int64_t out_sum = 0, in_sum = 0;
    for (int d : out_degrees) {
        if (d < 0 || d > n - 1) throw BadInput("degree outside [0, node_count-1]");
        out_sum += d;
    }
    for (int d : in_degrees) {
        if (d < 0 || d > n - 1) throw BadInput("degree outside [0, node_count-1]");
        in_sum += d;
    }
    if (out_sum != in_sum) throw BadInput("out- and in-degree totals must match");
    if (out_sum == 0) throw BadInput("degree sequence has no arcs");

    std::vector<NodeId> out_stubs, in_stubs;
    out_stubs.reserve(static_cast<std::size_t>(out_sum));
    in_stubs.reserve(static_cast<std::size_t>(in_sum));
    for (int v = 0; v < n; ++v) {
        for (int c = 0; c < out_degrees[static_cast<std::size_t>(v)]; ++c)
            out_stubs.push_back(static_cast<NodeId>(v));
        for (int c = 0; c < in_degrees[static_cast<std::size_t>(v)]; ++c)
            in_stubs.push_back(static_cast<NodeId>(v));
    }
    rng.shuffle(in_stubs);

    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(out_stubs.size());
    for (std::size_t i = 0; i < out_stubs.size(); ++i) arcs.emplace_back(out_stubs[i], in_stubs[i]);

    Rectifier rect(arcs, /*directed=*/true);
    rect.run(rng);

    Network net = Network::from_ids(static_cast<NodeId>(n), arcs, NetworkKind::Directed);
    verify_degrees(net, out_degrees, in_degrees, true);
    return net;
}

// ---- public: set grids ---------------------------------------------------------

std::vector<NodeSet> make_set_grid(const Network& net, int count, int size_min, int size_max,
                                   Rng& rng, OverlapStats* stats) {
    if (count < 1) throw BadInput("set grid needs at least one set");
    if (size_min < 1 || size_min > size_max) throw BadInput("invalid set size range");
    if (size_max > net.node_count()) throw BadInput("set size exceeds node count");

    std::vector<NodeId> pool(static_cast<std::size_t>(net.node_count()));
    std::iota(pool.begin(), pool.end(), 0);

    std::vector<NodeSet> sets;
    sets.reserve(static_cast<std::size_t>(count));
    char name[32];
    for (int s = 0; s < count; ++s) {
        const int size = static_cast<int>(rng.uniform_int(size_min, size_max));
        rng.partial_shuffle(pool, static_cast<std::size_t>(size));
        std::vector<NodeId> members(pool.begin(), pool.begin() + size);
        std::snprintf(name, sizeof name, "set%03d", s + 1);
        sets.push_back(NodeSet::from_ids(name, std::move(members), net));
    }

    if (stats) {
        *stats = OverlapStats{};
        double total = 0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < sets.size(); ++i)
            for (std::size_t j = i + 1; j < sets.size(); ++j) {
                const double jac = jaccard(sets[i], sets[j]);
                total += jac;
                stats->max_jaccard = std::max(stats->max_jaccard, jac);
                ++pairs;
            }
        stats->mean_jaccard = pairs ? total / static_cast<double>(pairs) : 0.0;
    }
    return sets;
}

std::pair<NodeSet, NodeSet> make_overlap_pair(const Network& net, int size, int intersection,
                                              Rng& rng, int pair_index) {
    if (size < 1 || intersection < 0 || intersection > size)
        throw BadInput("invalid overlap pair shape");
    if (2 * size - intersection > net.node_count())
        throw BadInput("overlap pair does not fit in the network");

    std::vector<NodeId> pool(static_cast<std::size_t>(net.node_count()));
    std::iota(pool.begin(), pool.end(), 0);
    rng.partial_shuffle(pool, static_cast<std::size_t>(2 * size - intersection));

    std::vector<NodeId> a(pool.begin(), pool.begin() + size);
    std::vector<NodeId> b(pool.begin(), pool.begin() + intersection);
    b.insert(b.end(), pool.begin() + size, pool.begin() + (2 * size - intersection));

    return {NodeSet::from_ids("A" + std::to_string(pair_index), std::move(a), net),
            NodeSet::from_ids("B" + std::to_string(pair_index), std::move(b), net)};
}

// ---- public: injection ----------------------------------------------------------

InjectionOutcome inject_links(const Network& net, const NodeSet& a, const NodeSet& b,
                              std::int64_t count, EffectSign sign, Rng& rng) {
    if (count < 0) throw BadInput("injection count must be non-negative");
    InjectionOutcome out{net, count_links(net, a, b), 0, 0};

    if (count == 0) {
        out.n_ab_after = out.target = out.n_ab_before;
        return out;
    }

    if (sign == EffectSign::Add) {
        auto candidates = absent_cut_pairs(net, a, b);
        if (static_cast<std::int64_t>(candidates.size()) < count)
            throw BadInput("not enough absent cut pairs to add the requested links");
        rng.partial_shuffle(candidates, static_cast<std::size_t>(count));
        candidates.resize(static_cast<std::size_t>(count));
        out.network = net.with_changes(candidates, {});
        out.target = out.n_ab_before + count;
    } else {
        auto candidates = present_cut_pairs(net, a, b);
        if (static_cast<std::int64_t>(candidates.size()) < count)
            throw BadInput("not enough present cut links to remove");
        rng.partial_shuffle(candidates, static_cast<std::size_t>(count));
        candidates.resize(static_cast<std::size_t>(count));
        out.network = net.with_changes({}, candidates);
        out.target = out.n_ab_before - count;
    }

    out.n_ab_after = count_links(out.network, a, b);
    if (out.n_ab_after != out.target)
        throw BadInput("internal error: injection missed its target cut count");
    return out;
}

InjectionOutcome inject_enrichment(const Network& net, const NodeSet& a, const NodeSet& b,
                                   double delta, EffectSign sign, Rng& rng) {
    if (!(delta > 0.0 && delta < 1.0)) throw BadInput("injection proportion must lie in (0,1)");
    const std::int64_t before = count_links(net, a, b);
    if (sign == EffectSign::Remove && before < 1)
        throw BadInput("cannot remove links from an empty cut");
    const double factor = sign == EffectSign::Add ? 1.0 + delta : 1.0 - delta;
    const std::int64_t target = round_half_up(factor * static_cast<double>(before));
    const std::int64_t count = std::abs(target - before);
    return inject_links(net, a, b, count, target >= before ? EffectSign::Add : EffectSign::Remove,
                        rng);
}

// ---- public: scenarios -----------------------------------------------------------

void ScenarioSpec::validate() const {
    degrees.validate();
    if (node_count < 2) throw BadInput("scenario needs at least 2 nodes");
    if (!(effect_min > 0.0 && effect_max < 1.0 && effect_min <= effect_max))
        throw BadInput("effect range must satisfy 0 < min <= max < 1");
    if (set_size_min < 1 || set_size_min > set_size_max || set_size_max > node_count)
        throw BadInput("set sizes must fit in the network");
    if (overlap_mode()) {
        if (tests_per_level < 2) throw BadInput("overlap sweep needs at least 2 tests per level");
        if (inject_link_count < 1) throw BadInput("overlap sweep injection count must be >= 1");
        for (int c : overlap_schedule)
            if (c < 0 || c > set_size_max || 2 * set_size_max - c > node_count)
                throw BadInput("overlap schedule entry does not fit in the network");
        if (kind != NetworkKind::Directed)
            throw BadInput("overlap sweep is defined for directed networks");
    } else {
        if (set_count < 2) throw BadInput("scenario needs at least 2 sets");
        const std::int64_t all_pairs =
            kind == NetworkKind::Undirected
                ? static_cast<std::int64_t>(set_count) * (set_count - 1) / 2
                : static_cast<std::int64_t>(set_count) * (set_count - 1);
        if (enriched_pair_count < 0 || enriched_pair_count > all_pairs)
            throw BadInput("enriched pair count exceeds the number of tested pairs");
    }
    if (kind == NetworkKind::Mixed) throw BadInput("scenarios use directed or undirected networks");
}

ScenarioSpec scenario_preset(const std::string& id, int nodes, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.id = id;
    spec.seed = seed;
    if (nodes > 0) spec.node_count = nodes;

    DegreeSpec power{DegreeSpec::Law::PowerLaw, 4.0, 20, 40, 100, 0.99, 0.01};
    DegreeSpec mixture{DegreeSpec::Law::PoissonMixture, 4.0, 20, 40.0, 100.0, 0.99, 0.01};

    if (id == "s1") {
        spec.kind = NetworkKind::Directed;
        spec.degrees = power;
        spec.enriched_pair_count = 200;
    } else if (id == "s2") {
        spec.kind = NetworkKind::Directed;
        spec.degrees = mixture;
        spec.enriched_pair_count = 200;
    } else if (id == "s3") {
        spec.kind = NetworkKind::Directed;
        spec.degrees = mixture;
        spec.set_size_min = spec.set_size_max = 50;
        spec.overlap_schedule = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
        spec.tests_per_level = 2000;
        spec.inject_link_count = 35;
    } else if (id == "s4") {
        spec.kind = NetworkKind::Undirected;
        spec.degrees = power;
        spec.enriched_pair_count = 100;
    } else if (id == "s5") {
        spec.kind = NetworkKind::Undirected;
        spec.degrees = mixture;
        spec.enriched_pair_count = 100;
    } else {
        throw BadInput("unknown scenario '" + id + "' (expected s1..s5)");
    }
    spec.validate();
    return spec;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string scenario_to_kv(const ScenarioSpec& spec) {
    std::ostringstream os;
    os << "id=" << spec.id << '\n';
    os << "kind=" << to_string(spec.kind) << '\n';
    os << "law=" << (spec.degrees.law == DegreeSpec::Law::PowerLaw ? "power_law" : "poisson_mixture")
       << '\n';
    os << "exponent=" << fmt_double(spec.degrees.exponent) << '\n';
    os << "min_degree=" << spec.degrees.min_degree << '\n';
    os << "lambda1=" << fmt_double(spec.degrees.lambda1) << '\n';
    os << "lambda2=" << fmt_double(spec.degrees.lambda2) << '\n';
    os << "weight1=" << fmt_double(spec.degrees.weight1) << '\n';
    os << "weight2=" << fmt_double(spec.degrees.weight2) << '\n';
    os << "node_count=" << spec.node_count << '\n';
    os << "set_count=" << spec.set_count << '\n';
    os << "set_size_min=" << spec.set_size_min << '\n';
    os << "set_size_max=" << spec.set_size_max << '\n';
    os << "enriched_pair_count=" << spec.enriched_pair_count << '\n';
    os << "effect_min=" << fmt_double(spec.effect_min) << '\n';
    os << "effect_max=" << fmt_double(spec.effect_max) << '\n';
    if (spec.overlap_mode()) {
        os << "overlap_schedule=";
        for (std::size_t i = 0; i < spec.overlap_schedule.size(); ++i)
            os << (i ? "," : "") << spec.overlap_schedule[i];
        os << '\n';
        os << "tests_per_level=" << spec.tests_per_level << '\n';
        os << "inject_link_count=" << spec.inject_link_count << '\n';
    }
    os << "seed=" << spec.seed << '\n';
    return os.str();
}

ScenarioSpec scenario_from_kv(const std::string& text) {
    ScenarioSpec spec;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw BadInput("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "id") spec.id = value;
            else if (key == "kind") spec.kind = network_kind_from_string(value);
            else if (key == "law")
                spec.degrees.law = value == "power_law" ? DegreeSpec::Law::PowerLaw
                                   : value == "poisson_mixture"
                                       ? DegreeSpec::Law::PoissonMixture
                                       : throw BadInput("unknown degree law '" + value + "'");
            else if (key == "exponent") spec.degrees.exponent = std::stod(value);
            else if (key == "min_degree") spec.degrees.min_degree = std::stoi(value);
            else if (key == "lambda1") spec.degrees.lambda1 = std::stod(value);
            else if (key == "lambda2") spec.degrees.lambda2 = std::stod(value);
            else if (key == "weight1") spec.degrees.weight1 = std::stod(value);
            else if (key == "weight2") spec.degrees.weight2 = std::stod(value);
            else if (key == "node_count") spec.node_count = std::stoi(value);
            else if (key == "set_count") spec.set_count = std::stoi(value);
            else if (key == "set_size_min") spec.set_size_min = std::stoi(value);
            else if (key == "set_size_max") spec.set_size_max = std::stoi(value);
            else if (key == "enriched_pair_count") spec.enriched_pair_count = std::stoi(value);
            else if (key == "effect_min") spec.effect_min = std::stod(value);
            else if (key == "effect_max") spec.effect_max = std::stod(value);
            else if (key == "overlap_schedule") {
                spec.overlap_schedule.clear();
                std::istringstream vs(value);
                std::string tok;
                while (std::getline(vs, tok, ',')) spec.overlap_schedule.push_back(std::stoi(tok));
            } else if (key == "tests_per_level") spec.tests_per_level = std::stoi(value);
            else if (key == "inject_link_count") spec.inject_link_count = std::stoi(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else throw BadInput("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw BadInput("config line " + std::to_string(lineno) + ": bad value for " + key);
        } catch (const std::out_of_range&) {
            throw BadInput("config line " + std::to_string(lineno) + ": value out of range for " + key);
        }
    }
    spec.validate();
    return spec;
}

namespace {

Network build_scenario_network(const ScenarioSpec& spec, Rng& root) {
    if (spec.kind == NetworkKind::Undirected) {
        Rng deg_rng = root.stream(1);
        Rng graph_rng = root.stream(2);
        const auto degrees = sample_degree_sequence_undirected(spec.degrees, spec.node_count, deg_rng);
        return realize_undirected(degrees, graph_rng);
    }
    Rng deg_rng = root.stream(1);
    Rng graph_rng = root.stream(2);
    const auto [out, in] = sample_degree_sequence_directed(spec.degrees, spec.node_count, deg_rng);
    return realize_directed(out, in, graph_rng);
}

struct ScoredBatch {
    std::vector<double> pvalues;        // rows with a p-value only
    std::vector<std::uint8_t> truth;
    std::vector<double> null_pvalues;   // subset with truth == false
    std::int64_t degenerate = 0;
};

ScoredBatch collect_scores(const std::vector<EnrichmentResult>& results,
                           const std::vector<GroundTruthEntry>& truth) {
    ScoredBatch s;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].has_p()) {
            ++s.degenerate;
            continue;
        }
        s.pvalues.push_back(results[i].p);
        s.truth.push_back(truth[i].enriched ? 1 : 0);
        if (!truth[i].enriched) s.null_pvalues.push_back(results[i].p);
    }
    return s;
}

void fill_metrics(ScenarioReport& report, const ScoredBatch& s) {
    report.degenerate_count = s.degenerate;
    report.n_tests = static_cast<std::int64_t>(s.pvalues.size()) + s.degenerate;
    report.n_null = static_cast<std::int64_t>(s.null_pvalues.size());
    report.n_enriched = static_cast<std::int64_t>(s.pvalues.size()) -
                        static_cast<std::int64_t>(s.null_pvalues.size());

    if (!s.null_pvalues.empty()) {
        const KsResult ks = ks_uniform(s.null_pvalues);
        report.ks_d = ks.d;
        report.ks_p = ks.p;
        const RejectionRatios rr = rejection_ratios(s.null_pvalues);
        report.r1 = rr.r1;
        report.r5 = rr.r5;
    }

    const ConfusionMetrics cm = confusion_metrics(s.pvalues, s.truth, 0.05);
    report.sensitivity = cm.sensitivity;
    report.sensitivity_defined = cm.sensitivity_defined;
    report.specificity = cm.specificity;
    report.specificity_defined = cm.specificity_defined;

    if (report.n_enriched > 0 && report.n_null > 0) {
        std::vector<double> scores(s.pvalues.size());
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = 1.0 - s.pvalues[i];
        report.auc_value = auc(scores, s.truth);
        report.auc_defined = true;
    }
}

ScenarioReport run_grid_scenario(const ScenarioSpec& spec, Rng& root, Network net) {
    OverlapStats overlap;
    Rng set_rng = root.stream(3);
    const std::vector<NodeSet> sets = make_set_grid(net, spec.set_count, spec.set_size_min,
                                                    spec.set_size_max, set_rng, &overlap);

    // row-major ordered pairs (directed) or i<j pairs (undirected)
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    for (std::int32_t i = 0; i < spec.set_count; ++i)
        for (std::int32_t j = 0; j < spec.set_count; ++j) {
            if (i == j) continue;
            if (spec.kind == NetworkKind::Undirected && i > j) continue;
            pairs.emplace_back(i, j);
        }

    std::vector<GroundTruthEntry> truth(pairs.size());
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    Rng truth_rng = root.stream(4);
    truth_rng.shuffle(order);

    // Plant enrichments sequentially on the evolving network, mirroring the
    // way the simulation modifies a single original network.
    Rng inject_rng = root.stream(5);
    int planted = 0;
    for (std::size_t pos = 0; pos < order.size() && planted < spec.enriched_pair_count; ++pos) {
        const std::size_t idx = order[pos];
        const auto [i, j] = pairs[idx];
        const NodeSet& a = sets[static_cast<std::size_t>(i)];
        const NodeSet& b = sets[static_cast<std::size_t>(j)];
        const std::int64_t current = count_links(net, a, b);
        if (current < 1) continue;  // a proportional change cannot move an empty cut

        EffectSign sign = inject_rng.below(2) == 0 ? EffectSign::Add : EffectSign::Remove;
        const double delta =
            spec.effect_min + (spec.effect_max - spec.effect_min) * inject_rng.uniform01();
        std::int64_t target = round_half_up((sign == EffectSign::Add ? 1.0 + delta : 1.0 - delta) *
                                            static_cast<double>(current));
        if (target == current) {  // rounding swallowed the effect; try the other sign
            sign = EffectSign::Add;
            target = round_half_up((1.0 + delta) * static_cast<double>(current));
            if (target == current) continue;
        }
        InjectionOutcome outcome = inject_enrichment(net, a, b, delta, sign, inject_rng);
        if (outcome.n_ab_after == outcome.n_ab_before) continue;
        net = std::move(outcome.network);
        truth[idx].enriched = true;
        truth[idx].effect = outcome.n_ab_after > outcome.n_ab_before
                                ? GroundTruthEntry::Effect::Added
                                : GroundTruthEntry::Effect::Removed;
        ++planted;
    }
    if (planted < spec.enriched_pair_count)
        throw BadInput("could not plant the requested number of enrichments");

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<EnrichmentResult> results = test_pairs(net, sets, pairs, TestSpec{});
    const auto t1 = std::chrono::steady_clock::now();

    ScenarioReport report;
    report.spec = spec;
    report.overlap = overlap;
    const double n = static_cast<double>(spec.node_count);
    report.graph_density =
        static_cast<double>(net.total_indegree()) / (n * (n - 1.0));
    fill_metrics(report, collect_scores(results, truth));
    report.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

ScenarioReport run_overlap_scenario(const ScenarioSpec& spec, Rng& root, const Network& base) {
    ScenarioReport report;
    report.spec = spec;
    const double n = static_cast<double>(spec.node_count);
    report.graph_density = static_cast<double>(base.total_indegree()) / (n * (n - 1.0));

    const int size = spec.set_size_max;
    const int per_level = spec.tests_per_level;
    const int n_h1 = per_level / 2;
    const int n_h0 = per_level - n_h1;
    const TestSpec test_spec;

    std::vector<double> all_pvalues;
    std::vector<std::uint8_t> all_truth;
    std::vector<double> pooled_null;

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t level = 0; level < spec.overlap_schedule.size(); ++level) {
        const int c = spec.overlap_schedule[level];
        std::vector<double> pvals(static_cast<std::size_t>(per_level),
                                  std::numeric_limits<double>::quiet_NaN());

        // Exceptions must not escape the parallel region; a failed test
        // simply leaves NaN behind and is counted as degenerate.
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < per_level; ++t) {
            try {
                Rng stream = root.stream(10'000 + level * 100'000 + static_cast<std::uint64_t>(t));
                auto [a, b] = make_overlap_pair(base, size, c, stream, t);
                const bool enriched = t >= n_h0;
                EnrichmentResult r;
                if (enriched) {
                    InjectionOutcome outcome =
                        inject_links(base, a, b, spec.inject_link_count, EffectSign::Add, stream);
                    r = test_directed(outcome.network, a, b, test_spec);
                } else {
                    r = test_directed(base, a, b, test_spec);
                }
                pvals[static_cast<std::size_t>(t)] = r.p;
            } catch (const std::exception&) {
            }
        }

        std::int64_t h0_keep = 0, h0_reject = 0, h1_keep = 0, h1_reject = 0;
        for (int t = 0; t < per_level; ++t) {
            const double p = pvals[static_cast<std::size_t>(t)];
            if (std::isnan(p)) {
                ++report.degenerate_count;
                continue;
            }
            const bool enriched = t >= n_h0;
            all_pvalues.push_back(p);
            all_truth.push_back(enriched ? 1 : 0);
            if (enriched)
                p < 0.05 ? ++h1_reject : ++h1_keep;
            else {
                p < 0.05 ? ++h0_reject : ++h0_keep;
                pooled_null.push_back(p);
            }
        }

        ScenarioReport::OverlapLevel lv;
        lv.intersection = c;
        lv.jaccard = static_cast<double>(c) / static_cast<double>(2 * size - c);
        lv.n_tests = per_level;
        lv.sensitivity = n_h1 > 0 ? static_cast<double>(h1_reject) /
                                        static_cast<double>(h1_reject + h1_keep)
                                  : 0.0;
        lv.specificity = n_h0 > 0 ? static_cast<double>(h0_keep) /
                                        static_cast<double>(h0_keep + h0_reject)
                                  : 0.0;
        report.levels.push_back(lv);
    }
    const auto t1 = std::chrono::steady_clock::now();

    report.n_tests = static_cast<std::int64_t>(all_pvalues.size()) + report.degenerate_count;
    report.n_null = static_cast<std::int64_t>(pooled_null.size());
    report.n_enriched = static_cast<std::int64_t>(all_pvalues.size()) - report.n_null;
    if (!pooled_null.empty()) {
        const KsResult ks = ks_uniform(pooled_null);
        report.ks_d = ks.d;
        report.ks_p = ks.p;
        const RejectionRatios rr = rejection_ratios(pooled_null);
        report.r1 = rr.r1;
        report.r5 = rr.r5;
    }
    const ConfusionMetrics cm = confusion_metrics(all_pvalues, all_truth, 0.05);
    report.sensitivity = cm.sensitivity;
    report.sensitivity_defined = cm.sensitivity_defined;
    report.specificity = cm.specificity;
    report.specificity_defined = cm.specificity_defined;
    if (report.n_enriched > 0 && report.n_null > 0) {
        std::vector<double> scores(all_pvalues.size());
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = 1.0 - all_pvalues[i];
        report.auc_value = auc(scores, all_truth);
        report.auc_defined = true;
    }
    report.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioSpec& spec) {
    spec.validate();
    Rng root(spec.seed);
    Network net = build_scenario_network(spec, root);
    if (spec.overlap_mode()) return run_overlap_scenario(spec, root, net);
    return run_grid_scenario(spec, root, std::move(net));
}

}  // namespace neat
