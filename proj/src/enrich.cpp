#include "neat/enrich.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace neat {

namespace {

void append_flag(std::string& flags, const char* token) {
    if (!flags.empty()) flags += ',';
    flags += token;
}

Call classify(double p, std::int64_t n_ab, double mu0, double alpha, std::string& flags) {
    if (std::isnan(p) || p >= alpha) return Call::NoEvidence;
    if (static_cast<double>(n_ab) > mu0) return Call::Over;
    if (static_cast<double>(n_ab) < mu0) return Call::Under;
    // p < alpha but n_ab == mu0: no direction can be assigned.
    append_flag(flags, "tie_mu0");
    return Call::NoEvidence;
}

// Shared by the directed and undirected tests once the margins are known.
EnrichmentResult run_test(std::string set_a, std::string set_b, Direction dir,
                          std::int64_t n_ab, std::int64_t n, std::int64_t K, std::int64_t N,
                          const char* empty_n, const char* empty_k, const TestSpec& spec,
                          bool throw_on_degenerate) {
    EnrichmentResult r;
    r.set_a = std::move(set_a);
    r.set_b = std::move(set_b);
    r.direction = dir;
    r.n_ab = n_ab;
    r.params = HypergeomParams{n, K, N};

    if (n == 0 || K == 0) {
        const char* which = n == 0 ? empty_n : empty_k;
        if (throw_on_degenerate)
            throw DegenerateTest(std::string("test undefined: ") + which + " = 0 for set '" +
                                 (n == 0 ? r.set_a : r.set_b) + "'");
        r.degenerate = true;
        append_flag(r.flags, "degenerate");
        append_flag(r.flags, which);
        r.mu0 = 0;
        return r;
    }

    r.mu0 = null_mean(r.params);
    TwoSidedP ts;
    try {
        ts = two_sided_p(n_ab, r.params);
    } catch (const BadInput&) {
        // Heavily overlapping undirected sets can push the observed count
        // outside the support of the sampling story; report, don't abort.
        r.degenerate = true;
        append_flag(r.flags, "degenerate");
        append_flag(r.flags, "out_of_support");
        return r;
    }
    r.p = ts.p;
    r.log10_p = ts.log10_p;
    r.call = classify(r.p, r.n_ab, r.mu0, spec.alpha, r.flags);
    return r;
}

EnrichmentResult test_pair(const Network& net, const NodeSet& a, const SetMask& mask_a,
                           const NodeSet& b, const SetMask& mask_b, const TestSpec& spec,
                           bool throw_on_degenerate) {
    const std::int64_t n_ab = count_links_masked(net, a, mask_a, mask_b);
    if (net.kind() == NetworkKind::Undirected) {
        const SetDegrees da = set_degrees(net, a);
        const SetDegrees db = set_degrees(net, b);
        return run_test(a.name, b.name, Direction::Undirected, n_ab, da.total, db.total,
                        net.total_degree(), "d_A=0", "d_B=0", spec, throw_on_degenerate);
    }
    const SetDegrees da = set_degrees(net, a);
    const SetDegrees db = set_degrees(net, b);
    return run_test(a.name, b.name, Direction::AtoB, n_ab, da.out, db.in, net.total_indegree(),
                    "o_A=0", "i_B=0", spec, throw_on_degenerate);
}

struct PairGrid {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (target idx, functional idx)
};

PairGrid make_grid(const Network& net, const std::vector<NodeSet>& targets,
                   const std::vector<NodeSet>& functionals, const TestSpec& spec) {
    if (targets.empty() || functionals.empty())
        throw BadInput("test_batch requires at least one target and one functional set");
    PairGrid grid;
    const bool undirected = net.kind() == NetworkKind::Undirected;
    // Unordered-pair dedup for undirected grids keyed on set names.
    auto canonical = [](const std::string& x, const std::string& y) {
        return x <= y ? x + '\x1f' + y : y + '\x1f' + x;
    };
    std::vector<std::string> seen;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        for (std::size_t j = 0; j < functionals.size(); ++j) {
            const bool self = targets[i].name == functionals[j].name;
            if (self && !spec.include_self_pairs) continue;
            if (undirected && !self) {
                std::string key = canonical(targets[i].name, functionals[j].name);
                if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
                seen.push_back(std::move(key));
            }
            grid.pairs.emplace_back(i, j);
        }
    }
    return grid;
}

std::vector<EnrichmentResult> run_batch(const Network& net, const std::vector<NodeSet>& targets,
                                        const std::vector<NodeSet>& functionals,
                                        const TestSpec& spec, bool parallel) {
    spec.validate();
    const PairGrid grid = make_grid(net, targets, functionals, spec);

    std::vector<SetMask> target_masks(targets.size());
    std::vector<SetMask> functional_masks(functionals.size());
    for (std::size_t i = 0; i < targets.size(); ++i) target_masks[i] = SetMask(net, targets[i]);
    for (std::size_t j = 0; j < functionals.size(); ++j)
        functional_masks[j] = SetMask(net, functionals[j]);

    std::vector<EnrichmentResult> results(grid.pairs.size());
    const std::int64_t m = static_cast<std::int64_t>(grid.pairs.size());
    // Each iteration writes only its own slot, so the output is identical
    // for any schedule and thread count.
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::int64_t idx = 0; idx < m; ++idx) {
        const auto [i, j] = grid.pairs[static_cast<std::size_t>(idx)];
        results[static_cast<std::size_t>(idx)] = test_pair(
            net, targets[i], target_masks[i], functionals[j], functional_masks[j], spec, false);
    }

    if (spec.adjust == TestSpec::Adjust::BenjaminiHochberg) results = bh_adjust(std::move(results));
    return results;
}

std::vector<EnrichmentResult> run_pairs(const Network& net, const std::vector<NodeSet>& sets,
                                        std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                                        const TestSpec& spec, bool parallel) {
    spec.validate();
    for (auto [i, j] : pairs)
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= sets.size() ||
            static_cast<std::size_t>(j) >= sets.size())
            throw BadInput("pair index out of range");

    std::vector<SetMask> masks(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) masks[i] = SetMask(net, sets[i]);

    std::vector<EnrichmentResult> results(pairs.size());
    const std::int64_t m = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::int64_t idx = 0; idx < m; ++idx) {
        const auto [i, j] = pairs[static_cast<std::size_t>(idx)];
        results[static_cast<std::size_t>(idx)] =
            test_pair(net, sets[static_cast<std::size_t>(i)], masks[static_cast<std::size_t>(i)],
                      sets[static_cast<std::size_t>(j)], masks[static_cast<std::size_t>(j)], spec,
                      false);
    }
    return results;
}

}  // namespace

const char* to_string(Direction d) {
    return d == Direction::AtoB ? "AtoB" : "Undirected";
}

const char* to_string(Call c) {
    switch (c) {
        case Call::Over: return "Over";
        case Call::Under: return "Under";
        case Call::NoEvidence: return "NoEvidence";
    }
    return "?";
}

void TestSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadInput("alpha must lie in (0,1)");
}

EnrichmentResult test_directed(const Network& net, const NodeSet& a, const NodeSet& b,
                               const TestSpec& spec) {
    spec.validate();
    if (net.kind() == NetworkKind::Undirected)
        throw BadInput("test_directed requires a directed or mixed network");
    return test_pair(net, a, SetMask(net, a), b, SetMask(net, b), spec, true);
}

EnrichmentResult test_undirected(const Network& net, const NodeSet& a, const NodeSet& b,
                                 const TestSpec& spec) {
    spec.validate();
    if (net.kind() != NetworkKind::Undirected)
        throw BadInput("test_undirected requires an undirected network");
    return test_pair(net, a, SetMask(net, a), b, SetMask(net, b), spec, true);
}

std::vector<EnrichmentResult> test_batch(const Network& net, const std::vector<NodeSet>& targets,
                                         const std::vector<NodeSet>& functionals,
                                         const TestSpec& spec) {
    return run_batch(net, targets, functionals, spec, true);
}

std::vector<EnrichmentResult> test_batch_serial(const Network& net,
                                                const std::vector<NodeSet>& targets,
                                                const std::vector<NodeSet>& functionals,
                                                const TestSpec& spec) {
    return run_batch(net, targets, functionals, spec, false);
}

std::vector<EnrichmentResult> test_pairs(const Network& net, const std::vector<NodeSet>& sets,
                                         std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                                         const TestSpec& spec) {
    return run_pairs(net, sets, pairs, spec, true);
}

std::vector<EnrichmentResult> test_pairs_serial(const Network& net,
                                                const std::vector<NodeSet>& sets,
                                                std::span<const std::pair<std::int32_t, std::int32_t>> pairs,
                                                const TestSpec& spec) {
    return run_pairs(net, sets, pairs, spec, false);
}

std::vector<EnrichmentResult> bh_adjust(std::vector<EnrichmentResult> results) {
    std::vector<std::size_t> with_p;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].has_p()) {
            with_p.push_back(i);
        } else {
            append_flag(results[i].flags, "missing_p");
        }
    }
    const std::size_t m = with_p.size();
    if (m == 0) return results;

    std::sort(with_p.begin(), with_p.end(), [&results](std::size_t x, std::size_t y) {
        return results[x].p < results[y].p;
    });
    double running = 1.0;
    for (std::size_t rank = m; rank-- > 0;) {
        const std::size_t idx = with_p[rank];
        const double stepped =
            results[idx].p * static_cast<double>(m) / static_cast<double>(rank + 1);
        running = std::min(running, stepped);
        results[idx].adj_p = running;
    }
    return results;
}

double jaccard(const NodeSet& a, const NodeSet& b) {
    std::vector<NodeId> tmp;
    tmp.resize(std::min(a.members.size(), b.members.size()));
    auto it = std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                                    b.members.end(), tmp.begin());
    const std::size_t inter = static_cast<std::size_t>(it - tmp.begin());
    const std::size_t uni = a.members.size() + b.members.size() - inter;
    if (uni == 0) throw BadInput("jaccard of two empty sets is undefined");
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace neat
