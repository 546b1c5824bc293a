#include "neat/graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace neat {

namespace {

inline std::uint64_t arc_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

inline std::uint64_t edge_key(NodeId u, NodeId v) {
    return u < v ? arc_key(u, v) : arc_key(v, u);
}

bool sorted_contains(std::span<const NodeId> xs, NodeId v) {
    return std::binary_search(xs.begin(), xs.end(), v);
}

void sorted_insert(std::vector<NodeId>& xs, NodeId v) {
    xs.insert(std::lower_bound(xs.begin(), xs.end(), v), v);
}

void sorted_erase(std::vector<NodeId>& xs, NodeId v) {
    auto it = std::lower_bound(xs.begin(), xs.end(), v);
    if (it == xs.end() || *it != v) throw BadInput("edge to remove is not present");
    xs.erase(it);
}

}  // namespace

const char* to_string(NetworkKind kind) {
    switch (kind) {
        case NetworkKind::Directed: return "directed";
        case NetworkKind::Undirected: return "undirected";
        case NetworkKind::Mixed: return "mixed";
    }
    return "?";
}

NetworkKind network_kind_from_string(std::string_view s) {
    if (s == "directed") return NetworkKind::Directed;
    if (s == "undirected") return NetworkKind::Undirected;
    if (s == "mixed") return NetworkKind::Mixed;
    throw BadInput("unknown network type '" + std::string(s) + "' (expected directed|undirected|mixed)");
}

NodeId Network::node_id(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? NodeId{-1} : it->second;
}

Network Network::build(const std::vector<EdgeRow>& rows, NetworkKind kind, BuildStats* stats) {
    if (rows.empty()) throw BadInput("empty edge list");

    Network net;
    net.kind_ = kind;
    BuildStats local;
    BuildStats& st = stats ? *stats : local;
    st.input_rows = rows.size();

    auto intern = [&net](const std::string& name) -> NodeId {
        if (name.empty()) throw BadInput("empty node name in edge list");
        auto it = net.index_.find(name);
        if (it != net.index_.end()) return it->second;
        const NodeId id = static_cast<NodeId>(net.names_.size());
        net.names_.push_back(name);
        net.index_.emplace(name, id);
        return id;
    };

    const bool directed_store = kind != NetworkKind::Undirected;
    std::unordered_set<std::uint64_t> seen;
    std::unordered_map<std::uint64_t, bool> arc_undirected;  // Mixed bookkeeping
    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(rows.size());

    for (const EdgeRow& row : rows) {
        const NodeId u = intern(row.from);
        const NodeId v = intern(row.to);
        if (u == v) {
            st.self_loop_nodes.push_back(row.from);
            continue;
        }
        const bool expand = kind == NetworkKind::Mixed && row.undirected;
        const int copies = expand ? 2 : 1;
        bool duplicate = true;
        for (int c = 0; c < copies; ++c) {
            const NodeId a = c == 0 ? u : v;
            const NodeId b = c == 0 ? v : u;
            const std::uint64_t key = directed_store ? arc_key(a, b) : edge_key(a, b);
            if (seen.insert(key).second) {
                arcs.emplace_back(a, b);
                duplicate = false;
            }
            if (kind == NetworkKind::Mixed) {
                auto [it, inserted] = arc_undirected.try_emplace(key, row.undirected);
                if (!inserted) it->second = it->second || row.undirected;
            }
        }
        if (duplicate) ++st.duplicate_rows;
        if (expand && !duplicate) ++net.undirected_input_edges_;
    }

    if (arcs.empty()) throw BadInput("no usable edges after rejecting self-loops");

    const std::size_t n = net.names_.size();
    net.out_.resize(n);
    net.in_.resize(n);
    net.adj_.resize(n);
    for (auto [u, v] : arcs) {
        if (directed_store) {
            net.out_[static_cast<std::size_t>(u)].push_back(v);
            net.in_[static_cast<std::size_t>(v)].push_back(u);
        } else {
            net.adj_[static_cast<std::size_t>(u)].push_back(v);
            net.adj_[static_cast<std::size_t>(v)].push_back(u);
        }
    }
    for (auto& xs : net.out_) std::sort(xs.begin(), xs.end());
    for (auto& xs : net.in_) std::sort(xs.begin(), xs.end());
    for (auto& xs : net.adj_) std::sort(xs.begin(), xs.end());
    net.edge_count_ = static_cast<std::int64_t>(arcs.size());

    if (kind == NetworkKind::Mixed) {
        net.out_undirected_flag_.resize(n);
        for (std::size_t u = 0; u < n; ++u) {
            auto& flags = net.out_undirected_flag_[u];
            flags.reserve(net.out_[u].size());
            for (NodeId v : net.out_[u])
                flags.push_back(arc_undirected.at(arc_key(static_cast<NodeId>(u), v)) ? 1 : 0);
        }
    }

    net.check_invariants();
    return net;
}

Network Network::from_ids(NodeId node_count, std::span<const std::pair<NodeId, NodeId>> pairs,
                          NetworkKind kind) {
    if (node_count < 1) throw BadInput("node count must be positive");
    if (kind == NetworkKind::Mixed) throw BadInput("from_ids builds directed or undirected networks");
    Network net;
    net.kind_ = kind;
    const std::size_t n = static_cast<std::size_t>(node_count);
    net.names_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        net.names_.push_back("n" + std::to_string(i));
        net.index_.emplace(net.names_.back(), static_cast<NodeId>(i));
    }
    net.out_.resize(n);
    net.in_.resize(n);
    net.adj_.resize(n);
    for (auto [u, v] : pairs) {
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw BadInput("node id out of range");
        if (u == v) throw BadInput("self-loop in generated edge list");
        if (kind == NetworkKind::Directed) {
            net.out_[static_cast<std::size_t>(u)].push_back(v);
            net.in_[static_cast<std::size_t>(v)].push_back(u);
        } else {
            net.adj_[static_cast<std::size_t>(u)].push_back(v);
            net.adj_[static_cast<std::size_t>(v)].push_back(u);
        }
    }
    for (auto& xs : net.out_) std::sort(xs.begin(), xs.end());
    for (auto& xs : net.in_) std::sort(xs.begin(), xs.end());
    for (auto& xs : net.adj_) std::sort(xs.begin(), xs.end());
    for (NodeId u = 0; u < node_count; ++u) {
        const auto& xs = kind == NetworkKind::Directed ? net.out_[static_cast<std::size_t>(u)]
                                                       : net.adj_[static_cast<std::size_t>(u)];
        if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
            throw BadInput("duplicate edge in generated edge list");
    }
    net.edge_count_ = static_cast<std::int64_t>(pairs.size());
    net.check_invariants();
    return net;
}

void Network::check_invariants() const {
    std::int64_t out_sum = 0, in_sum = 0, deg_sum = 0;
    for (const auto& xs : out_) out_sum += static_cast<std::int64_t>(xs.size());
    for (const auto& xs : in_) in_sum += static_cast<std::int64_t>(xs.size());
    for (const auto& xs : adj_) deg_sum += static_cast<std::int64_t>(xs.size());
    if (kind_ == NetworkKind::Undirected) {
        if (deg_sum != 2 * edge_count_) throw BadInput("degree sum mismatch");
    } else {
        if (out_sum != edge_count_ || in_sum != edge_count_)
            throw BadInput("arc count mismatch");
    }
}

std::int64_t Network::total_indegree() const {
    return kind_ == NetworkKind::Undirected ? 2 * edge_count_ : edge_count_;
}

std::int64_t Network::total_degree() const {
    return kind_ == NetworkKind::Undirected ? 2 * edge_count_ : 2 * edge_count_;
}

bool Network::has_arc(NodeId u, NodeId v) const {
    return sorted_contains(out_[static_cast<std::size_t>(u)], v);
}

bool Network::has_edge(NodeId u, NodeId v) const {
    return sorted_contains(adj_[static_cast<std::size_t>(u)], v);
}

bool Network::arc_from_undirected(NodeId u, NodeId v) const {
    if (kind_ != NetworkKind::Mixed) return false;
    const auto& xs = out_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(xs.begin(), xs.end(), v);
    if (it == xs.end() || *it != v) return false;
    return out_undirected_flag_[static_cast<std::size_t>(u)][static_cast<std::size_t>(it - xs.begin())] != 0;
}

std::vector<std::pair<NodeId, NodeId>> Network::edge_list() const {
    std::vector<std::pair<NodeId, NodeId>> result;
    result.reserve(static_cast<std::size_t>(edge_count_));
    if (kind_ == NetworkKind::Undirected) {
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : adj_[static_cast<std::size_t>(u)])
                if (u < v) result.emplace_back(u, v);
    } else {
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : out_[static_cast<std::size_t>(u)]) result.emplace_back(u, v);
    }
    return result;
}

Network Network::with_changes(std::span<const std::pair<NodeId, NodeId>> add,
                              std::span<const std::pair<NodeId, NodeId>> remove) const {
    Network net(*this);
    const bool directed_store = kind_ != NetworkKind::Undirected;
    for (auto [u, v] : remove) {
        if (directed_store) {
            if (kind_ == NetworkKind::Mixed) {
                auto& xs = net.out_[static_cast<std::size_t>(u)];
                auto it = std::lower_bound(xs.begin(), xs.end(), v);
                if (it == xs.end() || *it != v) throw BadInput("arc to remove is not present");
                net.out_undirected_flag_[static_cast<std::size_t>(u)].erase(
                    net.out_undirected_flag_[static_cast<std::size_t>(u)].begin() + (it - xs.begin()));
                xs.erase(it);
            } else {
                sorted_erase(net.out_[static_cast<std::size_t>(u)], v);
            }
            sorted_erase(net.in_[static_cast<std::size_t>(v)], u);
        } else {
            sorted_erase(net.adj_[static_cast<std::size_t>(u)], v);
            sorted_erase(net.adj_[static_cast<std::size_t>(v)], u);
        }
        --net.edge_count_;
    }
    for (auto [u, v] : add) {
        if (u == v) throw BadInput("self-loop in edge additions");
        if (directed_store) {
            if (net.has_arc(u, v)) throw BadInput("arc to add already present");
            if (kind_ == NetworkKind::Mixed) {
                auto& xs = net.out_[static_cast<std::size_t>(u)];
                auto it = std::lower_bound(xs.begin(), xs.end(), v);
                net.out_undirected_flag_[static_cast<std::size_t>(u)].insert(
                    net.out_undirected_flag_[static_cast<std::size_t>(u)].begin() + (it - xs.begin()), 0);
                xs.insert(it, v);
            } else {
                sorted_insert(net.out_[static_cast<std::size_t>(u)], v);
            }
            sorted_insert(net.in_[static_cast<std::size_t>(v)], u);
        } else {
            if (net.has_edge(u, v)) throw BadInput("edge to add already present");
            sorted_insert(net.adj_[static_cast<std::size_t>(u)], v);
            sorted_insert(net.adj_[static_cast<std::size_t>(v)], u);
        }
        ++net.edge_count_;
    }
    net.check_invariants();
    return net;
}

bool NodeSet::contains(NodeId v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

NodeSet NodeSet::from_ids(std::string name, std::vector<NodeId> ids, const Network& net) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (!ids.empty() && (ids.front() < 0 || ids.back() >= net.node_count()))
        throw BadInput("node id out of range in set '" + name + "'");
    return NodeSet{std::move(name), std::move(ids)};
}

NodeSet NodeSet::from_names(const Network& net, std::string name,
                            std::span<const std::string> member_names,
                            std::vector<std::string>* missing) {
    std::vector<NodeId> ids;
    ids.reserve(member_names.size());
    for (const std::string& m : member_names) {
        const NodeId id = net.node_id(m);
        if (id < 0) {
            if (missing) missing->push_back(m);
        } else {
            ids.push_back(id);
        }
    }
    return from_ids(std::move(name), std::move(ids), net);
}

SetDegrees set_degrees(const Network& net, const NodeSet& s) {
    SetDegrees d;
    if (net.kind() == NetworkKind::Undirected) {
        for (NodeId v : s.members) d.total += net.degree(v);
    } else {
        for (NodeId v : s.members) {
            d.out += net.out_degree(v);
            d.in += net.in_degree(v);
        }
    }
    return d;
}

SetMask::SetMask(const Network& net, const NodeSet& s)
    : bits(static_cast<std::size_t>(net.node_count()), 0) {
    for (NodeId v : s.members) bits[static_cast<std::size_t>(v)] = 1;
}

std::int64_t count_links_masked(const Network& net, const NodeSet& a, const SetMask& mask_a,
                                const SetMask& mask_b) {
    std::int64_t count = 0;
    if (net.kind() == NetworkKind::Undirected) {
        for (NodeId u : a.members) {
            for (NodeId v : net.neighbors(u)) {
                if (!mask_b[v]) continue;
                // Edges qualifying from both sides are visited twice within
                // this loop; keep exactly one of the two visits.
                if (mask_a[v] && mask_b[u] && u > v) continue;
                ++count;
            }
        }
    } else {
        for (NodeId u : a.members)
            for (NodeId v : net.out_neighbors(u))
                if (mask_b[v]) ++count;
    }
    return count;
}

std::int64_t count_links(const Network& net, const NodeSet& a, const NodeSet& b) {
    return count_links_masked(net, a, SetMask(net, a), SetMask(net, b));
}

Network to_directed_expansion(const Network& net) {
    if (net.kind() == NetworkKind::Directed) return net;
    Network out;
    out.kind_ = NetworkKind::Directed;
    out.names_ = net.names_;
    out.index_ = net.index_;
    if (net.kind() == NetworkKind::Undirected) {
        out.out_ = net.adj_;
        out.in_ = net.adj_;
        out.adj_.resize(net.adj_.size());
        out.edge_count_ = 2 * net.edge_count_;
    } else {
        out.out_ = net.out_;
        out.in_ = net.in_;
        out.adj_.resize(net.out_.size());
        out.edge_count_ = net.edge_count_;
    }
    out.check_invariants();
    return out;
}

}  // namespace neat
