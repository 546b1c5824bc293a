#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "neat/error.hpp"

namespace neat {

enum class NetworkKind { Directed, Undirected, Mixed };

const char* to_string(NetworkKind kind);
NetworkKind network_kind_from_string(std::string_view s);

// One input edge row. `undirected` is honored only for Mixed networks, where
// such a row stands for the pair of arcs u->v and v->u.
struct EdgeRow {
    std::string from;
    std::string to;
    bool undirected = false;
};

// Ingestion diagnostics: rows dropped or collapsed while building.
struct BuildStats {
    std::size_t input_rows = 0;
    std::size_t duplicate_rows = 0;             // collapsed into an existing edge/arc
    std::vector<std::string> self_loop_nodes;   // one entry per rejected self-loop row
};

using NodeId = std::int32_t;

// Immutable simple graph with dense node ids interned in first-appearance
// order. Directed and Mixed networks store arcs (out- and in-adjacency);
// Undirected networks store symmetric neighbor lists. All neighbor lists are
// sorted. Queries are const and safe for concurrent use.
class Network {
public:
    // Throws BadInput on an empty usable edge list or empty node names.
    // Self-loop rows are skipped and reported through `stats`; duplicate
    // edges are collapsed and counted.
    static Network build(const std::vector<EdgeRow>& rows, NetworkKind kind,
                         BuildStats* stats = nullptr);

    // Factory for generated graphs: nodes 0..node_count-1 exist regardless
    // of degree (names "n0", "n1", ...). Pairs must already be simple:
    // self-loops or duplicates throw.
    static Network from_ids(NodeId node_count, std::span<const std::pair<NodeId, NodeId>> pairs,
                            NetworkKind kind);

    NetworkKind kind() const { return kind_; }
    NodeId node_count() const { return static_cast<NodeId>(names_.size()); }
    const std::string& node_name(NodeId v) const { return names_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& node_names() const { return names_; }

    // -1 when the name is unknown.
    NodeId node_id(std::string_view name) const;

    // Directed/Mixed: number of arcs (i_V, equal to the total in-degree).
    // Undirected: number of edges.
    std::int64_t edge_count() const { return edge_count_; }

    // i_V for Directed/Mixed networks.
    std::int64_t total_indegree() const;
    // d_V for Undirected networks (= 2 * edge_count).
    std::int64_t total_degree() const;

    std::int64_t out_degree(NodeId v) const { return static_cast<std::int64_t>(out_[static_cast<std::size_t>(v)].size()); }
    std::int64_t in_degree(NodeId v) const { return static_cast<std::int64_t>(in_[static_cast<std::size_t>(v)].size()); }
    std::int64_t degree(NodeId v) const { return static_cast<std::int64_t>(adj_[static_cast<std::size_t>(v)].size()); }

    std::span<const NodeId> out_neighbors(NodeId v) const { return out_[static_cast<std::size_t>(v)]; }
    std::span<const NodeId> in_neighbors(NodeId v) const { return in_[static_cast<std::size_t>(v)]; }
    std::span<const NodeId> neighbors(NodeId v) const { return adj_[static_cast<std::size_t>(v)]; }

    bool has_arc(NodeId u, NodeId v) const;   // Directed/Mixed
    bool has_edge(NodeId u, NodeId v) const;  // Undirected

    // Mixed only: true when the stored arc u->v came from an undirected row.
    bool arc_from_undirected(NodeId u, NodeId v) const;
    std::int64_t undirected_input_edges() const { return undirected_input_edges_; }

    // Arcs as (u,v) for Directed/Mixed, canonical u<v pairs for Undirected.
    // Deterministic order (by source id, then neighbor order).
    std::vector<std::pair<NodeId, NodeId>> edge_list() const;

    // Copy with arcs/edges added and removed; used by the simulation
    // generator. Pairs are (u,v) arcs for Directed/Mixed and unordered
    // {u,v} for Undirected. Throws BadInput on a duplicate add, a missing
    // remove, or a self-loop.
    Network with_changes(std::span<const std::pair<NodeId, NodeId>> add,
                         std::span<const std::pair<NodeId, NodeId>> remove) const;

    friend Network to_directed_expansion(const Network& net);

private:
    Network() = default;
    void check_invariants() const;

    NetworkKind kind_ = NetworkKind::Directed;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::vector<std::vector<NodeId>> adj_;
    // Mixed only, aligned with out_: origin flag per stored arc.
    std::vector<std::vector<std::uint8_t>> out_undirected_flag_;
    std::int64_t edge_count_ = 0;
    std::int64_t undirected_input_edges_ = 0;
};

// Named set of node ids; members sorted and deduplicated.
struct NodeSet {
    std::string name;
    std::vector<NodeId> members;

    std::size_t size() const { return members.size(); }
    bool contains(NodeId v) const;

    static NodeSet from_ids(std::string name, std::vector<NodeId> ids, const Network& net);
    // Unknown names are dropped; when `missing` is non-null they are listed there.
    static NodeSet from_names(const Network& net, std::string name,
                              std::span<const std::string> member_names,
                              std::vector<std::string>* missing = nullptr);
};

struct SetDegrees {
    std::int64_t out = 0;    // o_S (Directed/Mixed), else 0
    std::int64_t in = 0;     // i_S (Directed/Mixed), else 0
    std::int64_t total = 0;  // d_S (Undirected), else 0
};

SetDegrees set_degrees(const Network& net, const NodeSet& s);

// Directed/Mixed: arcs u->v with u in A, v in B (each arc once).
// Undirected: edges {u,v} with one endpoint in A and the other in B, each
// qualifying edge counted once even when both endpoints lie in both sets.
std::int64_t count_links(const Network& net, const NodeSet& a, const NodeSet& b);

// Byte-per-node membership mask for the repeated-count kernels.
struct SetMask {
    std::vector<std::uint8_t> bits;
    SetMask() = default;
    SetMask(const Network& net, const NodeSet& s);
    bool operator[](NodeId v) const { return bits[static_cast<std::size_t>(v)] != 0; }
};

std::int64_t count_links_masked(const Network& net, const NodeSet& a, const SetMask& mask_a,
                                const SetMask& mask_b);

// Undirected edge -> pair of arcs; Mixed -> Directed with arcs as stored;
// Directed input is returned unchanged (documented no-op).
Network to_directed_expansion(const Network& net);

}  // namespace neat
