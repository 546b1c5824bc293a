#pragma once

// Worked-example networks used across the test suites.
//
// The 8-node directed network reproduces the margins of the directed
// worked example: o_A=5, i_B=4, i_V=15, n_AB=2 for A={1,4}, B={3,5,7},
// and o_B=4, i_C=4, n_BC=3 for C={2,5}.
//
// The 12-node undirected network reproduces the undirected worked example:
// d_A=4, d_B=15, d_C=6, d_V=36, n_AB=4, n_AC=0, n_BC=5 for A={1,5},
// B={2,4,7}, C={6,8}.

#include <string>
#include <vector>

#include "neat/graph.hpp"

namespace neat::testing {

inline std::vector<EdgeRow> directed_example_rows() {
    const std::vector<std::pair<const char*, const char*>> arcs = {
        {"1", "3"}, {"1", "6"}, {"1", "8"}, {"4", "5"}, {"4", "8"},
        {"3", "5"}, {"3", "6"}, {"5", "2"}, {"7", "2"}, {"2", "7"},
        {"2", "1"}, {"6", "4"}, {"6", "8"}, {"8", "1"}, {"8", "6"},
    };
    std::vector<EdgeRow> rows;
    for (auto [u, v] : arcs) rows.push_back({u, v, false});
    return rows;
}

inline std::vector<EdgeRow> undirected_example_rows() {
    const std::vector<std::pair<const char*, const char*>> edges = {
        {"1", "2"}, {"1", "4"},  {"5", "2"},  {"5", "7"}, {"2", "6"}, {"2", "8"},
        {"4", "6"}, {"4", "8"},  {"7", "6"},  {"8", "9"}, {"2", "4"}, {"2", "3"},
        {"4", "9"}, {"7", "3"},  {"7", "10"}, {"11", "12"}, {"3", "11"}, {"9", "12"},
    };
    std::vector<EdgeRow> rows;
    for (auto [u, v] : edges) rows.push_back({u, v, false});
    return rows;
}

inline NodeSet named_set(const Network& net, std::string name,
                         const std::vector<std::string>& members) {
    return NodeSet::from_names(net, std::move(name), members);
}

}  // namespace neat::testing
