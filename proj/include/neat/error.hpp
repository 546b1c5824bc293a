#pragma once

#include <stdexcept>
#include <string>

namespace neat {

// Invalid user input: malformed files, bad parameters, infeasible specs.
struct BadInput : std::runtime_error {
    explicit BadInput(const std::string& what) : std::runtime_error(what) {}
};

// A test whose hypergeometric margins are empty (o_A = 0, i_B = 0, ...).
struct DegenerateTest : std::runtime_error {
    explicit DegenerateTest(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace neat
