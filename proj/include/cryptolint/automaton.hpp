#pragma once

#include "cryptolint/rule.hpp"

namespace cryptolint {

// Compiles an ORDER pattern into a deterministic automaton accepting exactly
// the pattern's language. States are numbered in a stable BFS order, so equal
// patterns compile to structurally equal automata.
TypestateAutomaton compileOrder(const OrderPattern& pattern);

struct AutomatonIssue {
    std::string message;
};

// Structural checks used by rule validation and rules-lint: transition
// determinism (by construction a map, so only shape checks remain), at least
// one accepting state, every accepting state reachable from the initial
// state, and every state able to reach an accepting state.
std::vector<AutomatonIssue> validateAutomaton(const TypestateAutomaton& a);

}  // namespace cryptolint
