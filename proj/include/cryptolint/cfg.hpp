#pragma once

#include <string>
#include <vector>

#include "cryptolint/ir.hpp"

namespace cryptolint {

// One maximal execution path through a method: the statements in replay
// order. Loop headers are re-evaluated on re-entry, so their statements can
// appear more than once. tookLoop records whether any back edge was taken.
struct ExecutionPath {
    std::vector<const Statement*> statements;
    bool tookLoop = false;
};

struct PathSet {
    std::vector<ExecutionPath> paths;
    bool truncated = false;  // enumeration stopped at the budget
};

inline constexpr int kDefaultPathBudget = 64;

// Enumerates maximal paths from the entry block. Every block may be entered
// at most twice per path, which unrolls each loop zero or one time (nested
// loops included). Deterministic: successors are explored in order.
PathSet enumeratePaths(const MethodIR& method, int budget = kDefaultPathBudget);

// Structural invariants the analysis relies on. Returns human-readable
// violations; empty means the method is well-formed.
std::vector<std::string> validateCfg(const MethodIR& method);

}  // namespace cryptolint
