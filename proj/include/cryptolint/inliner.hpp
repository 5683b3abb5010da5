#pragma once

#include "cryptolint/ir.hpp"

namespace cryptolint {

// Expands calls to same-unit helper methods (receiver `this`) whose body is a
// single basic block, substituting arguments for parameters and binding the
// returned value to the call-site target. Runs up to `depth` rounds, so call
// chains of that length collapse into the caller. Self-recursive calls are
// left alone and diagnosed; helpers with branching bodies, ambiguous
// overloads, or parameter reassignment are left alone silently.
void inlineHelpers(CompilationUnitIR& unit, int depth = 1);

}  // namespace cryptolint
