#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cryptolint/cfg.hpp"
#include "cryptolint/ir.hpp"
#include "cryptolint/rule.hpp"

namespace cryptolint {

enum class ErrorType {
    ConstraintError,
    IncompleteOperationError,
    RequiredPredicateError,
    NeverTypeOfError,
    ForbiddenMethodError,
    TypestateError,
};

const char* errorTypeName(ErrorType t);
std::optional<ErrorType> errorTypeFromName(const std::string& name);
inline constexpr int kErrorTypeCount = 6;

struct PathFlags {
    // The violation occurs on every enumerated path that reaches the
    // anchoring site (for protocol findings: every path that allocates the
    // object).
    bool existsOnAllPaths = false;
    // Some path that executes at least one loop iteration is free of this
    // violation — the finding only exists when a loop body runs zero times.
    bool loopGuarded = false;

    friend bool operator==(const PathFlags&, const PathFlags&) = default;
};

// One rule violation, carrying everything downstream consumers need: the
// threat catalog matches on error type, rule class, offending values and
// event details; the false-positive heuristics use the path flags and
// provenance bits; the report renders the rest.
struct Finding {
    ErrorType errorType = ErrorType::ConstraintError;
    std::string ruleClass;   // fully qualified rule class
    std::string methodName;  // enclosing method
    SourceLocation location;
    std::string objectVar;  // variable holding the tracked object ("" if none)
    std::string eventLabel; // event at the violation site ("" if none)
    std::string detail;     // human-readable explanation

    // IncompleteOperationError: labels that would have continued the protocol.
    std::vector<std::string> missingEvents;
    // TypestateError: the event that had no transition.
    std::string unexpectedEvent;
    // RequiredPredicateError: the predicate that was absent or tainted.
    std::string predicateName;
    // Constraint/NeverType/RequiredPredicate: declared kind of the checked
    // parameter.
    ParamKind paramKind = ParamKind::Wildcard;
    // ConstraintError: which constraint form fired (constraintKindName value)
    // and the resolved value.
    std::string constraintKind;
    std::string valueText;                // offending resolved value, "" if n/a
    std::string transformationComponent;  // "algorithm" | "mode" | "padding" when applicable
    // The offending component was not spelled out but implied by JCA defaults
    // (e.g. "AES" implies ECB mode).
    bool defaulted = false;
    long long intValue = 0;               // offending integer for intAtLeast

    PathFlags pathFlags;
    // NeverTypeOfError: the string value is forced in by a public API
    // parameter of the scanned method.
    bool apiForcedString = false;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct AnalysisResult {
    std::vector<Finding> findings;
    std::vector<Diagnostic> diagnostics;
};

// Runs all checks over every method of the unit. Findings are ordered by
// (file, line, column, error type, detail). Deterministic for a given unit
// and rule set.
AnalysisResult analyzeUnit(const CompilationUnitIR& unit, const RuleSet& rules,
                           int pathBudget = kDefaultPathBudget);

}  // namespace cryptolint
