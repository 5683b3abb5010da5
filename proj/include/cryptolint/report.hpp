#pragma once

#include <map>
#include <string>
#include <vector>

#include "cryptolint/analysis.hpp"
#include "cryptolint/efp.hpp"
#include "cryptolint/threatmodel.hpp"

namespace cryptolint {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// A finding with everything downstream layers attached: the catalog verdict
// (classified=false means the finding appears with severity "none"), the
// catalog row's display name and novelty, and the false-positive flags.
struct ReportedFinding {
    Finding finding;
    Classification classification;
    std::string displayName;  // catalog row display name, "" if unclassified
    bool novel = false;
    std::vector<EfpFlag> efpFlags;

    friend bool operator==(const ReportedFinding&, const ReportedFinding&) = default;
};

struct RuleClassStats {
    int misuses = 0;
    int affectedUnits = 0;  // distinct source files with >= 1 finding of the class

    friend bool operator==(const RuleClassStats&, const RuleClassStats&) = default;
};

// All keys are fully materialized: every error type, every attack type ×
// severity cell, and every flag kind appears even when zero, so consumers
// can index without existence checks.
struct Aggregates {
    std::map<std::string, RuleClassStats> perRuleClass;
    std::map<std::string, int> perErrorType;
    std::map<std::string, std::map<std::string, int>> perAttackTypeSeverity;
    std::map<std::string, int> efpFlagCounts;

    friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct Report {
    std::string toolVersion;
    std::string rulePackVersion;
    std::string threatModelVersion;
    // Sorted by (severity desc, file, line, column, entryId); unclassified
    // findings sort after every severity.
    std::vector<ReportedFinding> findings;
    Aggregates aggregates;
    std::vector<Diagnostic> diagnostics;

    friend bool operator==(const Report&, const Report&) = default;
};

// "high" | "medium" | "low" — the report-side spelling of a severity.
const char* severityKey(Severity s);

Aggregates aggregate(const std::vector<ReportedFinding>& findings);

// Sorts the findings, fills in display names and novelty from the catalog,
// and computes the aggregates.
Report buildReport(const std::string& rulePackVersion, const ThreatModel& tm,
                   std::vector<ReportedFinding> findings, std::vector<Diagnostic> diagnostics);

// Byte-deterministic: object keys sorted, findings already ordered, two-space
// indentation, trailing newline.
std::string renderJson(const Report& report);

// Inverse of renderJson over every serialized field. Throws
// std::runtime_error on malformed input.
Report parseReportJson(const std::string& text);

// Human-readable summary; every line is at most 120 columns.
std::string renderText(const Report& report);

}  // namespace cryptolint
