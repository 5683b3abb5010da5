#pragma once

#include <string>
#include <vector>

#include "cryptolint/analysis.hpp"
#include "cryptolint/efp.hpp"
#include "cryptolint/ir.hpp"
#include "cryptolint/report.hpp"
#include "cryptolint/rule.hpp"
#include "cryptolint/threatmodel.hpp"

namespace cryptolint {

struct ScanOptions {
    EfpConfig efp;
    int inlineDepth = 1;
    // When false, files under test trees (EfpConfig::testPathSegments) are
    // skipped entirely instead of scanned-and-flagged.
    bool includeTests = true;
    // Worker threads for the file-level pipeline; <= 0 picks the available
    // parallelism. The merge is deterministic for any worker count.
    int workers = 0;
    int pathBudget = kDefaultPathBudget;
};

struct ScanOutcome {
    std::vector<ReportedFinding> findings;
    std::vector<Diagnostic> diagnostics;
};

// Expands files and directories into the sorted, deduplicated list of
// scannable inputs (*.java and *.ir.json; directories are walked
// recursively). Missing paths produce a diagnostic.
std::vector<std::string> collectInputFiles(const std::vector<std::string>& paths,
                                           std::vector<Diagnostic>& diagnostics);

// True when a path component matches one of the configured test segments.
bool isTestPath(const std::string& path, const EfpConfig& efp);

// Runs analysis, classification, and flagging over one parsed unit.
ScanOutcome scanUnit(const CompilationUnitIR& unit, const RuleSet& rules, const ThreatModel& tm,
                     const ScanOptions& options);

// The full pipeline over a list of input files. Unreadable or malformed
// inputs become diagnostics; the scan continues. Results are merged in input
// order regardless of worker count.
ScanOutcome scanFiles(const std::vector<std::string>& files, const RuleSet& rules,
                      const ThreatModel& tm, const ScanOptions& options);

}  // namespace cryptolint
