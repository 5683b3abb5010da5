#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cryptolint/analysis.hpp"

namespace cryptolint {

enum class Severity { High, Medium, Low };

// High > Medium > Low; used for ordering findings and the fail gate.
int severityRank(Severity s);
const char* severityName(Severity s);
std::optional<Severity> severityFromName(const std::string& name);

enum class AttackType {
    PredictabilityThroughInitialization,
    PredictabilityThroughUsage,
    MitMOnTLS,
    CPA,
    CCA,
    Bruteforce,
    CredentialDumping,
    DoS,
};

inline constexpr int kAttackTypeCount = 8;

// Stable identifier used in data files and reports.
const char* attackTypeName(AttackType t);
// Human-readable form used in rendered text.
const char* attackTypeDisplay(AttackType t);
std::optional<AttackType> attackTypeFromName(const std::string& name);

// One way a finding can exhibit a vulnerability. All populated fields must
// hold at once; list fields are satisfied by any element. Empty fields are
// wildcards. String comparisons on values are case-insensitive; everything
// else is exact.
struct MatcherClause {
    ErrorType errorType = ErrorType::ConstraintError;
    std::vector<std::string> ruleClassAnyOf;
    std::vector<std::string> ruleClassNoneOf;
    std::vector<std::string> valueAnyOf;          // Finding.valueText
    std::string componentEquals;                  // Finding.transformationComponent
    std::vector<std::string> missingAnyOf;        // intersects Finding.missingEvents
    std::vector<std::string> unexpectedAnyOf;     // Finding.unexpectedEvent
    std::vector<std::string> predicateAnyOf;      // Finding.predicateName
    std::vector<std::string> paramKindAnyOf;      // paramKindName(Finding.paramKind)
    std::vector<std::string> constraintKindAnyOf; // Finding.constraintKind
    std::string detailContains;                   // substring of Finding.detail
};

struct VulnerabilityEntry {
    std::string id;           // stable slug
    std::string displayName;  // catalog row name
    AttackType attackType = AttackType::Bruteforce;
    Severity severity = Severity::Low;
    bool novel = false;
    std::vector<ErrorType> applicableErrorTypes;
    std::vector<MatcherClause> matchers;

    bool applicableTo(ErrorType t) const;
};

struct ThreatModel {
    int schemaVersion = 1;
    std::string catalogVersion;
    std::vector<VulnerabilityEntry> entries;

    const VulnerabilityEntry* entryById(const std::string& id) const;
};

struct ThreatModelError : std::runtime_error {
    ThreatModelError(const std::string& msg, std::string path)
        : std::runtime_error(path + ": " + msg), fieldPath(std::move(path)) {}

    std::string fieldPath;
};

// Parses and validates a catalog document. Rejects unknown enum names,
// duplicate ids, matcher clauses whose error type is not applicable to the
// entry, and entries without matchers.
ThreatModel loadThreatModel(const std::string& jsonText);

// The embedded copy of data/threatmodel.json.
const char* builtinThreatModelJson();
ThreatModel builtinThreatModel();

struct Classification {
    bool classified = false;
    std::string entryId;
    AttackType attackType = AttackType::Bruteforce;
    Severity severity = Severity::Low;
    // Every entry whose matcher fired, in catalog order; contains entryId.
    std::vector<std::string> matchedAlternatives;

    friend bool operator==(const Classification&, const Classification&) = default;
};

// Picks the highest-severity matching entry; ties go to the earlier catalog
// row. Returns classified=false when nothing matches.
Classification classify(const Finding& f, const ThreatModel& tm);

}  // namespace cryptolint
