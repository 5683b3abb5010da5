#pragma once

#include <string>
#include <vector>

#include "cryptolint/analysis.hpp"
#include "cryptolint/ir.hpp"
#include "cryptolint/threatmodel.hpp"

namespace cryptolint {

// Patterns under which a true rule violation is likely an effective false
// positive: a finding the maintainer will deliberately not act on. Flags are
// annotations only — they never remove or downgrade a finding.
enum class EfpKind {
    TestContext,         // file lives under a test tree or test-named class
    NonSecurityContext,  // hash used for checksums/caching, not security
    ApiForcedString,     // String secret forced by a public API signature
    LoopGuarded,         // violation only on the zero-iteration loop path
    IntentionalFixture,  // file deliberately collects insecure usages
};
inline constexpr int kEfpKindCount = 5;

const char* efpKindName(EfpKind k);

enum class EfpConfidence { Strong, Weak };

const char* efpConfidenceName(EfpConfidence c);

struct EfpFlag {
    EfpKind kind = EfpKind::TestContext;
    EfpConfidence confidence = EfpConfidence::Weak;
    std::string evidence;  // matched token / path fragment, never empty

    friend bool operator==(const EfpFlag&, const EfpFlag&) = default;
};

// All pattern lists are user-configurable; the defaults are observational,
// not exhaustive.
struct EfpConfig {
    // TestContext: exact path/package segment names and class-name suffixes.
    std::vector<std::string> testPathSegments = {"test", "tests"};
    std::vector<std::string> testClassSuffixes = {"Test"};

    // NonSecurityContext: substring tokens looked up in the identifier bag,
    // applied only to findings of the hash rule classes.
    std::vector<std::string> nonSecurityTokens = {"checksum", "etag",  "cache",
                                                  "fingerprint", "dedup", "digestfile"};
    std::vector<std::string> hashRuleClasses = {"java.security.MessageDigest"};

    // IntentionalFixture: this many findings of one error type in a unit,
    // inside a method whose name contains one of the tokens.
    std::vector<std::string> fixtureMethodTokens = {"test", "should", "fixture"};
    int fixtureThreshold = 3;
};

// Everything the heuristics read about a finding's surroundings.
struct AnalysisContext {
    std::string filePath;
    std::string packageName;
    std::string enclosingClassName;
    std::string enclosingMethodName;
    // Lowercased, deduplicated identifiers lexically near the finding.
    std::vector<std::string> identifierBag;
    PathFlags pathFlags;
    // Findings in the same unit that share this finding's error type,
    // including this one. Drives the fixture heuristic.
    int sameErrorTypeInUnit = 1;
};

// Assembles the context for a finding from its compilation unit. The
// identifier bag is the enclosing method's bag plus the class name.
AnalysisContext buildContext(const CompilationUnitIR& unit, const Finding& f,
                             int sameErrorTypeInUnit = 1);

// Computes the flag set for one finding. Flags come out in EfpKind order, at
// most one per kind, and every flag carries non-empty evidence. Never
// suppresses: callers attach the result to the finding they already have.
std::vector<EfpFlag> flagEffectiveFalsePositives(const Finding& f, const Classification& c,
                                                 const AnalysisContext& ctx,
                                                 const EfpConfig& config = {});

// Flags every finding of a unit; result is parallel to `findings`.
std::vector<std::vector<EfpFlag>> flagUnitFindings(const CompilationUnitIR& unit,
                                                   const std::vector<Finding>& findings,
                                                   const std::vector<Classification>& classifications,
                                                   const EfpConfig& config = {});

}  // namespace cryptolint
