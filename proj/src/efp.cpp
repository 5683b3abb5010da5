#include "cryptolint/efp.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <set>

namespace cryptolint {

const char* efpKindName(EfpKind k) {
    switch (k) {
        case EfpKind::TestContext: return "TestContext";
        case EfpKind::NonSecurityContext: return "NonSecurityContext";
        case EfpKind::ApiForcedString: return "ApiForcedString";
        case EfpKind::LoopGuarded: return "LoopGuarded";
        case EfpKind::IntentionalFixture: return "IntentionalFixture";
    }
    return "TestContext";
}

const char* efpConfidenceName(EfpConfidence c) {
    return c == EfpConfidence::Strong ? "strong" : "weak";
}

namespace {

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> splitSegments(const std::string& s, const char* seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::strchr(seps, c)) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool endsWith(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// First test-pattern match across path segments, package segments, and the
// class-name suffixes. Returns the matched fragment, "" if none.
std::string testContextEvidence(const AnalysisContext& ctx, const EfpConfig& cfg) {
    auto segmentHit = [&](const std::vector<std::string>& segments) -> std::string {
        for (const auto& seg : segments)
            for (const auto& pat : cfg.testPathSegments)
                if (seg == pat) return seg;
        return "";
    };
    if (auto hit = segmentHit(splitSegments(ctx.filePath, "/\\")); !hit.empty()) return hit;
    if (auto hit = segmentHit(splitSegments(ctx.packageName, ".")); !hit.empty()) return hit;
    for (const auto& suffix : cfg.testClassSuffixes)
        if (!suffix.empty() && endsWith(ctx.enclosingClassName, suffix))
            return ctx.enclosingClassName;
    return "";
}

// First configured token (in config order) that occurs as a substring of any
// bag identifier. The bag is already lowercased; tokens are lowered here so
// config casing does not matter.
std::string tokenEvidence(const std::vector<std::string>& bag, const std::vector<std::string>& tokens) {
    for (const auto& rawToken : tokens) {
        std::string token = lowered(rawToken);
        if (token.empty()) continue;
        for (const auto& ident : bag)
            if (ident.find(token) != std::string::npos) return token;
    }
    return "";
}

}  // namespace

AnalysisContext buildContext(const CompilationUnitIR& unit, const Finding& f,
                             int sameErrorTypeInUnit) {
    AnalysisContext ctx;
    ctx.filePath = unit.sourcePath;
    ctx.packageName = unit.packageName;
    ctx.enclosingClassName = unit.className;
    ctx.enclosingMethodName = f.methodName;
    ctx.pathFlags = f.pathFlags;
    ctx.sameErrorTypeInUnit = sameErrorTypeInUnit;

    std::set<std::string> bag;
    if (!unit.className.empty()) bag.insert(lowered(unit.className));
    for (const auto& m : unit.methods)
        if (m.name == f.methodName)
            bag.insert(m.identifiers.begin(), m.identifiers.end());
    ctx.identifierBag.assign(bag.begin(), bag.end());
    return ctx;
}

std::vector<EfpFlag> flagEffectiveFalsePositives(const Finding& f, const Classification&,
                                                 const AnalysisContext& ctx,
                                                 const EfpConfig& config) {
    std::vector<EfpFlag> flags;

    if (auto evidence = testContextEvidence(ctx, config); !evidence.empty())
        flags.push_back({EfpKind::TestContext, EfpConfidence::Weak, evidence});

    bool hashRule = std::find(config.hashRuleClasses.begin(), config.hashRuleClasses.end(),
                              f.ruleClass) != config.hashRuleClasses.end();
    if (hashRule) {
        if (auto token = tokenEvidence(ctx.identifierBag, config.nonSecurityTokens); !token.empty())
            flags.push_back({EfpKind::NonSecurityContext, EfpConfidence::Weak, token});
    }

    if (f.errorType == ErrorType::NeverTypeOfError && f.apiForcedString) {
        std::string evidence =
            ctx.enclosingMethodName.empty() ? "public API parameter" : ctx.enclosingMethodName;
        flags.push_back({EfpKind::ApiForcedString, EfpConfidence::Strong, std::move(evidence)});
    }

    if (ctx.pathFlags.loopGuarded)
        flags.push_back({EfpKind::LoopGuarded, EfpConfidence::Strong, "zero-iteration loop path"});

    if (ctx.sameErrorTypeInUnit >= config.fixtureThreshold) {
        std::vector<std::string> nameBag = {lowered(ctx.enclosingMethodName)};
        if (auto token = tokenEvidence(nameBag, config.fixtureMethodTokens); !token.empty())
            flags.push_back({EfpKind::IntentionalFixture, EfpConfidence::Weak,
                             ctx.enclosingMethodName});
    }

    return flags;
}

std::vector<std::vector<EfpFlag>> flagUnitFindings(const CompilationUnitIR& unit,
                                                   const std::vector<Finding>& findings,
                                                   const std::vector<Classification>& classifications,
                                                   const EfpConfig& config) {
    int perType[kErrorTypeCount] = {};
    for (const auto& f : findings) ++perType[static_cast<int>(f.errorType)];

    std::vector<std::vector<EfpFlag>> out;
    out.reserve(findings.size());
    for (size_t i = 0; i < findings.size(); ++i) {
        AnalysisContext ctx =
            buildContext(unit, findings[i], perType[static_cast<int>(findings[i].errorType)]);
        const Classification empty{};
        const Classification& c = i < classifications.size() ? classifications[i] : empty;
        out.push_back(flagEffectiveFalsePositives(findings[i], c, ctx, config));
    }
    return out;
}

}  // namespace cryptolint
