#include "cryptolint/threatmodel.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "cryptolint/rule.hpp"

namespace cryptolint {

int severityRank(Severity s) {
    switch (s) {
        case Severity::High: return 3;
        case Severity::Medium: return 2;
        case Severity::Low: return 1;
    }
    return 0;
}

const char* severityName(Severity s) {
    switch (s) {
        case Severity::High: return "High";
        case Severity::Medium: return "Medium";
        case Severity::Low: return "Low";
    }
    return "Low";
}

std::optional<Severity> severityFromName(const std::string& name) {
    if (name == "High") return Severity::High;
    if (name == "Medium") return Severity::Medium;
    if (name == "Low") return Severity::Low;
    return std::nullopt;
}

namespace {

struct AttackTypeNames {
    AttackType type;
    const char* id;
    const char* display;
};

constexpr AttackTypeNames kAttackTypes[] = {
    {AttackType::PredictabilityThroughInitialization, "PredictabilityThroughInitialization",
     "Predictability Through Initialization"},
    {AttackType::PredictabilityThroughUsage, "PredictabilityThroughUsage",
     "Predictability Through Usage"},
    {AttackType::MitMOnTLS, "MitMOnTLS", "MitM Attacks on SSL/TLS"},
    {AttackType::CPA, "CPA", "Chosen-Plaintext Attack (CPA)"},
    {AttackType::CCA, "CCA", "Chosen-Ciphertext Attack (CCA)"},
    {AttackType::Bruteforce, "Bruteforce", "Bruteforce Attacks"},
    {AttackType::CredentialDumping, "CredentialDumping", "Credential Dumping"},
    {AttackType::DoS, "DoS", "DoS Attacks"},
};

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool anyEqualsCI(const std::string& value, const std::vector<std::string>& set) {
    std::string v = lowered(value);
    return std::any_of(set.begin(), set.end(),
                       [&](const std::string& e) { return lowered(e) == v; });
}

}  // namespace

const char* attackTypeName(AttackType t) {
    for (const auto& n : kAttackTypes)
        if (n.type == t) return n.id;
    return "Bruteforce";
}

const char* attackTypeDisplay(AttackType t) {
    for (const auto& n : kAttackTypes)
        if (n.type == t) return n.display;
    return "Bruteforce Attacks";
}

std::optional<AttackType> attackTypeFromName(const std::string& name) {
    for (const auto& n : kAttackTypes)
        if (name == n.id) return n.type;
    return std::nullopt;
}

bool VulnerabilityEntry::applicableTo(ErrorType t) const {
    return std::find(applicableErrorTypes.begin(), applicableErrorTypes.end(), t) !=
           applicableErrorTypes.end();
}

const VulnerabilityEntry* ThreatModel::entryById(const std::string& id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg, const std::string& path) {
    throw ThreatModelError(msg, path);
}

const json& field(const json& obj, const char* name, const std::string& path) {
    auto it = obj.find(name);
    if (it == obj.end()) bad("missing field", path + "." + name);
    return *it;
}

std::string asString(const json& v, const std::string& path) {
    if (!v.is_string()) bad("expected a string", path);
    return v.get<std::string>();
}

std::vector<std::string> asStringArray(const json& v, const std::string& path) {
    if (!v.is_array()) bad("expected an array", path);
    std::vector<std::string> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(asString(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

MatcherClause loadClause(const json& v, const VulnerabilityEntry& entry,
                         const std::string& path) {
    if (!v.is_object()) bad("expected an object", path);
    MatcherClause c;
    std::string typeName = asString(field(v, "errorType", path), path + ".errorType");
    auto type = errorTypeFromName(typeName);
    if (!type) bad("unknown error type '" + typeName + "'", path + ".errorType");
    c.errorType = *type;
    if (!entry.applicableTo(c.errorType))
        bad("matcher error type '" + typeName + "' not in applicableErrorTypes", path);

    auto strings = [&](const char* name, std::vector<std::string>& out) {
        auto it = v.find(name);
        if (it != v.end()) out = asStringArray(*it, path + "." + name);
    };
    strings("ruleClassAnyOf", c.ruleClassAnyOf);
    strings("ruleClassNoneOf", c.ruleClassNoneOf);
    strings("valueAnyOf", c.valueAnyOf);
    strings("missingAnyOf", c.missingAnyOf);
    strings("unexpectedAnyOf", c.unexpectedAnyOf);
    strings("predicateAnyOf", c.predicateAnyOf);
    strings("paramKindAnyOf", c.paramKindAnyOf);
    strings("constraintKindAnyOf", c.constraintKindAnyOf);
    if (auto it = v.find("componentEquals"); it != v.end())
        c.componentEquals = asString(*it, path + ".componentEquals");
    if (auto it = v.find("detailContains"); it != v.end())
        c.detailContains = asString(*it, path + ".detailContains");

    for (const auto& k : c.paramKindAnyOf)
        if (!paramKindFromName(k)) bad("unknown parameter kind '" + k + "'", path + ".paramKindAnyOf");

    static const std::set<std::string> kKnown = {
        "errorType",      "ruleClassAnyOf", "ruleClassNoneOf",     "valueAnyOf",
        "componentEquals", "missingAnyOf",  "unexpectedAnyOf",     "predicateAnyOf",
        "paramKindAnyOf", "constraintKindAnyOf", "detailContains"};
    for (const auto& [key, value] : v.items())
        if (!kKnown.count(key)) bad("unknown matcher field '" + key + "'", path);
    return c;
}

VulnerabilityEntry loadEntry(const json& v, const std::string& path) {
    if (!v.is_object()) bad("expected an object", path);
    VulnerabilityEntry e;
    e.id = asString(field(v, "id", path), path + ".id");
    e.displayName = asString(field(v, "displayName", path), path + ".displayName");

    std::string attack = asString(field(v, "attackType", path), path + ".attackType");
    auto at = attackTypeFromName(attack);
    if (!at) bad("unknown attack type '" + attack + "'", path + ".attackType");
    e.attackType = *at;

    std::string sev = asString(field(v, "severity", path), path + ".severity");
    auto s = severityFromName(sev);
    if (!s) bad("unknown severity '" + sev + "'", path + ".severity");
    e.severity = *s;

    const json& novel = field(v, "novel", path);
    if (!novel.is_boolean()) bad("expected a boolean", path + ".novel");
    e.novel = novel.get<bool>();

    for (const auto& name :
         asStringArray(field(v, "applicableErrorTypes", path), path + ".applicableErrorTypes")) {
        auto t = errorTypeFromName(name);
        if (!t) bad("unknown error type '" + name + "'", path + ".applicableErrorTypes");
        e.applicableErrorTypes.push_back(*t);
    }
    if (e.applicableErrorTypes.empty())
        bad("entry applies to no error types", path + ".applicableErrorTypes");

    const json& matchers = field(v, "matchers", path);
    if (!matchers.is_array()) bad("expected an array", path + ".matchers");
    for (size_t i = 0; i < matchers.size(); ++i)
        e.matchers.push_back(
            loadClause(matchers[i], e, path + ".matchers[" + std::to_string(i) + "]"));
    if (e.matchers.empty()) bad("entry has no matchers", path + ".matchers");
    return e;
}

bool clauseMatches(const MatcherClause& c, const Finding& f) {
    if (c.errorType != f.errorType) return false;
    if (!c.ruleClassAnyOf.empty() &&
        std::find(c.ruleClassAnyOf.begin(), c.ruleClassAnyOf.end(), f.ruleClass) ==
            c.ruleClassAnyOf.end())
        return false;
    if (!c.ruleClassNoneOf.empty() &&
        std::find(c.ruleClassNoneOf.begin(), c.ruleClassNoneOf.end(), f.ruleClass) !=
            c.ruleClassNoneOf.end())
        return false;
    if (!c.valueAnyOf.empty() && !anyEqualsCI(f.valueText, c.valueAnyOf)) return false;
    if (!c.componentEquals.empty() && f.transformationComponent != c.componentEquals) return false;
    if (!c.missingAnyOf.empty()) {
        bool hit = std::any_of(c.missingAnyOf.begin(), c.missingAnyOf.end(),
                               [&](const std::string& m) {
                                   return std::find(f.missingEvents.begin(),
                                                    f.missingEvents.end(),
                                                    m) != f.missingEvents.end();
                               });
        if (!hit) return false;
    }
    if (!c.unexpectedAnyOf.empty() &&
        std::find(c.unexpectedAnyOf.begin(), c.unexpectedAnyOf.end(), f.unexpectedEvent) ==
            c.unexpectedAnyOf.end())
        return false;
    if (!c.predicateAnyOf.empty() &&
        std::find(c.predicateAnyOf.begin(), c.predicateAnyOf.end(), f.predicateName) ==
            c.predicateAnyOf.end())
        return false;
    if (!c.paramKindAnyOf.empty() && !anyEqualsCI(paramKindName(f.paramKind), c.paramKindAnyOf))
        return false;
    if (!c.constraintKindAnyOf.empty() &&
        std::find(c.constraintKindAnyOf.begin(), c.constraintKindAnyOf.end(),
                  f.constraintKind) == c.constraintKindAnyOf.end())
        return false;
    if (!c.detailContains.empty() && f.detail.find(c.detailContains) == std::string::npos)
        return false;
    return true;
}

}  // namespace

ThreatModel loadThreatModel(const std::string& jsonText) {
    json doc = json::parse(jsonText, nullptr, false);
    if (doc.is_discarded()) bad("not valid JSON", "$");
    if (!doc.is_object()) bad("expected an object", "$");

    ThreatModel tm;
    const json& version = field(doc, "schemaVersion", "$");
    if (!version.is_number_integer()) bad("expected an integer", "$.schemaVersion");
    tm.schemaVersion = version.get<int>();
    if (tm.schemaVersion != 1)
        bad("unsupported schema version " + std::to_string(tm.schemaVersion), "$.schemaVersion");
    tm.catalogVersion = asString(field(doc, "catalogVersion", "$"), "$.catalogVersion");

    const json& entries = field(doc, "entries", "$");
    if (!entries.is_array()) bad("expected an array", "$.entries");
    std::set<std::string> ids;
    for (size_t i = 0; i < entries.size(); ++i) {
        std::string path = "$.entries[" + std::to_string(i) + "]";
        VulnerabilityEntry e = loadEntry(entries[i], path);
        if (!ids.insert(e.id).second) bad("duplicate entry id '" + e.id + "'", path + ".id");
        tm.entries.push_back(std::move(e));
    }
    if (tm.entries.empty()) bad("catalog has no entries", "$.entries");
    return tm;
}

ThreatModel builtinThreatModel() { return loadThreatModel(builtinThreatModelJson()); }

Classification classify(const Finding& f, const ThreatModel& tm) {
    Classification result;
    const VulnerabilityEntry* best = nullptr;
    for (const auto& entry : tm.entries) {
        if (!entry.applicableTo(f.errorType)) continue;
        bool matched = std::any_of(entry.matchers.begin(), entry.matchers.end(),
                                   [&](const MatcherClause& c) { return clauseMatches(c, f); });
        if (!matched) continue;
        result.matchedAlternatives.push_back(entry.id);
        if (!best || severityRank(entry.severity) > severityRank(best->severity)) best = &entry;
    }
    if (best) {
        result.classified = true;
        result.entryId = best->id;
        result.attackType = best->attackType;
        result.severity = best->severity;
    }
    return result;
}

}  // namespace cryptolint
