#include "cryptolint/report.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace cryptolint {

using nlohmann::json;

const char* severityKey(Severity s) {
    switch (s) {
        case Severity::High: return "high";
        case Severity::Medium: return "medium";
        case Severity::Low: return "low";
    }
    return "low";
}

namespace {

// Unclassified findings rank below every severity.
int findingRank(const ReportedFinding& rf) {
    return rf.classification.classified ? severityRank(rf.classification.severity) : 0;
}

std::string findingSeverityKey(const ReportedFinding& rf) {
    return rf.classification.classified ? severityKey(rf.classification.severity) : "none";
}

std::optional<Severity> severityFromKey(const std::string& key) {
    for (Severity s : {Severity::High, Severity::Medium, Severity::Low})
        if (key == severityKey(s)) return s;
    return std::nullopt;
}

void sortFindings(std::vector<ReportedFinding>& findings) {
    std::stable_sort(findings.begin(), findings.end(),
                     [](const ReportedFinding& a, const ReportedFinding& b) {
                         int ra = findingRank(a), rb = findingRank(b);
                         if (ra != rb) return ra > rb;
                         return std::tie(a.finding.location.file, a.finding.location.line,
                                         a.finding.location.column, a.classification.entryId) <
                                std::tie(b.finding.location.file, b.finding.location.line,
                                         b.finding.location.column, b.classification.entryId);
                     });
}

json locationJson(const SourceLocation& loc) {
    return json{{"file", loc.file}, {"line", loc.line}, {"column", loc.column}};
}

json findingJson(const ReportedFinding& rf) {
    const Finding& f = rf.finding;
    json j;
    j["file"] = f.location.file;
    j["line"] = f.location.line;
    j["column"] = f.location.column;
    j["method"] = f.methodName;
    j["objectVar"] = f.objectVar;
    j["ruleClass"] = f.ruleClass;
    j["errorType"] = errorTypeName(f.errorType);
    j["eventLabel"] = f.eventLabel;
    j["detail"] = f.detail;
    j["missingEvents"] = f.missingEvents;
    j["unexpectedEvent"] = f.unexpectedEvent;
    j["predicateName"] = f.predicateName;
    j["paramKind"] = paramKindName(f.paramKind);
    j["constraintKind"] = f.constraintKind;
    j["valueText"] = f.valueText;
    j["transformationComponent"] = f.transformationComponent;
    j["defaulted"] = f.defaulted;
    j["intValue"] = f.intValue;
    j["apiForcedString"] = f.apiForcedString;
    j["pathFlags"] = json{{"existsOnAllPaths", f.pathFlags.existsOnAllPaths},
                          {"loopGuarded", f.pathFlags.loopGuarded}};
    j["severity"] = findingSeverityKey(rf);

    if (rf.classification.classified) {
        j["classification"] = json{
            {"entryId", rf.classification.entryId},
            {"displayName", rf.displayName},
            {"attackType", attackTypeName(rf.classification.attackType)},
            {"attackDisplay", attackTypeDisplay(rf.classification.attackType)},
            {"novel", rf.novel},
            {"matchedAlternatives", rf.classification.matchedAlternatives},
        };
    } else {
        j["classification"] = nullptr;
    }

    json flags = json::array();
    for (const auto& fl : rf.efpFlags)
        flags.push_back(json{{"kind", efpKindName(fl.kind)},
                             {"confidence", efpConfidenceName(fl.confidence)},
                             {"evidence", fl.evidence}});
    j["efpFlags"] = flags;
    return j;
}

[[noreturn]] void malformed(const std::string& what) {
    throw std::runtime_error("malformed report document: " + what);
}

template <typename T>
T field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) malformed(std::string("missing field '") + name + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        malformed(std::string("field '") + name + "' has the wrong type");
    }
}

ReportedFinding findingFromJson(const json& j) {
    ReportedFinding rf;
    Finding& f = rf.finding;
    f.location.file = field<std::string>(j, "file");
    f.location.line = field<int>(j, "line");
    f.location.column = field<int>(j, "column");
    f.methodName = field<std::string>(j, "method");
    f.objectVar = field<std::string>(j, "objectVar");
    f.ruleClass = field<std::string>(j, "ruleClass");
    auto type = errorTypeFromName(field<std::string>(j, "errorType"));
    if (!type) malformed("unknown error type");
    f.errorType = *type;
    f.eventLabel = field<std::string>(j, "eventLabel");
    f.detail = field<std::string>(j, "detail");
    f.missingEvents = field<std::vector<std::string>>(j, "missingEvents");
    f.unexpectedEvent = field<std::string>(j, "unexpectedEvent");
    f.predicateName = field<std::string>(j, "predicateName");
    auto kind = paramKindFromName(field<std::string>(j, "paramKind"));
    if (!kind) malformed("unknown parameter kind");
    f.paramKind = *kind;
    f.constraintKind = field<std::string>(j, "constraintKind");
    f.valueText = field<std::string>(j, "valueText");
    f.transformationComponent = field<std::string>(j, "transformationComponent");
    f.defaulted = field<bool>(j, "defaulted");
    f.intValue = field<long long>(j, "intValue");
    f.apiForcedString = field<bool>(j, "apiForcedString");
    const json& pf = field<json>(j, "pathFlags");
    f.pathFlags.existsOnAllPaths = field<bool>(pf, "existsOnAllPaths");
    f.pathFlags.loopGuarded = field<bool>(pf, "loopGuarded");

    const json& cls = field<json>(j, "classification");
    if (!cls.is_null()) {
        rf.classification.classified = true;
        rf.classification.entryId = field<std::string>(cls, "entryId");
        rf.displayName = field<std::string>(cls, "displayName");
        auto attack = attackTypeFromName(field<std::string>(cls, "attackType"));
        if (!attack) malformed("unknown attack type");
        rf.classification.attackType = *attack;
        rf.novel = field<bool>(cls, "novel");
        rf.classification.matchedAlternatives =
            field<std::vector<std::string>>(cls, "matchedAlternatives");
        auto sev = severityFromKey(field<std::string>(j, "severity"));
        if (!sev) malformed("unknown severity");
        rf.classification.severity = *sev;
    } else if (field<std::string>(j, "severity") != "none") {
        malformed("unclassified finding with a severity");
    }

    for (const json& fl : field<json>(j, "efpFlags")) {
        EfpFlag flag;
        std::string kindName = field<std::string>(fl, "kind");
        bool known = false;
        for (int i = 0; i < kEfpKindCount; ++i)
            if (kindName == efpKindName(static_cast<EfpKind>(i))) {
                flag.kind = static_cast<EfpKind>(i);
                known = true;
            }
        if (!known) malformed("unknown flag kind");
        flag.confidence = field<std::string>(fl, "confidence") == "strong"
                              ? EfpConfidence::Strong
                              : EfpConfidence::Weak;
        flag.evidence = field<std::string>(fl, "evidence");
        rf.efpFlags.push_back(std::move(flag));
    }
    return rf;
}

json aggregatesJson(const Aggregates& a) {
    json per = json::object();
    for (const auto& [cls, stats] : a.perRuleClass)
        per[cls] = json{{"misuses", stats.misuses}, {"affectedUnits", stats.affectedUnits}};
    return json{{"perRuleClass", per},
                {"perErrorType", a.perErrorType},
                {"perAttackTypeSeverity", a.perAttackTypeSeverity},
                {"efpFlagCounts", a.efpFlagCounts}};
}

Aggregates aggregatesFromJson(const json& j) {
    Aggregates a;
    const json perRuleClass = field<json>(j, "perRuleClass");
    for (const auto& [cls, stats] : perRuleClass.items())
        a.perRuleClass[cls] = {field<int>(stats, "misuses"), field<int>(stats, "affectedUnits")};
    a.perErrorType = field<std::map<std::string, int>>(j, "perErrorType");
    a.perAttackTypeSeverity =
        field<std::map<std::string, std::map<std::string, int>>>(j, "perAttackTypeSeverity");
    a.efpFlagCounts = field<std::map<std::string, int>>(j, "efpFlagCounts");
    return a;
}

// Hard 120-column bound for the text renderer.
constexpr size_t kTextWidth = 120;

void emitLine(std::ostringstream& out, std::string line) {
    if (line.size() > kTextWidth) {
        size_t cut = kTextWidth - 3;
        // never split a UTF-8 sequence
        while (cut > 0 && (static_cast<unsigned char>(line[cut]) & 0xC0) == 0x80) --cut;
        line = line.substr(0, cut) + "...";
    }
    out << line << '\n';
}

std::string padded(std::string s, size_t width) {
    if (s.size() < width) s += std::string(width - s.size(), ' ');
    return s;
}

}  // namespace

Aggregates aggregate(const std::vector<ReportedFinding>& findings) {
    Aggregates a;
    for (int i = 0; i < kErrorTypeCount; ++i)
        a.perErrorType[errorTypeName(static_cast<ErrorType>(i))] = 0;
    for (int i = 0; i < kAttackTypeCount; ++i) {
        auto& row = a.perAttackTypeSeverity[attackTypeName(static_cast<AttackType>(i))];
        for (Severity s : {Severity::High, Severity::Medium, Severity::Low})
            row[severityKey(s)] = 0;
    }
    for (int i = 0; i < kEfpKindCount; ++i)
        a.efpFlagCounts[efpKindName(static_cast<EfpKind>(i))] = 0;

    std::map<std::string, std::set<std::string>> unitsPerClass;
    for (const auto& rf : findings) {
        const Finding& f = rf.finding;
        ++a.perRuleClass[f.ruleClass].misuses;
        unitsPerClass[f.ruleClass].insert(f.location.file);
        ++a.perErrorType[errorTypeName(f.errorType)];
        if (rf.classification.classified)
            ++a.perAttackTypeSeverity[attackTypeName(rf.classification.attackType)]
                                     [severityKey(rf.classification.severity)];
        for (const auto& fl : rf.efpFlags) ++a.efpFlagCounts[efpKindName(fl.kind)];
    }
    for (auto& [cls, stats] : a.perRuleClass)
        stats.affectedUnits = static_cast<int>(unitsPerClass[cls].size());
    return a;
}

Report buildReport(const std::string& rulePackVersion, const ThreatModel& tm,
                   std::vector<ReportedFinding> findings, std::vector<Diagnostic> diagnostics) {
    Report r;
    r.toolVersion = kToolVersion;
    r.rulePackVersion = rulePackVersion;
    r.threatModelVersion = tm.catalogVersion;
    for (auto& rf : findings) {
        if (!rf.classification.classified) continue;
        if (const VulnerabilityEntry* e = tm.entryById(rf.classification.entryId)) {
            rf.displayName = e->displayName;
            rf.novel = e->novel;
        }
    }
    sortFindings(findings);
    r.aggregates = aggregate(findings);
    r.findings = std::move(findings);
    r.diagnostics = std::move(diagnostics);
    return r;
}

std::string renderJson(const Report& report) {
    json j;
    j["schemaVersion"] = kReportSchemaVersion;
    j["toolVersion"] = report.toolVersion;
    j["rulePackVersion"] = report.rulePackVersion;
    j["threatModelVersion"] = report.threatModelVersion;

    json findings = json::array();
    for (const auto& rf : report.findings) findings.push_back(findingJson(rf));
    j["findings"] = findings;
    j["aggregates"] = aggregatesJson(report.aggregates);

    json diags = json::array();
    for (const auto& d : report.diagnostics) {
        json dj = locationJson(d.location);
        dj["construct"] = d.construct;
        dj["message"] = d.message;
        diags.push_back(dj);
    }
    j["diagnostics"] = diags;
    return j.dump(2) + "\n";
}

Report parseReportJson(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    if (!j.is_object()) malformed("document is not an object");
    if (field<int>(j, "schemaVersion") != kReportSchemaVersion)
        malformed("unsupported schema version");

    Report r;
    r.toolVersion = field<std::string>(j, "toolVersion");
    r.rulePackVersion = field<std::string>(j, "rulePackVersion");
    r.threatModelVersion = field<std::string>(j, "threatModelVersion");
    for (const json& fj : field<json>(j, "findings")) r.findings.push_back(findingFromJson(fj));
    r.aggregates = aggregatesFromJson(field<json>(j, "aggregates"));
    for (const json& dj : field<json>(j, "diagnostics")) {
        Diagnostic d;
        d.construct = field<std::string>(dj, "construct");
        d.message = field<std::string>(dj, "message");
        d.location.file = field<std::string>(dj, "file");
        d.location.line = field<int>(dj, "line");
        d.location.column = field<int>(dj, "column");
        r.diagnostics.push_back(std::move(d));
    }
    return r;
}

std::string renderText(const Report& report) {
    std::ostringstream out;
    emitLine(out, "cryptolint report — tool " + report.toolVersion + ", rules " +
                      report.rulePackVersion + ", catalog " + report.threatModelVersion);

    int counts[4] = {};  // high, medium, low, none
    int flagged = 0;
    for (const auto& rf : report.findings) {
        if (!rf.classification.classified)
            ++counts[3];
        else
            ++counts[3 - severityRank(rf.classification.severity)];
        if (!rf.efpFlags.empty()) ++flagged;
    }
    {
        std::ostringstream head;
        head << "findings: " << report.findings.size() << " (high " << counts[0] << ", medium "
             << counts[1] << ", low " << counts[2] << ", unclassified " << counts[3] << ")";
        if (flagged > 0) head << ", efp-flagged: " << flagged;
        emitLine(out, head.str());
    }

    for (const auto& rf : report.findings) {
        const Finding& f = rf.finding;
        std::string sev = findingSeverityKey(rf);
        std::transform(sev.begin(), sev.end(), sev.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        std::ostringstream line;
        line << "  [" << sev << "] " << f.location.file << ":" << f.location.line << ":"
             << f.location.column << " ";
        if (rf.classification.classified)
            line << rf.displayName << " — ";
        line << errorTypeName(f.errorType) << " (" << f.ruleClass << ")";
        emitLine(out, line.str());
        emitLine(out, "         " + f.detail);
        if (!rf.efpFlags.empty()) {
            std::ostringstream fl;
            fl << "         efp:";
            for (const auto& flag : rf.efpFlags)
                fl << " " << efpKindName(flag.kind) << "(" << efpConfidenceName(flag.confidence)
                   << ": " << flag.evidence << ")";
            emitLine(out, fl.str());
        }
    }

    emitLine(out, "");
    emitLine(out, "misuses by attack type and severity:");
    emitLine(out, "  " + padded("attack type", 42) + "  high  medium  low");
    for (int i = 0; i < kAttackTypeCount; ++i) {
        AttackType t = static_cast<AttackType>(i);
        const auto& row = report.aggregates.perAttackTypeSeverity.at(attackTypeName(t));
        std::ostringstream line;
        line << "  " << padded(attackTypeDisplay(t), 42);
        for (const char* key : {"high", "medium", "low"}) {
            std::string n = std::to_string(row.at(key));
            size_t width = std::string(key).size() + 2;
            line << std::string(width > n.size() ? width - n.size() : 1, ' ') << n;
        }
        emitLine(out, line.str());
    }

    if (!report.aggregates.perRuleClass.empty()) {
        emitLine(out, "");
        emitLine(out, "per rule class:");
        for (const auto& [cls, stats] : report.aggregates.perRuleClass) {
            std::ostringstream line;
            line << "  " << cls << "  " << stats.misuses << " misuse"
                 << (stats.misuses == 1 ? "" : "s") << " in " << stats.affectedUnits << " unit"
                 << (stats.affectedUnits == 1 ? "" : "s");
            emitLine(out, line.str());
        }
    }

    if (!report.diagnostics.empty()) {
        emitLine(out, "");
        emitLine(out, "diagnostics:");
        for (const auto& d : report.diagnostics) {
            std::ostringstream line;
            line << "  " << d.location.file << ":" << d.location.line << " [" << d.construct
                 << "] " << d.message;
            emitLine(out, line.str());
        }
    }
    return out.str();
}

}  // namespace cryptolint
