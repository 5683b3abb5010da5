#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cryptolint/report.hpp"

using namespace cryptolint;

namespace {

Finding makeFinding(ErrorType type, const std::string& ruleClass, const std::string& file,
                    int line, int column = 1) {
    Finding f;
    f.errorType = type;
    f.ruleClass = ruleClass;
    f.methodName = "m";
    f.location = {file, line, column};
    f.detail = "detail for " + ruleClass + " at " + std::to_string(line);
    return f;
}

ReportedFinding classified(Finding f, const ThreatModel& tm) {
    ReportedFinding rf;
    rf.classification = classify(f, tm);
    rf.finding = std::move(f);
    return rf;
}

// Builds a small mixed report: one High, one Medium, one Low, one
// unclassified, across two files and two rule classes.
Report sampleReport(const ThreatModel& tm) {
    std::vector<ReportedFinding> findings;

    Finding md5 = makeFinding(ErrorType::ConstraintError, "java.security.MessageDigest",
                              "b/Hash.java", 12);
    md5.valueText = "MD5";
    md5.constraintKind = "value-in-set";
    findings.push_back(classified(md5, tm));

    Finding ecb =
        makeFinding(ErrorType::ConstraintError, "javax.crypto.Cipher", "a/Enc.java", 7);
    ecb.constraintKind = "transformation-component-in-set";
    ecb.transformationComponent = "mode";
    ecb.valueText = "ECB";
    findings.push_back(classified(ecb, tm));

    Finding clear = makeFinding(ErrorType::IncompleteOperationError,
                                "javax.crypto.spec.PBEKeySpec", "a/Enc.java", 30);
    clear.missingEvents = {"clear"};
    ReportedFinding clearRf = classified(clear, tm);
    clearRf.efpFlags.push_back({EfpKind::TestContext, EfpConfidence::Weak, "tests"});
    findings.push_back(clearRf);

    // no catalog row matches an RP with an unknown predicate
    Finding odd = makeFinding(ErrorType::RequiredPredicateError, "com.example.Custom",
                              "a/Enc.java", 2);
    odd.predicateName = "blessed";
    findings.push_back(classified(odd, tm));

    std::vector<Diagnostic> diags = {{"unsupported-statement", "skipped lambda", {"a/Enc.java", 40, 3}}};
    return buildReport("jca-2024.1", tm, std::move(findings), std::move(diags));
}

}  // namespace

TEST_CASE("empty input produces all-zero aggregates") {
    Aggregates a = aggregate({});
    CHECK(a.perRuleClass.empty());
    REQUIRE(a.perErrorType.size() == 6);
    for (const auto& [name, count] : a.perErrorType) CHECK(count == 0);
    REQUIRE(a.perAttackTypeSeverity.size() == 8);
    for (const auto& [attack, row] : a.perAttackTypeSeverity) {
        REQUIRE(row.size() == 3);
        for (const auto& [sev, count] : row) CHECK(count == 0);
    }
    REQUIRE(a.efpFlagCounts.size() == 5);
    for (const auto& [kind, count] : a.efpFlagCounts) CHECK(count == 0);
}

TEST_CASE("affected units count distinct files per rule class") {
    std::vector<ReportedFinding> findings;
    ReportedFinding a, b, c;
    a.finding = makeFinding(ErrorType::ConstraintError, "java.security.MessageDigest",
                            "one/A.java", 3);
    b.finding = makeFinding(ErrorType::ConstraintError, "java.security.MessageDigest",
                            "one/A.java", 9);
    c.finding = makeFinding(ErrorType::ConstraintError, "java.security.MessageDigest",
                            "two/B.java", 5);
    findings = {a, b, c};

    Aggregates agg = aggregate(findings);
    CHECK(agg.perRuleClass.at("java.security.MessageDigest").misuses == 3);
    CHECK(agg.perRuleClass.at("java.security.MessageDigest").affectedUnits == 2);
    CHECK(agg.perErrorType.at("ConstraintError") == 3);
}

TEST_CASE("aggregate invariants hold for the sample report") {
    ThreatModel tm = builtinThreatModel();
    Report r = sampleReport(tm);

    int typeSum = 0;
    for (const auto& [name, count] : r.aggregates.perErrorType) typeSum += count;
    CHECK(typeSum == static_cast<int>(r.findings.size()));

    int classifiedCount = 0;
    for (const auto& rf : r.findings)
        if (rf.classification.classified) ++classifiedCount;
    int cellSum = 0;
    for (const auto& [attack, row] : r.aggregates.perAttackTypeSeverity)
        for (const auto& [sev, count] : row) cellSum += count;
    CHECK(cellSum == classifiedCount);
    CHECK(classifiedCount == 3);

    // recomputation matches the stored aggregates
    CHECK(aggregate(r.findings) == r.aggregates);
}

TEST_CASE("findings sort by severity then location with unclassified last") {
    ThreatModel tm = builtinThreatModel();
    Report r = sampleReport(tm);
    REQUIRE(r.findings.size() == 4);

    CHECK(r.findings[0].classification.entryId == "insecure-hash");      // high
    CHECK(r.findings[1].classification.entryId == "ecb-mode");           // medium
    CHECK(r.findings[2].classification.entryId == "missed-clear-password");  // low
    CHECK_FALSE(r.findings[3].classification.classified);                // none, last

    CHECK(r.findings[0].displayName == "Insecure cryptographic hash");
    CHECK(r.findings[0].novel == false);

    // same severity orders by file then line then column then entry id
    std::vector<ReportedFinding> lows;
    Finding f1 = makeFinding(ErrorType::ConstraintError, "javax.crypto.Mac", "z/Z.java", 2);
    Finding f2 = makeFinding(ErrorType::ConstraintError, "java.security.Signature", "a/A.java", 9);
    lows.push_back(classified(f1, tm));
    lows.push_back(classified(f2, tm));
    Report low = buildReport("p", tm, lows, {});
    CHECK(low.findings[0].finding.location.file == "a/A.java");
    CHECK(low.findings[1].finding.location.file == "z/Z.java");
}

TEST_CASE("json rendering is byte deterministic and round-trips") {
    ThreatModel tm = builtinThreatModel();
    Report r = sampleReport(tm);

    std::string once = renderJson(r);
    std::string twice = renderJson(r);
    CHECK(once == twice);

    Report back = parseReportJson(once);
    CHECK(back == r);
    CHECK(renderJson(back) == once);

    // keys come out sorted at every level
    auto j = nlohmann::json::parse(once);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("json layout carries the classification and flags") {
    ThreatModel tm = builtinThreatModel();
    Report r = sampleReport(tm);
    auto j = nlohmann::json::parse(renderJson(r));

    CHECK(j["schemaVersion"] == 1);
    CHECK(j["toolVersion"] == kToolVersion);
    CHECK(j["rulePackVersion"] == "jca-2024.1");
    CHECK(j["threatModelVersion"] == tm.catalogVersion);

    const auto& top = j["findings"][0];
    CHECK(top["severity"] == "high");
    CHECK(top["classification"]["entryId"] == "insecure-hash");
    CHECK(top["classification"]["attackType"] == "Bruteforce");
    CHECK(top["classification"]["attackDisplay"] == "Bruteforce Attacks");
    CHECK(top["classification"]["matchedAlternatives"].size() >= 1);

    const auto& last = j["findings"][3];
    CHECK(last["severity"] == "none");
    CHECK(last["classification"].is_null());

    const auto& flagged = j["findings"][2];
    CHECK(flagged["efpFlags"][0]["kind"] == "TestContext");
    CHECK(flagged["efpFlags"][0]["confidence"] == "weak");
    CHECK(flagged["efpFlags"][0]["evidence"] == "tests");

    CHECK(j["aggregates"]["perRuleClass"]["javax.crypto.Cipher"]["misuses"] == 1);
    CHECK(j["diagnostics"][0]["construct"] == "unsupported-statement");
}

TEST_CASE("parser rejects malformed documents") {
    ThreatModel tm = builtinThreatModel();
    std::string good = renderJson(sampleReport(tm));

    CHECK_THROWS_AS(parseReportJson("nonsense"), std::runtime_error);
    CHECK_THROWS_AS(parseReportJson("[]"), std::runtime_error);
    CHECK_THROWS_AS(parseReportJson(R"({"schemaVersion": 99})"), std::runtime_error);

    auto j = nlohmann::json::parse(good);
    j["findings"][0].erase("errorType");
    CHECK_THROWS_AS(parseReportJson(j.dump()), std::runtime_error);

    j = nlohmann::json::parse(good);
    j["findings"][0]["errorType"] = "NotAType";
    CHECK_THROWS_AS(parseReportJson(j.dump()), std::runtime_error);

    j = nlohmann::json::parse(good);
    j["findings"][3]["severity"] = "high";  // unclassified finding
    CHECK_THROWS_AS(parseReportJson(j.dump()), std::runtime_error);
}

TEST_CASE("text summary shows severity tags catalog names and the attack table") {
    ThreatModel tm = builtinThreatModel();
    Report r = sampleReport(tm);
    std::string text = renderText(r);

    CHECK(text.find("[HIGH]") != std::string::npos);
    CHECK(text.find("Insecure cryptographic hash") != std::string::npos);
    CHECK(text.find("[MEDIUM]") != std::string::npos);
    CHECK(text.find("[NONE]") != std::string::npos);
    CHECK(text.find("misuses by attack type and severity:") != std::string::npos);
    CHECK(text.find("Bruteforce Attacks") != std::string::npos);
    CHECK(text.find("efp: TestContext(weak: tests)") != std::string::npos);
    CHECK(text.find("findings: 4 (high 1, medium 1, low 1, unclassified 1)") != std::string::npos);

    // byte deterministic as well
    CHECK(renderText(r) == text);
}

TEST_CASE("text lines never exceed 120 columns") {
    ThreatModel tm = builtinThreatModel();
    std::vector<ReportedFinding> findings;
    Finding wide = makeFinding(ErrorType::ConstraintError, "javax.crypto.Cipher",
                               "deeply/nested/path/of/a/very/long/project/layout/Enc.java", 3);
    wide.detail = std::string(400, 'x');
    findings.push_back(classified(wide, tm));
    Report r = buildReport("p", tm, findings, {});

    std::istringstream lines(renderText(r));
    std::string line;
    int checked = 0;
    while (std::getline(lines, line)) {
        CHECK(line.size() <= 120);
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("random reports keep aggregates consistent and renderings stable") {
    ThreatModel tm = builtinThreatModel();
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> typeDist(0, kErrorTypeCount - 1);
    const std::vector<std::string> classes = {
        "javax.crypto.Cipher", "java.security.MessageDigest", "javax.net.ssl.SSLContext",
        "javax.crypto.Mac", "x.y.Custom"};
    const std::vector<std::string> files = {"a/A.java", "b/B.java", "c/C.java"};

    for (int iter = 0; iter < 50; ++iter) {
        std::vector<ReportedFinding> findings;
        int n = static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k) {
            Finding f = makeFinding(static_cast<ErrorType>(typeDist(rng)),
                                    classes[rng() % classes.size()], files[rng() % files.size()],
                                    static_cast<int>(rng() % 90 + 1),
                                    static_cast<int>(rng() % 20 + 1));
            f.valueText = (rng() % 2) ? "DES" : "";
            f.missingEvents = (rng() % 2) ? std::vector<std::string>{"update"}
                                          : std::vector<std::string>{};
            ReportedFinding rf = classified(f, tm);
            if (rng() % 3 == 0)
                rf.efpFlags.push_back({EfpKind::LoopGuarded, EfpConfidence::Strong, "loop"});
            findings.push_back(rf);
        }
        Report r = buildReport("p", tm, findings, {});

        CHECK(aggregate(r.findings) == r.aggregates);
        int sum = 0;
        for (const auto& [name, count] : r.aggregates.perErrorType) sum += count;
        CHECK(sum == n);

        for (size_t i = 1; i < r.findings.size(); ++i) {
            const auto &a = r.findings[i - 1], &b = r.findings[i];
            int ra = a.classification.classified ? severityRank(a.classification.severity) : 0;
            int rb = b.classification.classified ? severityRank(b.classification.severity) : 0;
            CHECK(ra >= rb);
        }

        Report back = parseReportJson(renderJson(r));
        CHECK(back == r);
    }
}
