#include "cryptolint/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cryptolint/inliner.hpp"
#include "cryptolint/ir_json.hpp"
#include "cryptolint/java_parser.hpp"

namespace fs = std::filesystem;

namespace cryptolint {

namespace {

bool hasSuffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool isScannable(const std::string& path) {
    return hasSuffix(path, ".java") || hasSuffix(path, ".ir.json");
}

}  // namespace

std::vector<std::string> collectInputFiles(const std::vector<std::string>& paths,
                                           std::vector<Diagnostic>& diagnostics) {
    std::set<std::string> files;
    for (const auto& p : paths) {
        std::error_code ec;
        fs::file_status st = fs::status(p, ec);
        if (ec || st.type() == fs::file_type::not_found) {
            diagnostics.push_back({"missing-input", "input path does not exist", {p, 1, 1}});
            continue;
        }
        if (fs::is_directory(st)) {
            for (auto it = fs::recursive_directory_iterator(p, ec);
                 !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (it->is_regular_file(ec) && isScannable(it->path().string()))
                    files.insert(it->path().generic_string());
            }
        } else if (isScannable(p)) {
            files.insert(fs::path(p).generic_string());
        } else {
            diagnostics.push_back(
                {"unsupported-input", "not a .java or .ir.json file", {p, 1, 1}});
        }
    }
    return {files.begin(), files.end()};
}

bool isTestPath(const std::string& path, const EfpConfig& efp) {
    std::string segment;
    auto flush = [&]() {
        bool hit = std::find(efp.testPathSegments.begin(), efp.testPathSegments.end(), segment) !=
                   efp.testPathSegments.end();
        segment.clear();
        return hit;
    };
    for (char c : path) {
        if (c == '/' || c == '\\') {
            if (flush()) return true;
        } else {
            segment += c;
        }
    }
    return flush();
}

ScanOutcome scanUnit(const CompilationUnitIR& unit, const RuleSet& rules, const ThreatModel& tm,
                     const ScanOptions& options) {
    ScanOutcome out;
    out.diagnostics = unit.diagnostics;

    CompilationUnitIR expanded = unit;
    inlineHelpers(expanded, options.inlineDepth);

    AnalysisResult analysis = analyzeUnit(expanded, rules, options.pathBudget);
    out.diagnostics.insert(out.diagnostics.end(), analysis.diagnostics.begin(),
                           analysis.diagnostics.end());

    int perType[kErrorTypeCount] = {};
    for (const auto& f : analysis.findings) ++perType[static_cast<int>(f.errorType)];

    for (const auto& f : analysis.findings) {
        ReportedFinding rf;
        rf.classification = classify(f, tm);
        AnalysisContext ctx =
            buildContext(expanded, f, perType[static_cast<int>(f.errorType)]);
        rf.efpFlags = flagEffectiveFalsePositives(f, rf.classification, ctx, options.efp);
        rf.finding = f;
        out.findings.push_back(std::move(rf));
    }
    return out;
}

namespace {

ScanOutcome scanOneFile(const std::string& path, const RuleSet& rules, const ThreatModel& tm,
                        const ScanOptions& options) {
    ScanOutcome out;
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) {
        out.diagnostics.push_back({"unreadable-file", "cannot open input file", {path, 1, 1}});
        return out;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    CompilationUnitIR unit;
    if (hasSuffix(path, ".ir.json")) {
        try {
            unit = loadUnit(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            out.diagnostics.push_back({"malformed-ir", e.what(), {path, 1, 1}});
            return out;
        } catch (const IrSchemaError& e) {
            out.diagnostics.push_back({"malformed-ir", e.what(), {path, 1, 1}});
            return out;
        }
    } else {
        unit = parseJava(text, path);
    }
    return scanUnit(unit, rules, tm, options);
}

}  // namespace

ScanOutcome scanFiles(const std::vector<std::string>& files, const RuleSet& rules,
                      const ThreatModel& tm, const ScanOptions& options) {
    std::vector<std::string> selected;
    ScanOutcome merged;
    for (const auto& f : files) {
        if (!options.includeTests && isTestPath(f, options.efp)) continue;
        selected.push_back(f);
    }

    std::vector<ScanOutcome> slots(selected.size());
    unsigned workerCount =
        options.workers > 0 ? static_cast<unsigned>(options.workers)
                            : std::max(1u, std::thread::hardware_concurrency());
    if (selected.size() < workerCount)
        workerCount = static_cast<unsigned>(std::max<size_t>(selected.size(), 1));

    if (workerCount <= 1) {
        for (size_t i = 0; i < selected.size(); ++i)
            slots[i] = scanOneFile(selected[i], rules, tm, options);
    } else {
        std::atomic<size_t> next{0};
        auto work = [&]() {
            for (size_t i = next.fetch_add(1); i < selected.size(); i = next.fetch_add(1))
                slots[i] = scanOneFile(selected[i], rules, tm, options);
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workerCount; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // merge in input order: independent of scheduling
    for (auto& slot : slots) {
        merged.findings.insert(merged.findings.end(),
                               std::make_move_iterator(slot.findings.begin()),
                               std::make_move_iterator(slot.findings.end()));
        merged.diagnostics.insert(merged.diagnostics.end(),
                                  std::make_move_iterator(slot.diagnostics.begin()),
                                  std::make_move_iterator(slot.diagnostics.end()));
    }
    return merged;
}

}  // namespace cryptolint
