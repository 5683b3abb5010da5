#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cryptolint/automaton.hpp"
#include "cryptolint/ir_json.hpp"
#include "cryptolint/java_parser.hpp"
#include "cryptolint/report.hpp"
#include "cryptolint/rule_parser.hpp"
#include "cryptolint/scanner.hpp"

namespace fs = std::filesystem;
using namespace cryptolint;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

struct CliConfig {
    std::string rulesPath;
    std::string threatModelPath;
    std::vector<std::string> inputs;
    std::string format = "json";
    std::string outPath;
    std::string failOn = "high";
    bool demoteEfp = false;
    bool includeTests = true;
    int inlineDepth = 1;
    int workers = 0;
    std::vector<std::string> efpTokens;
    std::vector<std::string> testSegments;
    int fixtureThreshold = 0;  // 0 keeps the built-in default
};

// Config file: one `key = value` per line, `#` comments. Values here become
// the defaults that environment variables and flags may override.
bool applyConfigFile(const std::string& path, CliConfig& cfg, std::string& error) {
    std::ifstream in(path);
    if (!in.good()) {
        error = "cannot open config file: " + path;
        return false;
    }
    auto splitList = [](const std::string& v) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : v) {
            if (c == ',') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else if (!isspace(static_cast<unsigned char>(c))) {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    };
    auto parseBool = [](const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes") { out = true; return true; }
        if (v == "false" || v == "0" || v == "no") { out = false; return true; }
        return false;
    };

    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string all = trim(line);
        if (all.empty()) continue;
        if (eq == std::string::npos) {
            error = path + ":" + std::to_string(lineNo) + ": expected key = value";
            return false;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool ok = true;
        if (key == "rules") cfg.rulesPath = value;
        else if (key == "threat-model") cfg.threatModelPath = value;
        else if (key == "format") cfg.format = value;
        else if (key == "out") cfg.outPath = value;
        else if (key == "fail-on") cfg.failOn = value;
        else if (key == "demote-efp") ok = parseBool(value, cfg.demoteEfp);
        else if (key == "include-tests") ok = parseBool(value, cfg.includeTests);
        else if (key == "inline-depth") cfg.inlineDepth = std::stoi(value);
        else if (key == "workers") cfg.workers = std::stoi(value);
        else if (key == "efp-tokens") cfg.efpTokens = splitList(value);
        else if (key == "test-segments") cfg.testSegments = splitList(value);
        else if (key == "fixture-threshold") cfg.fixtureThreshold = std::stoi(value);
        else {
            error = path + ":" + std::to_string(lineNo) + ": unknown key '" + key + "'";
            return false;
        }
        if (!ok) {
            error = path + ":" + std::to_string(lineNo) + ": expected true/false for '" + key + "'";
            return false;
        }
    }
    return true;
}

// The config file path itself obeys flag > environment ordering.
std::string findConfigPath(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") return argv[i + 1];
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    if (const char* env = std::getenv("CRYPTOLINT_CONFIG")) return env;
    return "";
}

std::optional<RuleSet> loadRules(const CliConfig& cfg, std::vector<Diagnostic>& warnings) {
    if (cfg.rulesPath.empty()) {
        std::cerr << "cryptolint: no rule pack (use --rules, CRYPTOLINT_RULES, or a config file)\n";
        return std::nullopt;
    }
    try {
        RulePackResult pack = loadRulePack(cfg.rulesPath);
        warnings.insert(warnings.end(), pack.warnings.begin(), pack.warnings.end());
        return std::move(pack.ruleSet);
    } catch (const RuleParseError& e) {
        std::cerr << "cryptolint: rule pack error: " << e.what() << "\n";
        return std::nullopt;
    } catch (const std::exception& e) {
        std::cerr << "cryptolint: rule pack error: " << e.what() << "\n";
        return std::nullopt;
    }
}

std::optional<ThreatModel> loadCatalog(const CliConfig& cfg) {
    if (cfg.threatModelPath.empty()) return builtinThreatModel();
    std::ifstream in(cfg.threatModelPath);
    if (!in.good()) {
        std::cerr << "cryptolint: cannot open threat model: " << cfg.threatModelPath << "\n";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return loadThreatModel(buf.str());
    } catch (const ThreatModelError& e) {
        std::cerr << "cryptolint: threat model error: " << e.what() << "\n";
        return std::nullopt;
    }
}

EfpConfig efpFromConfig(const CliConfig& cfg) {
    EfpConfig efp;
    if (!cfg.efpTokens.empty()) efp.nonSecurityTokens = cfg.efpTokens;
    if (!cfg.testSegments.empty()) efp.testPathSegments = cfg.testSegments;
    if (cfg.fixtureThreshold > 0) efp.fixtureThreshold = cfg.fixtureThreshold;
    return efp;
}

bool writeOutput(const CliConfig& cfg, const std::string& content) {
    if (cfg.outPath.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream out(cfg.outPath, std::ios::binary);
    if (!out.good()) {
        std::cerr << "cryptolint: cannot write " << cfg.outPath << "\n";
        return false;
    }
    out << content;
    return true;
}

int runScan(const CliConfig& cfg) {
    std::optional<Severity> threshold;
    if (cfg.failOn != "never") {
        threshold = severityFromName(cfg.failOn);
        if (!threshold) {
            // accept the report-side lowercase spelling too
            for (Severity s : {Severity::High, Severity::Medium, Severity::Low})
                if (cfg.failOn == severityKey(s)) threshold = s;
        }
        if (!threshold) {
            std::cerr << "cryptolint: invalid --fail-on value '" << cfg.failOn
                      << "' (high|medium|low|never)\n";
            return kExitError;
        }
    }
    if (cfg.format != "json" && cfg.format != "text") {
        std::cerr << "cryptolint: invalid --format value '" << cfg.format << "' (json|text)\n";
        return kExitError;
    }
    if (cfg.inlineDepth < 0) {
        std::cerr << "cryptolint: --inline-depth must be >= 0\n";
        return kExitError;
    }
    if (cfg.inputs.empty()) {
        std::cerr << "cryptolint: scan needs at least one input path\n";
        return kExitError;
    }

    std::vector<Diagnostic> diagnostics;
    std::optional<RuleSet> rules = loadRules(cfg, diagnostics);
    if (!rules) return kExitError;
    std::optional<ThreatModel> tm = loadCatalog(cfg);
    if (!tm) return kExitError;

    ScanOptions options;
    options.efp = efpFromConfig(cfg);
    options.inlineDepth = cfg.inlineDepth;
    options.includeTests = cfg.includeTests;
    options.workers = cfg.workers;

    std::vector<std::string> files = collectInputFiles(cfg.inputs, diagnostics);
    ScanOutcome outcome = scanFiles(files, *rules, *tm, options);
    diagnostics.insert(diagnostics.end(), outcome.diagnostics.begin(),
                       outcome.diagnostics.end());

    Report report = buildReport(rules->packVersion, *tm, std::move(outcome.findings),
                                std::move(diagnostics));
    std::string rendered = cfg.format == "json" ? renderJson(report) : renderText(report);
    if (!writeOutput(cfg, rendered)) return kExitError;

    if (!threshold) return kExitClean;
    int gateRank = severityRank(*threshold);
    for (const auto& rf : report.findings) {
        if (!rf.classification.classified) continue;
        if (severityRank(rf.classification.severity) < gateRank) continue;
        if (cfg.demoteEfp && !rf.efpFlags.empty()) continue;
        return kExitFindings;
    }
    return kExitClean;
}

int runRulesLint(const CliConfig& cfg) {
    std::vector<Diagnostic> warnings;
    std::optional<RuleSet> rules = loadRules(cfg, warnings);
    if (!rules) return kExitError;

    std::ostringstream out;
    out << "rule pack: " << cfg.rulesPath << " (version " << rules->packVersion << ", "
        << rules->rules.size() << (rules->rules.size() == 1 ? " rule" : " rules") << ")\n";
    for (const auto& [className, rule] : rules->rules) {
        const TypestateAutomaton& a = rule.automaton;
        int accepting = 0;
        for (bool acc : a.accepting)
            if (acc) ++accepting;
        out << "  " << className << ": events " << rule.events.size() << ", states "
            << a.stateCount << ", accepting " << accepting << ", alphabet "
            << a.alphabet.size() << "\n";

        // defensive: the compiler only emits reachable states, but a future
        // one might not
        std::vector<bool> seen(static_cast<size_t>(a.stateCount), false);
        std::vector<int> queue = {a.initial};
        seen[static_cast<size_t>(a.initial)] = true;
        while (!queue.empty()) {
            int s = queue.back();
            queue.pop_back();
            for (size_t li = 0; li < a.alphabet.size(); ++li) {
                int t = a.step(s, a.alphabet[li]);
                if (t >= 0 && !seen[static_cast<size_t>(t)]) {
                    seen[static_cast<size_t>(t)] = true;
                    queue.push_back(t);
                }
            }
        }
        for (int s = 0; s < a.stateCount; ++s)
            if (a.accepting[static_cast<size_t>(s)] && !seen[static_cast<size_t>(s)])
                out << "    warning: accepting state " << s << " unreachable\n";
    }
    for (const auto& w : warnings)
        out << "  warning [" << w.construct << "] " << w.message << "\n";
    std::cout << out.str();
    return kExitClean;
}

int runEmitIr(const CliConfig& cfg, const std::string& outDir) {
    if (cfg.inputs.empty()) {
        std::cerr << "cryptolint: emit-ir needs at least one input path\n";
        return kExitError;
    }
    std::vector<Diagnostic> diagnostics;
    std::vector<std::string> files = collectInputFiles(cfg.inputs, diagnostics);
    std::vector<std::string> javaFiles;
    for (const auto& f : files)
        if (f.size() >= 5 && f.compare(f.size() - 5, 5, ".java") == 0) javaFiles.push_back(f);

    if (outDir.empty() && javaFiles.size() > 1) {
        std::cerr << "cryptolint: emit-ir over several files needs --out-dir\n";
        return kExitError;
    }
    for (const auto& d : diagnostics)
        std::cerr << "cryptolint: warning [" << d.construct << "] " << d.message << ": "
                  << d.location.file << "\n";

    for (const auto& path : javaFiles) {
        std::ifstream in(path, std::ios::binary);
        if (!in.good()) {
            std::cerr << "cryptolint: warning [unreadable-file] cannot open: " << path << "\n";
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        CompilationUnitIR unit = parseJava(buf.str(), path);
        std::string doc = dumpUnit(unit).dump(2) + "\n";

        if (outDir.empty()) {
            std::cout << doc;
            continue;
        }
        // mirror the input path under the output directory
        fs::path rel = fs::path(path).lexically_normal().relative_path();
        fs::path target = fs::path(outDir) / rel;
        target.replace_extension();  // drop .java
        target += ".ir.json";
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        std::ofstream out(target, std::ios::binary);
        if (!out.good()) {
            std::cerr << "cryptolint: cannot write " << target.string() << "\n";
            return kExitError;
        }
        out << doc;
    }
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig cfg;

    std::string configPath = findConfigPath(argc, argv);
    if (!configPath.empty()) {
        std::string error;
        if (!applyConfigFile(configPath, cfg, error)) {
            std::cerr << "cryptolint: " << error << "\n";
            return kExitError;
        }
    }

    CLI::App app{"cryptolint — crypto API misuse scanner for Java sources"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name
    std::string configFlag;  // consumed by the pre-scan; declared so it shows in --help
    app.add_option("--config", configFlag, "config file (key = value lines)");

    auto addShared = [&](CLI::App* cmd) {
        cmd->add_option("--rules", cfg.rulesPath, "rule pack directory")
            ->envname("CRYPTOLINT_RULES");
    };

    CLI::App* scan = app.add_subcommand("scan", "scan Java sources or IR documents");
    addShared(scan);
    scan->add_option("inputs", cfg.inputs, "files or directories to scan");
    scan->add_option("--threat-model", cfg.threatModelPath, "threat model catalog override")
        ->envname("CRYPTOLINT_THREAT_MODEL");
    scan->add_option("--format", cfg.format, "json|text")->envname("CRYPTOLINT_FORMAT");
    scan->add_option("--out", cfg.outPath, "write the report here instead of stdout")
        ->envname("CRYPTOLINT_OUT");
    scan->add_option("--fail-on", cfg.failOn, "high|medium|low|never (default high)")
        ->envname("CRYPTOLINT_FAIL_ON");
    scan->add_flag("--demote-efp", cfg.demoteEfp,
                   "findings with EFP flags do not trip the fail gate")
        ->envname("CRYPTOLINT_DEMOTE_EFP");
    scan->add_flag("--include-tests,!--exclude-tests", cfg.includeTests,
                   "scan test trees too (default on)")
        ->envname("CRYPTOLINT_INCLUDE_TESTS");
    scan->add_option("--inline-depth", cfg.inlineDepth, "helper inlining depth (default 1)")
        ->envname("CRYPTOLINT_INLINE_DEPTH");
    scan->add_option("--workers", cfg.workers, "worker threads (default: auto)")
        ->envname("CRYPTOLINT_WORKERS");
    scan->add_option("--efp-token", cfg.efpTokens,
                     "non-security identifier token (replaces the default list)");
    scan->add_option("--test-segment", cfg.testSegments,
                     "path segment marking test trees (replaces the default list)");
    scan->add_option("--fixture-threshold", cfg.fixtureThreshold,
                     "same-type findings per unit before the fixture flag");

    CLI::App* lint = app.add_subcommand("rules-lint", "validate a rule pack");
    addShared(lint);

    CLI::App* emitIr = app.add_subcommand("emit-ir", "parse Java sources and dump IR documents");
    std::string outDir;
    emitIr->add_option("inputs", cfg.inputs, "files or directories to convert");
    emitIr->add_option("--out-dir", outDir, "mirror IR documents into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    if (scan->parsed()) return runScan(cfg);
    if (lint->parsed()) return runRulesLint(cfg);
    if (emitIr->parsed()) return runEmitIr(cfg, outDir);
    return kExitError;
}
