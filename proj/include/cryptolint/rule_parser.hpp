#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cryptolint/ir.hpp"
#include "cryptolint/rule.hpp"

namespace cryptolint {

struct RuleParseError : std::runtime_error {
    RuleParseError(std::string msg, std::string file, int line, int column,
                   std::vector<std::string> expected = {})
        : std::runtime_error(msg + " (" + file + ":" + std::to_string(line) + ":" +
                             std::to_string(column) + ")"),
          file(std::move(file)),
          line(line),
          column(column),
          expected(std::move(expected)) {}

    std::string file;
    int line;
    int column;
    std::vector<std::string> expected;  // token descriptions, for syntax errors
};

// Parses one rule document. Throws RuleParseError on syntax or validation
// errors (undeclared labels, out-of-range parameter indices, ambiguous
// aliases, duplicate or out-of-order sections).
RuleSpec parseRule(const std::string& text, const std::string& fileName);

struct RulePackResult {
    RuleSet ruleSet;
    std::vector<Diagnostic> warnings;
};

// Loads every *.rule file in the directory (non-recursive, sorted by file
// name). Throws RuleParseError for unparsable rules and for duplicate class
// names. An empty directory yields an empty set plus a warning diagnostic.
// Pack version is read from an optional pack.version file in the directory.
RulePackResult loadRulePack(const std::filesystem::path& directory);

}  // namespace cryptolint
