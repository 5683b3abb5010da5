#pragma once

#include <stdexcept>
#include <string>

#include "cryptolint/ir.hpp"

namespace cryptolint {

// Source is structurally unparsable (no class declaration, unbalanced
// braces, ...). Recoverable problems inside a method body do not throw; the
// method is skipped and a diagnostic is recorded on the unit instead.
struct JavaParseError : std::runtime_error {
    JavaParseError(const std::string& msg, std::string file, int line, int column)
        : std::runtime_error(msg + " (" + file + ":" + std::to_string(line) + ":" +
                             std::to_string(column) + ")"),
          file(std::move(file)),
          line(line),
          column(column) {}

    std::string file;
    int line;
    int column;
};

CompilationUnitIR parseJava(const std::string& source, const std::string& sourcePath);

}  // namespace cryptolint
