#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "cryptolint/ir.hpp"

namespace cryptolint {

inline constexpr int kIrSchemaVersion = 1;

// Raised by loadUnit when the document is not valid IR. fieldPath names the
// offending location, e.g. "methods[1].blocks[0].statements[2].kind".
struct IrSchemaError : std::runtime_error {
    IrSchemaError(const std::string& msg, std::string path)
        : std::runtime_error(path.empty() ? msg : path + ": " + msg), fieldPath(std::move(path)) {}

    std::string fieldPath;
};

nlohmann::json dumpUnit(const CompilationUnitIR& unit);
CompilationUnitIR loadUnit(const nlohmann::json& doc);

}  // namespace cryptolint
