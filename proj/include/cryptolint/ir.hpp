#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cryptolint {

struct SourceLocation {
    std::string file;
    int line = 1;
    int column = 1;

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
    friend auto operator<=>(const SourceLocation&, const SourceLocation&) = default;
};

// Operand of an IR statement. Also the result type of constant resolution:
// a resolved operand is one of the three literal kinds.
struct ValueRef {
    enum class Kind {
        StringLiteral,
        IntLiteral,
        CharArrayLiteral,
        Variable,
        CallResult,
        Unknown,
    };

    Kind kind = Kind::Unknown;
    std::string stringValue;   // StringLiteral
    long long intValue = 0;    // IntLiteral
    std::string name;          // Variable
    std::string declaredType;  // Variable: declared type name, "" if unknown
    int statementId = -1;      // CallResult: id of the producing statement

    static ValueRef stringLit(std::string v) {
        ValueRef r;
        r.kind = Kind::StringLiteral;
        r.stringValue = std::move(v);
        return r;
    }
    static ValueRef intLit(long long v) {
        ValueRef r;
        r.kind = Kind::IntLiteral;
        r.intValue = v;
        return r;
    }
    static ValueRef charArray() {
        ValueRef r;
        r.kind = Kind::CharArrayLiteral;
        return r;
    }
    static ValueRef variable(std::string name, std::string type = "") {
        ValueRef r;
        r.kind = Kind::Variable;
        r.name = std::move(name);
        r.declaredType = std::move(type);
        return r;
    }
    static ValueRef callResult(int stmtId) {
        ValueRef r;
        r.kind = Kind::CallResult;
        r.statementId = stmtId;
        return r;
    }
    static ValueRef unknown() { return ValueRef{}; }

    friend bool operator==(const ValueRef&, const ValueRef&) = default;
};

// One IR statement. The active fields depend on kind:
//   Allocation: targetVar, className, factoryName ("new" for constructors,
//               otherwise the static factory method name), args
//   Invocation: targetVar (binds the result, may be a temp), receiver,
//               methodName, args
//   Assignment: targetVar, source
//   Return:     returnValue (nullopt for a bare return)
struct Statement {
    enum class Kind { Allocation, Invocation, Assignment, Return };

    Kind kind = Kind::Invocation;
    int id = -1;  // unique within the enclosing method
    SourceLocation location;

    std::string targetVar;
    std::string className;
    std::string factoryName;
    std::string methodName;
    ValueRef receiver;
    std::vector<ValueRef> args;
    ValueRef source;
    std::optional<ValueRef> returnValue;
};

struct BasicBlock {
    int id = 0;
    bool loopHeader = false;
    std::vector<Statement> statements;
    std::vector<int> successors;
};

struct Parameter {
    std::string name;
    std::string type;
};

struct MethodIR {
    std::string name;
    std::string visibility = "package";  // public | protected | private | package
    std::vector<Parameter> parameters;
    std::vector<BasicBlock> blocks;
    int entry = 0;
    std::vector<int> exits;
    // Lowercased, deduplicated identifiers that occur lexically in the method.
    // Consumed by the false-positive context heuristics.
    std::vector<std::string> identifiers;
};

struct Diagnostic {
    std::string construct;  // short machine-readable tag, e.g. "unsupported-statement"
    std::string message;
    SourceLocation location;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct CompilationUnitIR {
    std::string sourcePath;
    std::string packageName;
    std::string className;
    std::vector<MethodIR> methods;
    std::vector<Diagnostic> diagnostics;
};

}  // namespace cryptolint
