#include "cryptolint/ir_json.hpp"

#include <map>

namespace cryptolint {

namespace {

using nlohmann::json;

// ---- dumping ----

const std::map<ValueRef::Kind, std::string> kValueKindNames = {
    {ValueRef::Kind::StringLiteral, "string"},   {ValueRef::Kind::IntLiteral, "int"},
    {ValueRef::Kind::CharArrayLiteral, "charArray"}, {ValueRef::Kind::Variable, "variable"},
    {ValueRef::Kind::CallResult, "callResult"},  {ValueRef::Kind::Unknown, "unknown"},
};

const std::map<Statement::Kind, std::string> kStatementKindNames = {
    {Statement::Kind::Allocation, "allocation"},
    {Statement::Kind::Invocation, "invocation"},
    {Statement::Kind::Assignment, "assignment"},
    {Statement::Kind::Return, "return"},
};

json dumpValue(const ValueRef& v) {
    json j;
    j["kind"] = kValueKindNames.at(v.kind);
    switch (v.kind) {
        case ValueRef::Kind::StringLiteral:
            j["value"] = v.stringValue;
            break;
        case ValueRef::Kind::IntLiteral:
            j["value"] = v.intValue;
            break;
        case ValueRef::Kind::Variable:
            j["name"] = v.name;
            if (!v.declaredType.empty()) j["type"] = v.declaredType;
            break;
        case ValueRef::Kind::CallResult:
            j["statementId"] = v.statementId;
            break;
        case ValueRef::Kind::CharArrayLiteral:
        case ValueRef::Kind::Unknown:
            break;
    }
    return j;
}

json dumpLocation(const SourceLocation& loc) {
    return json{{"file", loc.file}, {"line", loc.line}, {"column", loc.column}};
}

json dumpStatement(const Statement& s) {
    json j;
    j["id"] = s.id;
    j["kind"] = kStatementKindNames.at(s.kind);
    j["location"] = dumpLocation(s.location);
    switch (s.kind) {
        case Statement::Kind::Allocation:
            j["target"] = s.targetVar;
            j["class"] = s.className;
            j["factory"] = s.factoryName;
            j["args"] = json::array();
            for (const auto& a : s.args) j["args"].push_back(dumpValue(a));
            break;
        case Statement::Kind::Invocation:
            j["target"] = s.targetVar;
            j["method"] = s.methodName;
            j["receiver"] = dumpValue(s.receiver);
            j["args"] = json::array();
            for (const auto& a : s.args) j["args"].push_back(dumpValue(a));
            break;
        case Statement::Kind::Assignment:
            j["target"] = s.targetVar;
            j["source"] = dumpValue(s.source);
            break;
        case Statement::Kind::Return:
            if (s.returnValue) j["value"] = dumpValue(*s.returnValue);
            break;
    }
    return j;
}

json dumpMethod(const MethodIR& m) {
    json j;
    j["name"] = m.name;
    j["visibility"] = m.visibility;
    j["parameters"] = json::array();
    for (const auto& p : m.parameters)
        j["parameters"].push_back(json{{"name", p.name}, {"type", p.type}});
    j["entry"] = m.entry;
    j["exits"] = m.exits;
    j["identifiers"] = m.identifiers;
    j["blocks"] = json::array();
    for (const auto& b : m.blocks) {
        json jb;
        jb["id"] = b.id;
        jb["loopHeader"] = b.loopHeader;
        jb["successors"] = b.successors;
        jb["statements"] = json::array();
        for (const auto& s : b.statements) jb["statements"].push_back(dumpStatement(s));
        j["blocks"].push_back(std::move(jb));
    }
    return j;
}

// ---- loading ----

[[noreturn]] void bad(const std::string& msg, const std::string& path) {
    throw IrSchemaError(msg, path);
}

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) bad("expected an object", path);
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing field '") + key + "'", path);
    return *it;
}

std::string asString(const json& j, const std::string& path) {
    if (!j.is_string()) bad("expected a string", path);
    return j.get<std::string>();
}

int asInt(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad("expected an integer", path);
    return j.get<int>();
}

bool asBool(const json& j, const std::string& path) {
    if (!j.is_boolean()) bad("expected a boolean", path);
    return j.get<bool>();
}

const json& asArray(const json& j, const std::string& path) {
    if (!j.is_array()) bad("expected an array", path);
    return j;
}

SourceLocation loadLocation(const json& j, const std::string& path) {
    SourceLocation loc;
    loc.file = asString(field(j, "file", path), path + ".file");
    loc.line = asInt(field(j, "line", path), path + ".line");
    loc.column = asInt(field(j, "column", path), path + ".column");
    return loc;
}

ValueRef loadValue(const json& j, const std::string& path) {
    std::string kind = asString(field(j, "kind", path), path + ".kind");
    if (kind == "string")
        return ValueRef::stringLit(asString(field(j, "value", path), path + ".value"));
    if (kind == "int") {
        const json& v = field(j, "value", path);
        if (!v.is_number_integer()) bad("expected an integer", path + ".value");
        return ValueRef::intLit(v.get<long long>());
    }
    if (kind == "charArray") return ValueRef::charArray();
    if (kind == "variable") {
        std::string name = asString(field(j, "name", path), path + ".name");
        std::string type;
        if (j.contains("type")) type = asString(j["type"], path + ".type");
        return ValueRef::variable(std::move(name), std::move(type));
    }
    if (kind == "callResult")
        return ValueRef::callResult(asInt(field(j, "statementId", path), path + ".statementId"));
    if (kind == "unknown") return ValueRef::unknown();
    bad("unknown value kind '" + kind + "'", path + ".kind");
}

Statement loadStatement(const json& j, const std::string& path) {
    Statement s;
    s.id = asInt(field(j, "id", path), path + ".id");
    s.location = loadLocation(field(j, "location", path), path + ".location");
    std::string kind = asString(field(j, "kind", path), path + ".kind");
    if (kind == "allocation") {
        s.kind = Statement::Kind::Allocation;
        s.targetVar = asString(field(j, "target", path), path + ".target");
        s.className = asString(field(j, "class", path), path + ".class");
        s.factoryName = asString(field(j, "factory", path), path + ".factory");
        const json& args = asArray(field(j, "args", path), path + ".args");
        for (size_t i = 0; i < args.size(); ++i)
            s.args.push_back(loadValue(args[i], path + ".args[" + std::to_string(i) + "]"));
    } else if (kind == "invocation") {
        s.kind = Statement::Kind::Invocation;
        s.targetVar = asString(field(j, "target", path), path + ".target");
        s.methodName = asString(field(j, "method", path), path + ".method");
        s.receiver = loadValue(field(j, "receiver", path), path + ".receiver");
        const json& args = asArray(field(j, "args", path), path + ".args");
        for (size_t i = 0; i < args.size(); ++i)
            s.args.push_back(loadValue(args[i], path + ".args[" + std::to_string(i) + "]"));
    } else if (kind == "assignment") {
        s.kind = Statement::Kind::Assignment;
        s.targetVar = asString(field(j, "target", path), path + ".target");
        s.source = loadValue(field(j, "source", path), path + ".source");
    } else if (kind == "return") {
        s.kind = Statement::Kind::Return;
        if (j.contains("value")) s.returnValue = loadValue(j["value"], path + ".value");
    } else {
        bad("unknown statement kind '" + kind + "'", path + ".kind");
    }
    return s;
}

MethodIR loadMethod(const json& j, const std::string& path) {
    MethodIR m;
    m.name = asString(field(j, "name", path), path + ".name");
    m.visibility = asString(field(j, "visibility", path), path + ".visibility");
    if (m.visibility != "public" && m.visibility != "private" && m.visibility != "protected" &&
        m.visibility != "package")
        bad("unknown visibility '" + m.visibility + "'", path + ".visibility");
    const json& params = asArray(field(j, "parameters", path), path + ".parameters");
    for (size_t i = 0; i < params.size(); ++i) {
        std::string p = path + ".parameters[" + std::to_string(i) + "]";
        m.parameters.push_back({asString(field(params[i], "name", p), p + ".name"),
                                asString(field(params[i], "type", p), p + ".type")});
    }
    m.entry = asInt(field(j, "entry", path), path + ".entry");
    const json& exits = asArray(field(j, "exits", path), path + ".exits");
    for (size_t i = 0; i < exits.size(); ++i)
        m.exits.push_back(asInt(exits[i], path + ".exits[" + std::to_string(i) + "]"));
    const json& ids = asArray(field(j, "identifiers", path), path + ".identifiers");
    for (size_t i = 0; i < ids.size(); ++i)
        m.identifiers.push_back(asString(ids[i], path + ".identifiers[" + std::to_string(i) + "]"));
    const json& blocks = asArray(field(j, "blocks", path), path + ".blocks");
    for (size_t i = 0; i < blocks.size(); ++i) {
        std::string bp = path + ".blocks[" + std::to_string(i) + "]";
        const json& jb = blocks[i];
        BasicBlock b;
        b.id = asInt(field(jb, "id", bp), bp + ".id");
        b.loopHeader = asBool(field(jb, "loopHeader", bp), bp + ".loopHeader");
        const json& succs = asArray(field(jb, "successors", bp), bp + ".successors");
        for (size_t k = 0; k < succs.size(); ++k)
            b.successors.push_back(asInt(succs[k], bp + ".successors[" + std::to_string(k) + "]"));
        const json& stmts = asArray(field(jb, "statements", bp), bp + ".statements");
        for (size_t k = 0; k < stmts.size(); ++k)
            b.statements.push_back(
                loadStatement(stmts[k], bp + ".statements[" + std::to_string(k) + "]"));
        m.blocks.push_back(std::move(b));
    }
    if (m.entry < 0 || m.entry >= static_cast<int>(m.blocks.size()))
        bad("entry block out of range", path + ".entry");
    for (size_t i = 0; i < m.blocks.size(); ++i) {
        if (m.blocks[i].id != static_cast<int>(i))
            bad("block ids must be dense and in order", path + ".blocks[" + std::to_string(i) + "].id");
        for (int succ : m.blocks[i].successors)
            if (succ < 0 || succ >= static_cast<int>(m.blocks.size()))
                bad("successor out of range", path + ".blocks[" + std::to_string(i) + "].successors");
    }
    return m;
}

}  // namespace

json dumpUnit(const CompilationUnitIR& unit) {
    json j;
    j["schemaVersion"] = kIrSchemaVersion;
    j["sourcePath"] = unit.sourcePath;
    j["packageName"] = unit.packageName;
    j["className"] = unit.className;
    j["methods"] = json::array();
    for (const auto& m : unit.methods) j["methods"].push_back(dumpMethod(m));
    j["diagnostics"] = json::array();
    for (const auto& d : unit.diagnostics)
        j["diagnostics"].push_back(json{{"construct", d.construct},
                                        {"message", d.message},
                                        {"location", dumpLocation(d.location)}});
    return j;
}

CompilationUnitIR loadUnit(const json& doc) {
    if (!doc.is_object()) bad("expected a top-level object", "");
    int version = asInt(field(doc, "schemaVersion", ""), "schemaVersion");
    if (version != kIrSchemaVersion)
        bad("unsupported schema version " + std::to_string(version), "schemaVersion");
    CompilationUnitIR unit;
    unit.sourcePath = asString(field(doc, "sourcePath", ""), "sourcePath");
    unit.packageName = asString(field(doc, "packageName", ""), "packageName");
    unit.className = asString(field(doc, "className", ""), "className");
    const json& methods = asArray(field(doc, "methods", ""), "methods");
    for (size_t i = 0; i < methods.size(); ++i)
        unit.methods.push_back(loadMethod(methods[i], "methods[" + std::to_string(i) + "]"));
    const json& diags = asArray(field(doc, "diagnostics", ""), "diagnostics");
    for (size_t i = 0; i < diags.size(); ++i) {
        std::string dp = "diagnostics[" + std::to_string(i) + "]";
        Diagnostic d;
        d.construct = asString(field(diags[i], "construct", dp), dp + ".construct");
        d.message = asString(field(diags[i], "message", dp), dp + ".message");
        d.location = loadLocation(field(diags[i], "location", dp), dp + ".location");
        unit.diagnostics.push_back(std::move(d));
    }
    return unit;
}

}  // namespace cryptolint
