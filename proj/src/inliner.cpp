#include "cryptolint/inliner.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cryptolint {

namespace {

bool isThisCall(const Statement& s) {
    return s.kind == Statement::Kind::Invocation && s.receiver.kind == ValueRef::Kind::Variable &&
           s.receiver.name == "this";
}

bool reassignsParameter(const MethodIR& m) {
    std::set<std::string> params;
    for (const auto& p : m.parameters) params.insert(p.name);
    for (const auto& b : m.blocks)
        for (const auto& s : b.statements)
            if (!s.targetVar.empty() && params.count(s.targetVar)) return true;
    return false;
}

ValueRef remapValue(const ValueRef& v, const std::map<std::string, ValueRef>& paramMap,
                    const std::string& prefix) {
    if (v.kind != ValueRef::Kind::Variable || v.name == "this") return v;
    auto it = paramMap.find(v.name);
    if (it != paramMap.end()) return it->second;
    ValueRef r = v;
    r.name = prefix + v.name;
    return r;
}

Statement remapStatement(const Statement& s, const std::map<std::string, ValueRef>& paramMap,
                         const std::string& prefix) {
    Statement r = s;
    if (!r.targetVar.empty() && r.targetVar != "this") r.targetVar = prefix + r.targetVar;
    r.receiver = remapValue(r.receiver, paramMap, prefix);
    for (auto& a : r.args) a = remapValue(a, paramMap, prefix);
    r.source = remapValue(r.source, paramMap, prefix);
    if (r.returnValue) r.returnValue = remapValue(*r.returnValue, paramMap, prefix);
    return r;
}

}  // namespace

void inlineHelpers(CompilationUnitIR& unit, int depth) {
    std::set<std::string> modified;
    std::set<std::pair<std::string, int>> diagnosedRecursion;
    std::map<std::string, int> inlineCounter;  // per caller, for fresh name prefixes

    for (int pass = 0; pass < depth; ++pass) {
        const std::vector<MethodIR> snapshot = unit.methods;
        auto findCallees = [&](const std::string& name, size_t arity) {
            std::vector<const MethodIR*> found;
            for (const auto& m : snapshot)
                if (m.name == name && m.parameters.size() == arity) found.push_back(&m);
            return found;
        };

        bool any = false;
        for (auto& caller : unit.methods) {
            for (auto& block : caller.blocks) {
                std::vector<Statement> rebuilt;
                bool changed = false;
                for (const Statement& call : block.statements) {
                    auto keep = [&] { rebuilt.push_back(call); };
                    if (!isThisCall(call)) {
                        keep();
                        continue;
                    }
                    auto callees = findCallees(call.methodName, call.args.size());
                    if (callees.size() != 1) {
                        keep();
                        continue;
                    }
                    const MethodIR& callee = *callees[0];
                    if (callee.name == caller.name &&
                        callee.parameters.size() == caller.parameters.size()) {
                        auto key = std::make_pair(caller.name, call.location.line);
                        if (diagnosedRecursion.insert(key).second)
                            unit.diagnostics.push_back(
                                {"recursive-helper",
                                 "call to " + call.methodName + " is recursive and stays opaque",
                                 call.location});
                        keep();
                        continue;
                    }
                    if (callee.blocks.size() != 1 || reassignsParameter(callee)) {
                        keep();
                        continue;
                    }

                    std::map<std::string, ValueRef> paramMap;
                    for (size_t k = 0; k < callee.parameters.size(); ++k)
                        paramMap[callee.parameters[k].name] = call.args[k];
                    std::string prefix =
                        "$inl" + std::to_string(inlineCounter[caller.name]++) + "_";

                    for (const auto& s : callee.blocks[0].statements) {
                        if (s.kind == Statement::Kind::Return) {
                            if (s.returnValue && !call.targetVar.empty()) {
                                Statement bind;
                                bind.kind = Statement::Kind::Assignment;
                                bind.location = call.location;
                                bind.targetVar = call.targetVar;
                                bind.source = remapValue(*s.returnValue, paramMap, prefix);
                                rebuilt.push_back(std::move(bind));
                            }
                            break;  // single block: the return is last
                        }
                        rebuilt.push_back(remapStatement(s, paramMap, prefix));
                    }
                    changed = true;
                    modified.insert(caller.name);
                    any = true;
                }
                if (changed) block.statements = std::move(rebuilt);
            }
        }
        if (!any) break;
    }

    // Inlined copies carry the callee's statement ids; renumber touched
    // methods so ids stay unique.
    for (auto& m : unit.methods) {
        if (!modified.count(m.name)) continue;
        int nextId = 0;
        for (auto& b : m.blocks)
            for (auto& s : b.statements) s.id = nextId++;
    }
}

}  // namespace cryptolint
