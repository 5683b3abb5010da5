#include "cryptolint/analysis.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace cryptolint {

const char* errorTypeName(ErrorType t) {
    switch (t) {
        case ErrorType::ConstraintError: return "ConstraintError";
        case ErrorType::IncompleteOperationError: return "IncompleteOperationError";
        case ErrorType::RequiredPredicateError: return "RequiredPredicateError";
        case ErrorType::NeverTypeOfError: return "NeverTypeOfError";
        case ErrorType::ForbiddenMethodError: return "ForbiddenMethodError";
        case ErrorType::TypestateError: return "TypestateError";
    }
    return "ConstraintError";
}

std::optional<ErrorType> errorTypeFromName(const std::string& name) {
    for (int i = 0; i < kErrorTypeCount; ++i) {
        ErrorType t = static_cast<ErrorType>(i);
        if (name == errorTypeName(t)) return t;
    }
    return std::nullopt;
}

namespace {

constexpr long long kNoOrigin = LLONG_MIN;

// What a value is known to be at a program point: a compile-time constant
// (string, int, or constant array) and/or something whose bytes originate
// from a String.
struct Resolved {
    enum class Kind { None, Str, Int, CharArr };
    Kind kind = Kind::None;
    std::string s;
    long long i = 0;
    bool fromString = false;
    bool fromPublicParam = false;

    bool isConstant() const { return kind != Kind::None; }
    std::string display() const {
        switch (kind) {
            case Kind::Str: return "\"" + s + "\"";
            case Kind::Int: return std::to_string(i);
            case Kind::CharArr: return "constant array";
            case Kind::None: break;
        }
        return "";
    }
};

struct Transformation {
    bool malformed = false;
    bool defaulted = false;  // mode/padding filled in from JCA defaults
    std::string algorithm, mode, padding;
};

Transformation parseTransformation(const std::string& spec) {
    Transformation t;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == '/') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (const auto& p : parts)
        if (p.empty()) t.malformed = true;
    if (parts.size() == 1 && !t.malformed) {
        t.algorithm = parts[0];
        t.mode = "ECB";
        t.padding = "PKCS5Padding";
        t.defaulted = true;
    } else if (parts.size() == 3 && !t.malformed) {
        t.algorithm = parts[0];
        t.mode = parts[1];
        t.padding = parts[2];
    } else {
        t.malformed = true;
    }
    return t;
}

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool inSetCI(const std::string& value, const std::vector<std::string>& set) {
    std::string v = lowered(value);
    return std::any_of(set.begin(), set.end(),
                       [&](const std::string& e) { return lowered(e) == v; });
}

std::string joinSet(const std::vector<std::string>& set) {
    std::string out = "{";
    for (size_t i = 0; i < set.size(); ++i) {
        if (i) out += ", ";
        out += set[i];
    }
    return out + "}";
}

// A protocol instance: one tracked object along one path.
struct Lifecycle {
    const RuleSpec* rule = nullptr;
    int allocSite = -1;
    const Statement* allocStmt = nullptr;
    std::string displayVar;
    int state = 0;
    bool trackable = true;  // label was in the order alphabet at allocation
    bool broken = false;    // a TypestateError was recorded; tracking stops
    bool escaped = false;   // returned to the caller
    const Statement* lastEventStmt = nullptr;
    std::string lastEventLabel;
    // TypestateError details when broken:
    const Statement* tsStmt = nullptr;
    std::string tsLabel;
};

// Check identity across paths. kind: 0 constraint, 1 never-type, 2 forbidden,
// 3 required-predicate. idx distinguishes multiple specs at one site.
using SiteKey = std::tuple<int, int, int>;

struct SiteAccum {
    int total = 0;
    int violated = 0;
    bool cleanLoopPath = false;
    bool haveInfo = false;
    Finding info;
    int ownerAlloc = -1;
};

struct RpSample {
    std::vector<int> producers;  // allocation sites providing the predicate
    bool tookLoop = false;
};

struct RpAccum {
    std::vector<RpSample> samples;
    bool haveInfo = false;
    Finding info;
    int ownerAlloc = -1;
};

struct ProtocolAccum {
    int total = 0;
    int violated = 0;
    bool cleanLoopPath = false;
    bool haveInfo = false;
    Finding info;
};

struct PredInstance {
    std::string name;
    int producerAlloc = -1;
};

struct UnitAnalyzer {
    const CompilationUnitIR& unit;
    const RuleSet& rules;
    int pathBudget;
    AnalysisResult result;

    // reset per method
    const MethodIR* method = nullptr;
    std::map<int, ProtocolAccum> protocol;
    std::map<SiteKey, SiteAccum> sites;
    std::map<SiteKey, RpAccum> rpSites;
    std::map<int, std::string> bestVarName;  // allocSite -> display name

    UnitAnalyzer(const CompilationUnitIR& u, const RuleSet& r, int budget)
        : unit(u), rules(r), pathBudget(budget) {}

    void run() {
        for (const auto& m : unit.methods) analyzeMethod(m);
        std::sort(result.findings.begin(), result.findings.end(),
                  [](const Finding& a, const Finding& b) {
                      auto key = [](const Finding& f) {
                          return std::make_tuple(f.location.file, f.location.line,
                                                 f.location.column, static_cast<int>(f.errorType),
                                                 f.detail);
                      };
                      return key(a) < key(b);
                  });
    }

    void analyzeMethod(const MethodIR& m) {
        method = &m;
        protocol.clear();
        sites.clear();
        rpSites.clear();
        bestVarName.clear();

        PathSet ps = enumeratePaths(m, pathBudget);
        if (ps.truncated) {
            SourceLocation loc{unit.sourcePath, 1, 1};
            for (const auto& b : m.blocks) {
                if (!b.statements.empty()) {
                    loc = b.statements.front().location;
                    break;
                }
            }
            result.diagnostics.push_back(
                {"path-budget", "method " + m.name + ": path enumeration stopped at " +
                                    std::to_string(ps.paths.size()) +
                                    " paths; some execution orders were not checked",
                 loc});
        }
        for (const auto& path : ps.paths) walkPath(path);
        finalizeMethod();
    }

    // ---- per-path simulation ----

    struct PathState {
        std::map<std::string, Resolved> consts;
        std::map<std::string, long long> origins;
        std::map<std::string, int> aliases;  // var -> index into lcs
        std::vector<Lifecycle> lcs;
        std::map<long long, std::vector<PredInstance>> preds;
        bool tookLoop = false;
    };

    int paramIndexOf(const std::string& name) const {
        for (size_t i = 0; i < method->parameters.size(); ++i)
            if (method->parameters[i].name == name) return static_cast<int>(i);
        return -1;
    }

    Resolved resolve(const PathState& st, const ValueRef& v) const {
        Resolved r;
        switch (v.kind) {
            case ValueRef::Kind::StringLiteral:
                r.kind = Resolved::Kind::Str;
                r.s = v.stringValue;
                r.fromString = true;
                return r;
            case ValueRef::Kind::IntLiteral:
                r.kind = Resolved::Kind::Int;
                r.i = v.intValue;
                return r;
            case ValueRef::Kind::CharArrayLiteral:
                r.kind = Resolved::Kind::CharArr;
                return r;
            case ValueRef::Kind::Variable: {
                auto it = st.consts.find(v.name);
                if (it != st.consts.end()) return it->second;
                int pi = paramIndexOf(v.name);
                if (pi >= 0) {
                    if (method->parameters[pi].type == "String") {
                        r.fromString = true;
                        r.fromPublicParam = method->visibility == "public";
                    }
                    return r;
                }
                if (v.declaredType == "String") r.fromString = true;
                return r;
            }
            case ValueRef::Kind::CallResult:
            case ValueRef::Kind::Unknown:
                return r;
        }
        return r;
    }

    long long originOf(const PathState& st, const ValueRef& v) const {
        if (v.kind != ValueRef::Kind::Variable) return kNoOrigin;
        auto it = st.origins.find(v.name);
        if (it != st.origins.end()) return it->second;
        int pi = paramIndexOf(v.name);
        if (pi >= 0) return -(static_cast<long long>(pi) + 2);
        return kNoOrigin;
    }

    Finding baseFinding(const Lifecycle& lc, const Statement* stmt,
                        const std::string& label) const {
        Finding f;
        f.ruleClass = lc.rule->className;
        f.methodName = method->name;
        f.location = stmt->location;
        f.objectVar = lc.displayVar;
        f.eventLabel = label;
        return f;
    }

    void recordSite(SiteKey key, bool violated, bool tookLoop, int ownerAlloc,
                    const Finding* info) {
        SiteAccum& acc = sites[key];
        acc.total += 1;
        acc.ownerAlloc = ownerAlloc;
        if (violated) {
            acc.violated += 1;
            if (!acc.haveInfo && info) {
                acc.haveInfo = true;
                acc.info = *info;
            }
        } else if (tookLoop) {
            acc.cleanLoopPath = true;
        }
    }

    ParamKind paramKindAt(const Lifecycle& lc, const Statement* stmt, const std::string& callName,
                          int paramIndex) const {
        const EventPattern* pat =
            lc.rule->matchEventPattern(callName, static_cast<int>(stmt->args.size()));
        if (pat && paramIndex < pat->arity()) return pat->parameterKinds[paramIndex];
        return ParamKind::Wildcard;
    }

    // Constraint checks for one event occurrence.
    void checkConstraints(PathState& st, Lifecycle& lc, const Statement* stmt,
                          const std::string& label, const std::string& callName) {
        const auto& specs = lc.rule->constraints;
        std::set<int> malformedReported;  // paramIndex with malformed spec already filed
        for (size_t ci = 0; ci < specs.size(); ++ci) {
            const ConstraintSpec& c = specs[ci];
            if (c.targetEvent != label) continue;
            if (c.paramIndex >= static_cast<int>(stmt->args.size())) continue;
            Resolved v = resolve(st, stmt->args[c.paramIndex]);
            SiteKey key{stmt->id, 0, static_cast<int>(ci)};

            bool violated = false;
            Finding f = baseFinding(lc, stmt, label);
            f.errorType = ErrorType::ConstraintError;
            f.constraintKind = constraintKindName(c.kind);
            f.paramKind = paramKindAt(lc, stmt, callName, c.paramIndex);
            f.valueText = v.kind == Resolved::Kind::Str ? v.s : v.display();
            std::string argRef = "argument " + std::to_string(c.paramIndex) + " of " + label;

            switch (c.kind) {
                case ConstraintSpec::Kind::ValueInSet:
                    if (c.values.empty()) {
                        if (v.isConstant()) {
                            violated = true;
                            f.detail = argRef + " must not be a hard-coded constant (found " +
                                       v.display() + ")";
                        }
                    } else if (v.kind == Resolved::Kind::Str && !inSetCI(v.s, c.values)) {
                        violated = true;
                        f.detail = argRef + ": \"" + v.s + "\" is not in the allowed set " +
                                   joinSet(c.values);
                    } else if (v.kind == Resolved::Kind::Int &&
                               !inSetCI(std::to_string(v.i), c.values)) {
                        violated = true;
                        f.detail = argRef + ": " + std::to_string(v.i) +
                                   " is not in the allowed set " + joinSet(c.values);
                    }
                    break;
                case ConstraintSpec::Kind::ValueNotInSet:
                    if (v.kind == Resolved::Kind::Str && inSetCI(v.s, c.values)) {
                        violated = true;
                        f.detail = argRef + ": \"" + v.s + "\" is explicitly disallowed";
                    }
                    break;
                case ConstraintSpec::Kind::IntAtLeast:
                    if (v.kind == Resolved::Kind::Int && v.i < c.intBound) {
                        violated = true;
                        f.intValue = v.i;
                        f.detail = argRef + ": " + std::to_string(v.i) +
                                   " is below the required minimum of " +
                                   std::to_string(c.intBound);
                    }
                    break;
                case ConstraintSpec::Kind::TransformationComponentInSet: {
                    if (v.kind != Resolved::Kind::Str) break;
                    Transformation t = parseTransformation(v.s);
                    if (t.malformed) {
                        // one malformed finding per argument, not per component
                        if (malformedReported.count(c.paramIndex)) {
                            recordSite(key, false, st.tookLoop, lc.allocSite, nullptr);
                            continue;
                        }
                        malformedReported.insert(c.paramIndex);
                        violated = true;
                        f.detail = argRef + ": malformed transformation \"" + v.s + "\"";
                        break;
                    }
                    std::string compValue = c.component == ConstraintSpec::Component::Algorithm
                                                ? t.algorithm
                                            : c.component == ConstraintSpec::Component::Mode
                                                ? t.mode
                                                : t.padding;
                    if (!inSetCI(compValue, c.values)) {
                        // an explicit algorithm part is never "implied", even
                        // when the other components were defaulted
                        bool implied =
                            t.defaulted && c.component != ConstraintSpec::Component::Algorithm;
                        violated = true;
                        f.transformationComponent = componentName(c.component);
                        f.valueText = compValue;
                        f.defaulted = implied;
                        f.detail = std::string(componentName(c.component)) + " " + compValue +
                                   (implied ? " (implied by \"" + v.s + "\")" : "") +
                                   " is not in the allowed set " + joinSet(c.values);
                    }
                    break;
                }
            }
            recordSite(key, violated, st.tookLoop, lc.allocSite, violated ? &f : nullptr);
        }
    }

    void checkNeverType(PathState& st, Lifecycle& lc, const Statement* stmt,
                        const std::string& label, const std::string& callName) {
        const auto& specs = lc.rule->neverType;
        for (size_t ni = 0; ni < specs.size(); ++ni) {
            const NeverTypeSpec& n = specs[ni];
            if (n.targetEvent != label) continue;
            if (n.paramIndex >= static_cast<int>(stmt->args.size())) continue;
            Resolved v = resolve(st, stmt->args[n.paramIndex]);
            bool violated = v.fromString;
            Finding f;
            if (violated) {
                f = baseFinding(lc, stmt, label);
                f.errorType = ErrorType::NeverTypeOfError;
                f.paramKind = paramKindAt(lc, stmt, callName, n.paramIndex);
                f.apiForcedString = v.fromPublicParam;
                f.detail = "argument " + std::to_string(n.paramIndex) + " of " + label +
                           " must never originate from a String value";
            }
            recordSite({stmt->id, 1, static_cast<int>(ni)}, violated, st.tookLoop, lc.allocSite,
                       violated ? &f : nullptr);
        }
    }

    void checkRequires(PathState& st, Lifecycle& lc, const Statement* stmt,
                       const std::string& label, const std::string& callName) {
        const auto& specs = lc.rule->requiresSpecs;
        for (size_t ri = 0; ri < specs.size(); ++ri) {
            const PredicateSpec& r = specs[ri];
            if (r.binding != PredicateSpec::Binding::Param || r.eventLabel != label) continue;
            if (r.paramIndex >= static_cast<int>(stmt->args.size())) continue;

            RpSample sample;
            sample.tookLoop = st.tookLoop;
            long long origin = originOf(st, stmt->args[r.paramIndex]);
            if (origin != kNoOrigin) {
                auto it = st.preds.find(origin);
                if (it != st.preds.end())
                    for (const auto& p : it->second)
                        if (p.name == r.predicateName) sample.producers.push_back(p.producerAlloc);
            }
            RpAccum& acc = rpSites[{stmt->id, 3, static_cast<int>(ri)}];
            acc.ownerAlloc = lc.allocSite;
            acc.samples.push_back(std::move(sample));
            if (!acc.haveInfo) {
                acc.haveInfo = true;
                acc.info = baseFinding(lc, stmt, label);
                acc.info.errorType = ErrorType::RequiredPredicateError;
                acc.info.predicateName = r.predicateName;
                acc.info.paramKind = paramKindAt(lc, stmt, callName, r.paramIndex);
            }
        }
    }

    void applyEnsures(PathState& st, Lifecycle& lc, const Statement* stmt,
                      const std::string& label) {
        for (const auto& e : lc.rule->ensuresSpecs) {
            if (e.binding == PredicateSpec::Binding::ThisObject) continue;  // at allocation
            if (e.eventLabel != label) continue;
            if (e.binding == PredicateSpec::Binding::ReturnValue) {
                st.preds[stmt->id].push_back({e.predicateName, lc.allocSite});
            } else {
                if (e.paramIndex >= static_cast<int>(stmt->args.size())) continue;
                long long origin = originOf(st, stmt->args[e.paramIndex]);
                if (origin != kNoOrigin)
                    st.preds[origin].push_back({e.predicateName, lc.allocSite});
            }
        }
    }

    void recordForbidden(PathState& st, Lifecycle& lc, const Statement* stmt,
                         const std::string& callName) {
        Finding f = baseFinding(lc, stmt, "");
        f.errorType = ErrorType::ForbiddenMethodError;
        f.detail = "call to forbidden method " + callName + "/" +
                   std::to_string(stmt->args.size());
        recordSite({stmt->id, 2, 0}, true, st.tookLoop, lc.allocSite, &f);
    }

    // Shared by allocations and invocations once the event label is known.
    void processEvent(PathState& st, Lifecycle& lc, const Statement* stmt,
                      const std::string& label, const std::string& callName) {
        const TypestateAutomaton& a = lc.rule->automaton;
        if (a.labelIndex(label) >= 0) {
            int nextState = a.step(lc.state, label);
            if (nextState < 0) {
                lc.broken = true;
                lc.tsStmt = stmt;
                lc.tsLabel = label;
                return;  // out-of-order call: skip the site checks
            }
            lc.state = nextState;
        }
        lc.lastEventStmt = stmt;
        lc.lastEventLabel = label;
        checkConstraints(st, lc, stmt, label, callName);
        checkNeverType(st, lc, stmt, label, callName);
        checkRequires(st, lc, stmt, label, callName);
        applyEnsures(st, lc, stmt, label);
    }

    void walkPath(const ExecutionPath& path) {
        PathState st;
        st.tookLoop = path.tookLoop;

        for (const Statement* stmt : path.statements) {
            switch (stmt->kind) {
                case Statement::Kind::Allocation: handleAllocation(st, stmt); break;
                case Statement::Kind::Invocation: handleInvocation(st, stmt); break;
                case Statement::Kind::Assignment: handleAssignment(st, stmt); break;
                case Statement::Kind::Return:
                    if (stmt->returnValue && stmt->returnValue->kind == ValueRef::Kind::Variable) {
                        auto it = st.aliases.find(stmt->returnValue->name);
                        if (it != st.aliases.end()) st.lcs[it->second].escaped = true;
                    }
                    break;
            }
        }

        // Path-end sweep: protocol outcome per lifecycle instance.
        for (const Lifecycle& lc : st.lcs) {
            ProtocolAccum& acc = protocol[lc.allocSite];
            acc.total += 1;
            if (!bestVarName.count(lc.allocSite) || bestVarName[lc.allocSite].starts_with("$"))
                bestVarName[lc.allocSite] = lc.displayVar;

            bool violatedHere = false;
            if (lc.broken) {
                violatedHere = true;
                if (!acc.haveInfo) {
                    acc.haveInfo = true;
                    Finding f = baseFinding(lc, lc.tsStmt, lc.tsLabel);
                    f.errorType = ErrorType::TypestateError;
                    f.unexpectedEvent = lc.tsLabel;
                    std::vector<std::string> expected = lc.rule->automaton.expectedLabels(lc.state);
                    f.missingEvents = expected;
                    f.detail = "call to " + lc.tsLabel + " breaks the expected order";
                    if (!expected.empty()) {
                        f.detail += " (expected ";
                        for (size_t i = 0; i < expected.size(); ++i)
                            f.detail += (i ? ", " : "") + expected[i];
                        f.detail += ")";
                    }
                    acc.info = std::move(f);
                }
            } else if (!lc.escaped && lc.trackable &&
                       !lc.rule->automaton.accepting[lc.state]) {
                violatedHere = true;
                if (!acc.haveInfo) {
                    acc.haveInfo = true;
                    const Statement* anchor = lc.lastEventStmt ? lc.lastEventStmt : lc.allocStmt;
                    Finding f = baseFinding(lc, anchor, lc.lastEventLabel);
                    f.errorType = ErrorType::IncompleteOperationError;
                    f.missingEvents = lc.rule->automaton.expectedLabels(lc.state);
                    f.detail = "operation never completed; expected ";
                    for (size_t i = 0; i < f.missingEvents.size(); ++i)
                        f.detail += (i ? ", " : "") + f.missingEvents[i];
                    acc.info = std::move(f);
                }
            }
            if (violatedHere) {
                acc.violated += 1;
            } else if (st.tookLoop) {
                acc.cleanLoopPath = true;
            }
        }
    }

    // Binds targetVar to a fresh opaque value (new origin, no constant, no alias).
    void bindFresh(PathState& st, const std::string& var, long long origin) {
        if (var.empty()) return;
        st.consts[var] = Resolved{};
        st.origins[var] = origin;
        st.aliases.erase(var);
    }

    void handleAllocation(PathState& st, const Statement* stmt) {
        const RuleSpec* rule = rules.ruleFor(stmt->className);
        if (!rule) {
            bindFresh(st, stmt->targetVar, stmt->id);
            return;
        }

        int argc = static_cast<int>(stmt->args.size());
        std::string label = rule->matchEvent(stmt->factoryName, argc);
        bool forbidden = rule->matchesForbidden(stmt->factoryName, argc);
        if (label.empty() && !forbidden) {  // unmodeled static helper
            bindFresh(st, stmt->targetVar, stmt->id);
            return;
        }

        Lifecycle lc;
        lc.rule = rule;
        lc.allocSite = stmt->id;
        lc.allocStmt = stmt;
        lc.displayVar = stmt->targetVar;
        lc.state = rule->automaton.initial;

        // argument checks see the pre-assignment environment
        if (forbidden) recordForbidden(st, lc, stmt, stmt->factoryName);
        if (!label.empty()) {
            processEvent(st, lc, stmt, label, stmt->factoryName);
        } else {
            lc.trackable = false;  // forbidden-only constructor: no order tracking
        }
        // predicates the rule asserts about the object itself
        for (const auto& e : rule->ensuresSpecs)
            if (e.binding == PredicateSpec::Binding::ThisObject)
                st.preds[stmt->id].push_back({e.predicateName, lc.allocSite});

        st.lcs.push_back(lc);
        bindFresh(st, stmt->targetVar, stmt->id);
        if (!stmt->targetVar.empty())
            st.aliases[stmt->targetVar] = static_cast<int>(st.lcs.size()) - 1;
    }

    void handleInvocation(PathState& st, const Statement* stmt) {
        bool handled = false;
        if (stmt->receiver.kind == ValueRef::Kind::Variable) {
            auto it = st.aliases.find(stmt->receiver.name);
            if (it != st.aliases.end()) {
                Lifecycle& lc = st.lcs[it->second];
                handled = true;
                if (!lc.broken) {
                    int argc = static_cast<int>(stmt->args.size());
                    std::string label = lc.rule->matchEvent(stmt->methodName, argc);
                    bool forbidden = lc.rule->matchesForbidden(stmt->methodName, argc);
                    if (forbidden) {
                        recordForbidden(st, lc, stmt, stmt->methodName);
                        if (!label.empty() && lc.rule->automaton.labelIndex(label) >= 0) {
                            int nextState = lc.rule->automaton.step(lc.state, label);
                            if (nextState >= 0) lc.state = nextState;
                            lc.lastEventStmt = stmt;
                            lc.lastEventLabel = label;
                        }
                    } else if (!label.empty()) {
                        processEvent(st, lc, stmt, label, stmt->methodName);
                    }
                    // calls outside the rule vocabulary are ignored
                }
            }
        }

        // value/provenance effects of the result
        if (!handled && (stmt->methodName == "toCharArray" || stmt->methodName == "getBytes")) {
            Resolved recv = resolve(st, stmt->receiver);
            bool stringReceiver =
                recv.fromString || recv.kind == Resolved::Kind::Str ||
                (stmt->receiver.kind == ValueRef::Kind::Variable &&
                 stmt->receiver.declaredType == "String");
            if (stringReceiver && !stmt->targetVar.empty()) {
                Resolved r;
                r.kind = recv.kind == Resolved::Kind::Str ? Resolved::Kind::CharArr
                                                          : Resolved::Kind::None;
                r.s = recv.s;
                r.fromString = true;
                r.fromPublicParam = recv.fromPublicParam;
                st.origins[stmt->targetVar] = stmt->id;
                st.aliases.erase(stmt->targetVar);
                st.consts[stmt->targetVar] = std::move(r);
                return;
            }
        }
        if (!handled && (stmt->methodName == "getPrivate" || stmt->methodName == "getPublic")) {
            long long recvOrigin = originOf(st, stmt->receiver);
            if (recvOrigin != kNoOrigin) {
                auto pit = st.preds.find(recvOrigin);
                if (pit != st.preds.end()) st.preds[stmt->id] = pit->second;
            }
        }
        bindFresh(st, stmt->targetVar, stmt->id);
    }

    void handleAssignment(PathState& st, const Statement* stmt) {
        const ValueRef& src = stmt->source;
        st.consts[stmt->targetVar] = resolve(st, src);
        if (src.kind == ValueRef::Kind::Variable) {
            st.origins[stmt->targetVar] = originOf(st, src);
            auto it = st.aliases.find(src.name);
            if (it != st.aliases.end()) {
                st.aliases[stmt->targetVar] = it->second;
                Lifecycle& lc = st.lcs[it->second];
                if (lc.displayVar.starts_with("$") && !stmt->targetVar.starts_with("$"))
                    lc.displayVar = stmt->targetVar;
            } else {
                st.aliases.erase(stmt->targetVar);
            }
        } else {
            st.origins[stmt->targetVar] = stmt->id;
            st.aliases.erase(stmt->targetVar);
        }
    }

    // ---- cross-path merge ----

    void finalizeMethod() {
        // Predicate validity degrades when the producing object itself has
        // findings, which can include predicate findings; iterate to a fixed
        // point (monotone: the degraded set only grows).
        std::set<int> degraded;
        for (const auto& [alloc, acc] : protocol)
            if (acc.violated > 0) degraded.insert(alloc);
        for (const auto& [key, acc] : sites)
            if (acc.violated > 0 && acc.ownerAlloc >= 0) degraded.insert(acc.ownerAlloc);

        auto rpSampleViolated = [&](const RpSample& s) {
            if (s.producers.empty()) return true;
            return std::all_of(s.producers.begin(), s.producers.end(),
                               [&](int p) { return degraded.count(p) > 0; });
        };

        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& [key, acc] : rpSites) {
                bool anyViolated = std::any_of(acc.samples.begin(), acc.samples.end(),
                                               rpSampleViolated);
                if (anyViolated && acc.ownerAlloc >= 0 && !degraded.count(acc.ownerAlloc)) {
                    degraded.insert(acc.ownerAlloc);
                    changed = true;
                }
            }
        }

        auto polishVar = [&](Finding& f, int alloc) {
            auto it = bestVarName.find(alloc);
            if (it != bestVarName.end() && !it->second.starts_with("$")) f.objectVar = it->second;
            if (f.objectVar.starts_with("$")) f.objectVar.clear();
        };

        for (auto& [alloc, acc] : protocol) {
            if (acc.violated == 0) continue;
            Finding f = acc.info;
            f.pathFlags.existsOnAllPaths = acc.violated == acc.total;
            f.pathFlags.loopGuarded = acc.cleanLoopPath;
            polishVar(f, alloc);
            result.findings.push_back(std::move(f));
        }
        for (auto& [key, acc] : sites) {
            if (acc.violated == 0) continue;
            Finding f = acc.info;
            f.pathFlags.existsOnAllPaths = acc.violated == acc.total;
            f.pathFlags.loopGuarded = acc.cleanLoopPath;
            polishVar(f, acc.ownerAlloc);
            result.findings.push_back(std::move(f));
        }
        for (auto& [key, acc] : rpSites) {
            int violated = 0;
            bool cleanLoopPath = false;
            bool firstAbsent = false;
            bool haveFirst = false;
            for (const auto& s : acc.samples) {
                if (rpSampleViolated(s)) {
                    ++violated;
                    if (!haveFirst) {
                        haveFirst = true;
                        firstAbsent = s.producers.empty();
                    }
                } else if (s.tookLoop) {
                    cleanLoopPath = true;
                }
            }
            if (violated == 0) continue;
            Finding f = acc.info;
            f.detail = "argument of " + f.eventLabel + " lacks predicate " + f.predicateName;
            if (!firstAbsent)
                f.detail = "argument of " + f.eventLabel + ": predicate " + f.predicateName +
                           " comes from a misused object";
            f.pathFlags.existsOnAllPaths = violated == static_cast<int>(acc.samples.size());
            f.pathFlags.loopGuarded = cleanLoopPath;
            polishVar(f, acc.ownerAlloc);
            result.findings.push_back(std::move(f));
        }
    }
};

}  // namespace

AnalysisResult analyzeUnit(const CompilationUnitIR& unit, const RuleSet& rules, int pathBudget) {
    UnitAnalyzer analyzer(unit, rules, pathBudget);
    analyzer.run();
    return std::move(analyzer.result);
}

}  // namespace cryptolint
