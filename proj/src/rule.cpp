#include "cryptolint/rule.hpp"

#include <algorithm>

namespace cryptolint {

const char* paramKindName(ParamKind k) {
    switch (k) {
        case ParamKind::Secret: return "secret";
        case ParamKind::Data: return "data";
        case ParamKind::AlgorithmSpec: return "algorithm";
        case ParamKind::Key: return "key";
        case ParamKind::Salt: return "salt";
        case ParamKind::Iv: return "iv";
        case ParamKind::IterationCount: return "iterations";
        case ParamKind::Wildcard: return "_";
    }
    return "_";
}

std::optional<ParamKind> paramKindFromName(const std::string& name) {
    if (name == "secret") return ParamKind::Secret;
    if (name == "data") return ParamKind::Data;
    if (name == "algorithm") return ParamKind::AlgorithmSpec;
    if (name == "key") return ParamKind::Key;
    if (name == "salt") return ParamKind::Salt;
    if (name == "iv") return ParamKind::Iv;
    if (name == "iterations") return ParamKind::IterationCount;
    if (name == "_") return ParamKind::Wildcard;
    return std::nullopt;
}

const char* constraintKindName(ConstraintSpec::Kind k) {
    switch (k) {
        case ConstraintSpec::Kind::ValueInSet: return "value-in-set";
        case ConstraintSpec::Kind::ValueNotInSet: return "value-not-in-set";
        case ConstraintSpec::Kind::IntAtLeast: return "int-at-least";
        case ConstraintSpec::Kind::TransformationComponentInSet:
            return "transformation-component-in-set";
    }
    return "value-in-set";
}

const char* componentName(ConstraintSpec::Component c) {
    switch (c) {
        case ConstraintSpec::Component::Algorithm: return "algorithm";
        case ConstraintSpec::Component::Mode: return "mode";
        case ConstraintSpec::Component::Padding: return "padding";
    }
    return "algorithm";
}

int EventDecl::minArity() const {
    int m = patterns.empty() ? 0 : patterns.front().arity();
    for (const auto& p : patterns) m = std::min(m, p.arity());
    return m;
}

int TypestateAutomaton::labelIndex(const std::string& label) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), label);
    if (it == alphabet.end() || *it != label) return -1;
    return static_cast<int>(it - alphabet.begin());
}

int TypestateAutomaton::step(int state, const std::string& label) const {
    int li = labelIndex(label);
    if (li < 0 || state < 0 || state >= stateCount) return -1;
    auto it = transitions[state].find(li);
    if (it == transitions[state].end()) return -1;
    return it->second;
}

std::vector<std::string> TypestateAutomaton::expectedLabels(int state) const {
    std::vector<std::string> out;
    if (state < 0 || state >= stateCount) return out;
    for (auto [label, target] : transitions[state]) out.push_back(alphabet[label]);
    return out;  // sorted because label indices follow the sorted alphabet
}

const EventDecl* RuleSpec::findEvent(const std::string& label) const {
    for (const auto& e : events)
        if (e.label == label) return &e;
    return nullptr;
}

std::string RuleSpec::matchEvent(const std::string& methodName, int arity) const {
    for (const auto& e : events)
        for (const auto& p : e.patterns)
            if (p.methodName == methodName && p.arity() == arity) return e.label;
    return "";
}

const EventPattern* RuleSpec::matchEventPattern(const std::string& methodName, int arity) const {
    for (const auto& e : events)
        for (const auto& p : e.patterns)
            if (p.methodName == methodName && p.arity() == arity) return &p;
    return nullptr;
}

bool RuleSpec::matchesForbidden(const std::string& methodName, int arity) const {
    for (const auto& p : forbidden)
        if (p.methodName == methodName && p.arity() == arity) return true;
    return false;
}

std::string RuleSpec::simpleName() const {
    auto pos = className.rfind('.');
    return pos == std::string::npos ? className : className.substr(pos + 1);
}

bool RuleSpec::matchesClassName(const std::string& name) const {
    return name == className || name == simpleName();
}

const RuleSpec* RuleSet::ruleFor(const std::string& className) const {
    auto it = rules.find(className);
    if (it != rules.end()) return &it->second;
    for (const auto& [fqcn, rule] : rules)
        if (rule.matchesClassName(className)) return &rule;
    return nullptr;
}

}  // namespace cryptolint
