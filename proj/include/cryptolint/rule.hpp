#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cryptolint {

enum class ParamKind {
    Secret,
    Data,
    AlgorithmSpec,
    Key,
    Salt,
    Iv,
    IterationCount,
    Wildcard,
};

const char* paramKindName(ParamKind k);
std::optional<ParamKind> paramKindFromName(const std::string& name);

// Shape of a call that maps onto an event label. methodName "new" matches
// constructors; any other name matches both instance calls and static
// factories of that name. Arity is exact; parameterKinds has arity entries.
struct EventPattern {
    std::string methodName;
    std::vector<ParamKind> parameterKinds;

    int arity() const { return static_cast<int>(parameterKinds.size()); }
    friend bool operator==(const EventPattern&, const EventPattern&) = default;
};

// One event label with its alias patterns (several concrete signatures may
// share a label, e.g. update(data) and update(data, _, _)).
struct EventDecl {
    std::string label;
    std::vector<EventPattern> patterns;

    int minArity() const;
};

// Regular pattern over event labels.
struct OrderPattern {
    enum class Kind { Event, Concat, Alt, Star, Plus, Opt };

    Kind kind = Kind::Event;
    std::string label;                   // Event
    std::vector<OrderPattern> children;  // Concat/Alt: >=2, Star/Plus/Opt: 1

    static OrderPattern event(std::string label) {
        OrderPattern p;
        p.kind = Kind::Event;
        p.label = std::move(label);
        return p;
    }
    static OrderPattern node(Kind k, std::vector<OrderPattern> children) {
        OrderPattern p;
        p.kind = k;
        p.children = std::move(children);
        return p;
    }
};

// Deterministic automaton over the labels used in an ORDER pattern.
struct TypestateAutomaton {
    std::vector<std::string> alphabet;           // sorted, unique
    int stateCount = 0;
    int initial = 0;
    std::vector<bool> accepting;                 // indexed by state
    std::vector<std::map<int, int>> transitions; // state -> (label index -> state)

    int labelIndex(const std::string& label) const;
    // -1 if no transition.
    int step(int state, const std::string& label) const;
    std::vector<std::string> expectedLabels(int state) const;
};

struct ConstraintSpec {
    enum class Kind { ValueInSet, ValueNotInSet, IntAtLeast, TransformationComponentInSet };
    enum class Component { Algorithm, Mode, Padding };

    std::string targetEvent;
    int paramIndex = 0;
    Kind kind = Kind::ValueInSet;
    std::vector<std::string> values;  // ValueInSet / ValueNotInSet / TransformationComponentInSet
    long long intBound = 0;           // IntAtLeast
    Component component = Component::Algorithm;
};

const char* constraintKindName(ConstraintSpec::Kind k);
const char* componentName(ConstraintSpec::Component c);

struct PredicateSpec {
    enum class Binding { ThisObject, ReturnValue, Param };

    std::string predicateName;
    Binding binding = Binding::ThisObject;
    std::string eventLabel;  // ReturnValue / Param; "" for ThisObject
    int paramIndex = 0;      // Param
};

struct NeverTypeSpec {
    std::string targetEvent;
    int paramIndex = 0;
    std::string forbiddenSourceType = "String";
};

struct RuleSpec {
    std::string className;  // fully qualified
    std::vector<EventDecl> events;
    OrderPattern orderPattern;
    TypestateAutomaton automaton;
    std::vector<ConstraintSpec> constraints;
    std::vector<PredicateSpec> requiresSpecs;
    std::vector<PredicateSpec> ensuresSpecs;
    std::vector<EventPattern> forbidden;
    std::vector<NeverTypeSpec> neverType;
    std::string sourceFile;

    const EventDecl* findEvent(const std::string& label) const;
    // Label of the event matched by (methodName, arity), or "" when no
    // declared alias matches.
    std::string matchEvent(const std::string& methodName, int arity) const;
    const EventPattern* matchEventPattern(const std::string& methodName, int arity) const;
    bool matchesForbidden(const std::string& methodName, int arity) const;
    // True when the class name equals the rule class or its simple name.
    bool matchesClassName(const std::string& name) const;
    std::string simpleName() const;
};

struct RuleSet {
    std::map<std::string, RuleSpec> rules;  // keyed by fully qualified class name
    std::string packVersion = "0";

    // Rule matching an allocation's class name (fully qualified or simple).
    const RuleSpec* ruleFor(const std::string& className) const;
};

}  // namespace cryptolint
