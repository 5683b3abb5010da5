#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "cryptolint/automaton.hpp"
#include "cryptolint/rule.hpp"
#include "cryptolint/rule_parser.hpp"
#include "oracle/pattern_oracle.hpp"

using namespace cryptolint;
namespace fs = std::filesystem;

namespace {

const char* kSignatureRule = R"(# Signing protocol
CLASS java.security.Signature

EVENTS
  getInstance = getInstance(algorithm)
  initSign = initSign(key)
  update = update(data)
  update = update(data, _, _)
  sign = sign()

ORDER
  getInstance (initSign update+ sign)+

CONSTRAINTS
  getInstance[0] not in {SHA1WithRSA, MD5WithRSA, "NONEwithRSA"}

REQUIRES
  generatedKey on initSign[0]

ENSURES
  signed on return of sign
)";

bool runAutomaton(const TypestateAutomaton& a, const std::vector<std::string>& seq) {
    int state = a.initial;
    for (const auto& label : seq) {
        state = a.step(state, label);
        if (state < 0) return false;
    }
    return a.accepting[state];
}

OrderPattern parseOrderOnly(const std::string& order) {
    std::string text = "CLASS X\nEVENTS\n";
    std::set<std::string> labels;
    for (char c : order)
        if (std::isalpha(static_cast<unsigned char>(c))) labels.insert(std::string(1, c));
    for (const auto& l : labels) text += "  " + l + " = " + l + "()\n";
    text += "ORDER\n  " + order + "\n";
    return parseRule(text, "inline.rule").orderPattern;
}

}  // namespace

TEST_CASE("signature rule parses with aliases, constraints and predicates") {
    RuleSpec rule = parseRule(kSignatureRule, "signature.rule");
    CHECK(rule.className == "java.security.Signature");
    CHECK(rule.simpleName() == "Signature");
    CHECK(rule.events.size() == 4);

    const EventDecl* update = rule.findEvent("update");
    REQUIRE(update != nullptr);
    CHECK(update->patterns.size() == 2);
    CHECK(update->minArity() == 1);

    CHECK(rule.matchEvent("update", 3) == "update");
    CHECK(rule.matchEvent("update", 2) == "");
    CHECK(rule.matchEvent("getInstance", 1) == "getInstance");

    REQUIRE(rule.constraints.size() == 1);
    CHECK(rule.constraints[0].kind == ConstraintSpec::Kind::ValueNotInSet);
    CHECK(rule.constraints[0].values ==
          std::vector<std::string>{"SHA1WithRSA", "MD5WithRSA", "NONEwithRSA"});

    REQUIRE(rule.requiresSpecs.size() == 1);
    CHECK(rule.requiresSpecs[0].predicateName == "generatedKey");
    CHECK(rule.requiresSpecs[0].binding == PredicateSpec::Binding::Param);
    CHECK(rule.requiresSpecs[0].eventLabel == "initSign");

    REQUIRE(rule.ensuresSpecs.size() == 1);
    CHECK(rule.ensuresSpecs[0].binding == PredicateSpec::Binding::ReturnValue);
    CHECK(rule.ensuresSpecs[0].eventLabel == "sign");
}

TEST_CASE("compiled signature automaton accepts exactly the protocol") {
    RuleSpec rule = parseRule(kSignatureRule, "signature.rule");
    const TypestateAutomaton& a = rule.automaton;

    CHECK(validateAutomaton(a).empty());
    CHECK(a.expectedLabels(a.initial) == std::vector<std::string>{"getInstance"});

    // Hand-enumerated membership for getInstance (initSign update+ sign)+
    CHECK_FALSE(runAutomaton(a, {}));
    CHECK_FALSE(runAutomaton(a, {"getInstance"}));
    CHECK_FALSE(runAutomaton(a, {"getInstance", "initSign"}));
    CHECK_FALSE(runAutomaton(a, {"getInstance", "initSign", "update"}));
    CHECK(runAutomaton(a, {"getInstance", "initSign", "update", "sign"}));
    CHECK_FALSE(runAutomaton(a, {"getInstance", "initSign", "sign"}));
    CHECK(runAutomaton(a, {"getInstance", "initSign", "update", "update", "sign"}));
    CHECK(runAutomaton(a, {"getInstance", "initSign", "update", "sign", "initSign", "update",
                           "sign"}));
    CHECK_FALSE(runAutomaton(a, {"getInstance", "getInstance"}));
    CHECK_FALSE(runAutomaton(a, {"initSign"}));
    CHECK_FALSE(runAutomaton(a, {"getInstance", "update"}));
}

TEST_CASE("a b* c automaton matches frozen enumeration up to length 4") {
    OrderPattern p = parseOrderOnly("a b* c");
    TypestateAutomaton a = compileOrder(p);

    std::set<std::vector<std::string>> accepted = {
        {"a", "c"},
        {"a", "b", "c"},
        {"a", "b", "b", "c"},
    };
    for (const auto& seq : oracle::allSequences({"a", "b", "c"}, 4)) {
        CAPTURE(seq);
        CHECK(runAutomaton(a, seq) == (accepted.count(seq) > 0));
    }
}

TEST_CASE("compiling the same pattern twice is deterministic") {
    OrderPattern p = parseOrderOnly("(a | b c)+ d?");
    TypestateAutomaton first = compileOrder(p);
    TypestateAutomaton second = compileOrder(p);
    CHECK(first.alphabet == second.alphabet);
    CHECK(first.stateCount == second.stateCount);
    CHECK(first.accepting == second.accepting);
    CHECK(first.transitions == second.transitions);
}

TEST_CASE("random patterns agree with both reference matchers") {
    std::mt19937 rng(20260815);
    std::vector<std::string> alphabet = {"a", "b", "c", "d"};
    auto sequences = oracle::allSequences(alphabet, 5);
    for (int i = 0; i < 120; ++i) {
        OrderPattern p = oracle::randomPattern(rng, 4, alphabet);
        TypestateAutomaton a = compileOrder(p);
        for (const auto& issue : validateAutomaton(a)) {
            CAPTURE(issue.message);
            CHECK(false);
        }
        for (const auto& seq : sequences) {
            bool viaDfa = runAutomaton(a, seq);
            bool viaPosSet = oracle::posSetMatch(p, seq);
            bool viaDeriv = oracle::derivMatch(p, seq);
            if (viaDfa != viaPosSet || viaDfa != viaDeriv) {
                CAPTURE(i);
                CAPTURE(seq);
                REQUIRE(viaDfa == viaPosSet);
                REQUIRE(viaDfa == viaDeriv);
            }
        }
    }
}

TEST_CASE("parse errors carry position and expectations") {
    SUBCASE("missing CLASS header") {
        try {
            parseRule("EVENTS\n  a = a()\nORDER a\n", "bad.rule");
            FAIL("expected RuleParseError");
        } catch (const RuleParseError& e) {
            CHECK(e.line == 1);
            CHECK(e.expected == std::vector<std::string>{"CLASS"});
        }
    }
    SUBCASE("syntax error inside events") {
        try {
            parseRule("CLASS X\nEVENTS\n  a getInstance()\nORDER a\n", "bad.rule");
            FAIL("expected RuleParseError");
        } catch (const RuleParseError& e) {
            CHECK(e.line == 3);
            CHECK_FALSE(e.expected.empty());
        }
    }
    SUBCASE("undeclared label in ORDER") {
        CHECK_THROWS_AS(parseRule("CLASS X\nEVENTS\n  a = a()\nORDER a b\n", "bad.rule"),
                        RuleParseError);
    }
    SUBCASE("constraint parameter out of range") {
        CHECK_THROWS_AS(
            parseRule("CLASS X\nEVENTS\n  a = a(data)\nORDER a\nCONSTRAINTS\n  a[1] in {x}\n",
                      "bad.rule"),
            RuleParseError);
    }
    SUBCASE("constraint index checked against the smallest alias arity") {
        CHECK_THROWS_AS(parseRule("CLASS X\nEVENTS\n  a = a(data)\n  a = a(data, data)\n"
                                  "ORDER a\nCONSTRAINTS\n  a[1] in {x}\n",
                                  "bad.rule"),
                        RuleParseError);
    }
    SUBCASE("same method and arity under two labels") {
        CHECK_THROWS_AS(
            parseRule("CLASS X\nEVENTS\n  a = run(data)\n  b = run(data)\nORDER a b\n", "bad.rule"),
            RuleParseError);
    }
    SUBCASE("unknown parameter kind") {
        CHECK_THROWS_AS(parseRule("CLASS X\nEVENTS\n  a = a(widget)\nORDER a\n", "bad.rule"),
                        RuleParseError);
    }
    SUBCASE("unterminated string") {
        CHECK_THROWS_AS(
            parseRule("CLASS X\nEVENTS\n  a = a(data)\nORDER a\nCONSTRAINTS\n  a[0] in {\"x}\n",
                      "bad.rule"),
            RuleParseError);
    }
    SUBCASE("sections out of order are rejected") {
        CHECK_THROWS_AS(parseRule("CLASS X\nEVENTS\n  a = a()\nORDER a\nREQUIRES\n  p on a[0]\n"
                                  "CONSTRAINTS\n  a[0] in {x}\n",
                                  "bad.rule"),
                        RuleParseError);
    }
}

TEST_CASE("forbidden section accepts labels and inline patterns") {
    RuleSpec rule = parseRule(
        "CLASS X\nEVENTS\n  create = new(secret, salt, iterations)\n  bare = new(secret)\n"
        "ORDER (create | bare)\nFORBIDDEN\n  bare\n  reset(data)\n",
        "x.rule");
    REQUIRE(rule.forbidden.size() == 2);
    CHECK(rule.forbidden[0].methodName == "new");
    CHECK(rule.forbidden[0].arity() == 1);
    CHECK(rule.forbidden[1].methodName == "reset");
    CHECK(rule.matchesForbidden("new", 1));
    CHECK_FALSE(rule.matchesForbidden("new", 3));
}

TEST_CASE("rule pack loading") {
    fs::path dir = fs::temp_directory_path() / "cryptolint_rulelang_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    SUBCASE("empty directory yields empty set plus warning") {
        RulePackResult result = loadRulePack(dir);
        CHECK(result.ruleSet.rules.empty());
        REQUIRE(result.warnings.size() == 1);
        CHECK(result.warnings[0].construct == "empty-rule-pack");
    }

    SUBCASE("rules load sorted by class name and read pack.version") {
        std::ofstream(dir / "b.rule") << "CLASS com.example.Beta\nEVENTS\n  a = a()\nORDER a\n";
        std::ofstream(dir / "a.rule") << "CLASS com.example.Alpha\nEVENTS\n  a = a()\nORDER a\n";
        std::ofstream(dir / "pack.version") << "2026.08\n";
        RulePackResult result = loadRulePack(dir);
        CHECK(result.warnings.empty());
        CHECK(result.ruleSet.packVersion == "2026.08");
        REQUIRE(result.ruleSet.rules.size() == 2);
        CHECK(result.ruleSet.rules.begin()->first == "com.example.Alpha");
        CHECK(result.ruleSet.ruleFor("Beta") != nullptr);
        CHECK(result.ruleSet.ruleFor("com.example.Beta") != nullptr);
        CHECK(result.ruleSet.ruleFor("Gamma") == nullptr);
    }

    SUBCASE("duplicate class names are rejected") {
        std::ofstream(dir / "one.rule") << "CLASS com.example.Dup\nEVENTS\n  a = a()\nORDER a\n";
        std::ofstream(dir / "two.rule") << "CLASS com.example.Dup\nEVENTS\n  b = b()\nORDER b\n";
        CHECK_THROWS_AS(loadRulePack(dir), RuleParseError);
    }

    fs::remove_all(dir);
}

TEST_CASE("automaton validation flags defects in hand-built automata") {
    TypestateAutomaton a;
    a.alphabet = {"x"};
    a.stateCount = 3;
    a.initial = 0;
    a.accepting = {false, true, true};  // state 2 unreachable
    a.transitions.resize(3);
    a.transitions[0][0] = 1;

    auto issues = validateAutomaton(a);
    REQUIRE_FALSE(issues.empty());
    bool sawUnreachable = false;
    for (const auto& issue : issues)
        sawUnreachable = sawUnreachable || issue.message.find("unreachable") != std::string::npos;
    CHECK(sawUnreachable);

    SUBCASE("dead state detected") {
        TypestateAutomaton b;
        b.alphabet = {"x"};
        b.stateCount = 2;
        b.initial = 0;
        b.accepting = {true, false};
        b.transitions.resize(2);
        b.transitions[0][0] = 1;  // state 1 can never accept
        auto deadIssues = validateAutomaton(b);
        REQUIRE_FALSE(deadIssues.empty());
        CHECK(deadIssues[0].message.find("cannot reach an accepting state") != std::string::npos);
    }
}
