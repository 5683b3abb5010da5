#include "cryptolint/rule_parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "cryptolint/automaton.hpp"

namespace cryptolint {

namespace {

const std::set<std::string> kSectionHeaders = {
    "CLASS", "EVENTS", "ORDER", "CONSTRAINTS", "REQUIRES", "ENSURES", "FORBIDDEN", "NEVERTYPE",
};

struct Token {
    enum class Kind { Word, Int, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long long intValue = 0;
    int line = 1;
    int column = 1;
};

bool isWordChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '/' ||
           c == '_' || c == '$';
}

std::vector<Token> lex(const std::string& text, const std::string& fileName) {
    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            size_t end = text.find('\n', i);
            advance((end == std::string::npos ? text.size() : end) - i);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = column;
        if (c == '"') {
            size_t j = i + 1;
            std::string value;
            while (j < text.size() && text[j] != '"' && text[j] != '\n') value += text[j++];
            if (j >= text.size() || text[j] != '"')
                throw RuleParseError("unterminated string literal", fileName, line, column);
            t.kind = Token::Kind::String;
            t.text = value;
            tokens.push_back(t);
            advance(j + 1 - i);
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            size_t j = i;
            while (j < text.size() && isWordChar(text[j])) ++j;
            std::string word = text.substr(i, j - i);
            if (std::all_of(word.begin(), word.end(),
                            [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
                t.kind = Token::Kind::Int;
                t.intValue = std::stoll(word);
            } else {
                t.kind = Token::Kind::Word;
            }
            t.text = word;
            tokens.push_back(t);
            advance(j - i);
            continue;
        }
        if (std::string("=()[]{},|*+?").find(c) != std::string::npos) {
            t.kind = Token::Kind::Punct;
            t.text = std::string(1, c);
            tokens.push_back(t);
            advance(1);
            continue;
        }
        throw RuleParseError(std::string("unexpected character '") + c + "'", fileName, line, column);
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.column = column;
    tokens.push_back(end);
    return tokens;
}

class RuleParser {
  public:
    RuleParser(std::vector<Token> tokens, std::string fileName)
        : tokens_(std::move(tokens)), file_(std::move(fileName)) {}

    RuleSpec parse() {
        RuleSpec rule;
        rule.sourceFile = file_;

        expectHeader("CLASS");
        rule.className = expectWord("class name");

        expectHeader("EVENTS");
        while (atEventLine()) parseEventLine(rule);
        if (rule.events.empty()) fail("expected at least one event declaration", {"label"});

        expectHeader("ORDER");
        rule.orderPattern = parseAlt();

        if (atHeader("CONSTRAINTS")) {
            next();
            while (atEventLine()) rule.constraints.push_back(parseConstraintLine(rule));
        }
        if (atHeader("REQUIRES")) {
            next();
            while (atEventLine()) rule.requiresSpecs.push_back(parseRequiresLine());
        }
        if (atHeader("ENSURES")) {
            next();
            while (atEventLine()) rule.ensuresSpecs.push_back(parseEnsuresLine());
        }
        if (atHeader("FORBIDDEN")) {
            next();
            while (atEventLine()) parseForbiddenLine(rule);
        }
        if (atHeader("NEVERTYPE")) {
            next();
            while (atEventLine()) rule.neverType.push_back(parseNeverTypeLine());
        }
        if (peek().kind != Token::Kind::End)
            fail("unexpected token '" + peek().text + "'",
                 {"CONSTRAINTS", "REQUIRES", "ENSURES", "FORBIDDEN", "NEVERTYPE", "end of file"});

        validate(rule);
        rule.automaton = compileOrder(rule.orderPattern);
        return rule;
    }

  private:
    std::vector<Token> tokens_;
    std::string file_;
    size_t pos_ = 0;

    const Token& peek(int ahead = 0) const {
        size_t p = pos_ + static_cast<size_t>(ahead);
        return p < tokens_.size() ? tokens_[p] : tokens_.back();
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
        throw RuleParseError(msg, file_, peek().line, peek().column, std::move(expected));
    }

    bool atHeader(const std::string& name) const {
        return peek().kind == Token::Kind::Word && peek().text == name;
    }
    bool atAnyHeader() const {
        return peek().kind == Token::Kind::Word && kSectionHeaders.count(peek().text) > 0;
    }
    bool atEventLine() const { return peek().kind == Token::Kind::Word && !atAnyHeader(); }

    void expectHeader(const std::string& name) {
        if (!atHeader(name)) fail("expected section header " + name, {name});
        next();
    }
    std::string expectWord(const std::string& what) {
        if (peek().kind != Token::Kind::Word) fail("expected " + what, {what});
        return next().text;
    }
    void expectPunct(const std::string& p) {
        if (peek().kind != Token::Kind::Punct || peek().text != p)
            fail("expected '" + p + "'", {p});
        next();
    }
    bool atPunct(const std::string& p) const {
        return peek().kind == Token::Kind::Punct && peek().text == p;
    }
    long long expectInt() {
        if (peek().kind != Token::Kind::Int) fail("expected integer", {"integer"});
        return next().intValue;
    }

    // label = methodName(kind, ...)
    void parseEventLine(RuleSpec& rule) {
        std::string label = expectWord("event label");
        expectPunct("=");
        EventPattern pattern;
        pattern.methodName = expectWord("method name");
        expectPunct("(");
        if (!atPunct(")")) {
            while (true) {
                std::string kindWord = expectWord("parameter kind");
                auto kind = paramKindFromName(kindWord);
                if (!kind)
                    fail("unknown parameter kind '" + kindWord + "'",
                         {"secret", "data", "algorithm", "key", "salt", "iv", "iterations", "_"});
                pattern.parameterKinds.push_back(*kind);
                if (atPunct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expectPunct(")");

        for (auto& decl : rule.events) {
            if (decl.label == label) {
                decl.patterns.push_back(pattern);
                return;
            }
        }
        rule.events.push_back({label, {pattern}});
    }

    OrderPattern parseAlt() {
        std::vector<OrderPattern> branches;
        branches.push_back(parseConcat());
        while (atPunct("|")) {
            next();
            branches.push_back(parseConcat());
        }
        if (branches.size() == 1) return std::move(branches.front());
        return OrderPattern::node(OrderPattern::Kind::Alt, std::move(branches));
    }

    OrderPattern parseConcat() {
        std::vector<OrderPattern> parts;
        while (atEventLine() || atPunct("(")) parts.push_back(parsePostfix());
        if (parts.empty()) fail("expected event pattern", {"label", "("});
        if (parts.size() == 1) return std::move(parts.front());
        return OrderPattern::node(OrderPattern::Kind::Concat, std::move(parts));
    }

    OrderPattern parsePostfix() {
        OrderPattern p = parseAtom();
        while (atPunct("*") || atPunct("+") || atPunct("?")) {
            std::string op = next().text;
            OrderPattern::Kind k = op == "*"   ? OrderPattern::Kind::Star
                                   : op == "+" ? OrderPattern::Kind::Plus
                                               : OrderPattern::Kind::Opt;
            p = OrderPattern::node(k, {std::move(p)});
        }
        return p;
    }

    OrderPattern parseAtom() {
        if (atPunct("(")) {
            next();
            OrderPattern inner = parseAlt();
            expectPunct(")");
            return inner;
        }
        if (atEventLine()) return OrderPattern::event(next().text);
        fail("expected event label or '('", {"label", "("});
    }

    // label[idx], shared by several sections.
    std::pair<std::string, int> parseEventParamRef() {
        std::string label = expectWord("event label");
        expectPunct("[");
        int idx = static_cast<int>(expectInt());
        expectPunct("]");
        return {label, idx};
    }

    std::vector<std::string> parseValueSet() {
        expectPunct("{");
        std::vector<std::string> values;
        if (!atPunct("}")) {
            while (true) {
                if (peek().kind == Token::Kind::String || peek().kind == Token::Kind::Word ||
                    peek().kind == Token::Kind::Int) {
                    values.push_back(next().text);
                } else {
                    fail("expected set value", {"string", "identifier"});
                }
                if (atPunct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expectPunct("}");
        return values;
    }

    ConstraintSpec parseConstraintLine(const RuleSpec& rule) {
        (void)rule;
        ConstraintSpec spec;
        auto [label, idx] = parseEventParamRef();
        spec.targetEvent = label;
        spec.paramIndex = idx;

        if (peek().kind != Token::Kind::Word)
            fail("expected constraint", {"in", "not", "at", "algorithm", "mode", "padding"});
        std::string word = peek().text;
        if (word == "in") {
            next();
            spec.kind = ConstraintSpec::Kind::ValueInSet;
            spec.values = parseValueSet();
        } else if (word == "not") {
            next();
            if (expectWord("'in'") != "in") fail("expected 'in' after 'not'", {"in"});
            spec.kind = ConstraintSpec::Kind::ValueNotInSet;
            spec.values = parseValueSet();
        } else if (word == "at") {
            next();
            if (expectWord("'least'") != "least") fail("expected 'least' after 'at'", {"least"});
            spec.kind = ConstraintSpec::Kind::IntAtLeast;
            spec.intBound = expectInt();
        } else if (word == "algorithm" || word == "mode" || word == "padding") {
            next();
            spec.kind = ConstraintSpec::Kind::TransformationComponentInSet;
            spec.component = word == "algorithm" ? ConstraintSpec::Component::Algorithm
                             : word == "mode"    ? ConstraintSpec::Component::Mode
                                                 : ConstraintSpec::Component::Padding;
            if (expectWord("'in'") != "in") fail("expected 'in'", {"in"});
            spec.values = parseValueSet();
        } else {
            fail("unknown constraint form '" + word + "'",
                 {"in", "not in", "at least", "algorithm in", "mode in", "padding in"});
        }
        return spec;
    }

    PredicateSpec parseRequiresLine() {
        PredicateSpec spec;
        spec.predicateName = expectWord("predicate name");
        if (expectWord("'on'") != "on") fail("expected 'on'", {"on"});
        auto [label, idx] = parseEventParamRef();
        spec.binding = PredicateSpec::Binding::Param;
        spec.eventLabel = label;
        spec.paramIndex = idx;
        return spec;
    }

    PredicateSpec parseEnsuresLine() {
        PredicateSpec spec;
        spec.predicateName = expectWord("predicate name");
        if (expectWord("'on'") != "on") fail("expected 'on'", {"on"});
        if (atHeader("this") || (peek().kind == Token::Kind::Word && peek().text == "this")) {
            next();
            spec.binding = PredicateSpec::Binding::ThisObject;
            return spec;
        }
        if (peek().kind == Token::Kind::Word && peek().text == "return") {
            next();
            if (expectWord("'of'") != "of") fail("expected 'of'", {"of"});
            spec.binding = PredicateSpec::Binding::ReturnValue;
            spec.eventLabel = expectWord("event label");
            return spec;
        }
        auto [label, idx] = parseEventParamRef();
        spec.binding = PredicateSpec::Binding::Param;
        spec.eventLabel = label;
        spec.paramIndex = idx;
        return spec;
    }

    void parseForbiddenLine(RuleSpec& rule) {
        std::string word = expectWord("event label or method pattern");
        if (atPunct("(")) {
            EventPattern pattern;
            pattern.methodName = word;
            next();
            if (!atPunct(")")) {
                while (true) {
                    std::string kindWord = expectWord("parameter kind");
                    auto kind = paramKindFromName(kindWord);
                    if (!kind) fail("unknown parameter kind '" + kindWord + "'");
                    pattern.parameterKinds.push_back(*kind);
                    if (atPunct(",")) {
                        next();
                        continue;
                    }
                    break;
                }
            }
            expectPunct(")");
            rule.forbidden.push_back(pattern);
            return;
        }
        const EventDecl* decl = rule.findEvent(word);
        if (!decl)
            throw RuleParseError("forbidden section references undeclared event '" + word + "'",
                                 file_, peek().line, peek().column);
        for (const auto& p : decl->patterns) rule.forbidden.push_back(p);
    }

    NeverTypeSpec parseNeverTypeLine() {
        NeverTypeSpec spec;
        auto [label, idx] = parseEventParamRef();
        spec.targetEvent = label;
        spec.paramIndex = idx;
        if (peek().kind == Token::Kind::Word && !atAnyHeader() && peek().text == "String") next();
        return spec;
    }

    void checkLabelRef(const RuleSpec& rule, const std::string& label, const std::string& where,
                       int paramIndex = -1) const {
        const EventDecl* decl = rule.findEvent(label);
        if (!decl)
            throw RuleParseError(where + " references undeclared event '" + label + "'", file_,
                                 1, 1);
        if (paramIndex >= 0 && paramIndex >= decl->minArity())
            throw RuleParseError(where + " references parameter " + std::to_string(paramIndex) +
                                     " of event '" + label + "' (arity " +
                                     std::to_string(decl->minArity()) + ")",
                                 file_, 1, 1);
    }

    void collectOrderLabels(const OrderPattern& p, std::vector<std::string>& out) const {
        if (p.kind == OrderPattern::Kind::Event) {
            out.push_back(p.label);
            return;
        }
        for (const auto& c : p.children) collectOrderLabels(c, out);
    }

    void validate(const RuleSpec& rule) const {
        for (const auto& decl : rule.events) {
            if (kSectionHeaders.count(decl.label))
                throw RuleParseError("event label '" + decl.label + "' is reserved", file_, 1, 1);
        }
        // No two labels may claim the same (method, arity); duplicate aliases
        // within one label are rejected too.
        std::map<std::pair<std::string, int>, std::string> seen;
        for (const auto& decl : rule.events) {
            for (const auto& p : decl.patterns) {
                auto key = std::make_pair(p.methodName, p.arity());
                auto [it, inserted] = seen.emplace(key, decl.label);
                if (!inserted)
                    throw RuleParseError("pattern " + p.methodName + "/" +
                                             std::to_string(p.arity()) +
                                             " declared twice (labels '" + it->second + "' and '" +
                                             decl.label + "')",
                                         file_, 1, 1);
            }
        }

        std::vector<std::string> orderLabels;
        collectOrderLabels(rule.orderPattern, orderLabels);
        for (const auto& l : orderLabels) checkLabelRef(rule, l, "ORDER");
        for (const auto& c : rule.constraints)
            checkLabelRef(rule, c.targetEvent, "CONSTRAINTS", c.paramIndex);
        for (const auto& r : rule.requiresSpecs)
            checkLabelRef(rule, r.eventLabel, "REQUIRES", r.paramIndex);
        for (const auto& e : rule.ensuresSpecs) {
            if (e.binding == PredicateSpec::Binding::ReturnValue)
                checkLabelRef(rule, e.eventLabel, "ENSURES");
            else if (e.binding == PredicateSpec::Binding::Param)
                checkLabelRef(rule, e.eventLabel, "ENSURES", e.paramIndex);
        }
        for (const auto& n : rule.neverType)
            checkLabelRef(rule, n.targetEvent, "NEVERTYPE", n.paramIndex);
    }
};

}  // namespace

RuleSpec parseRule(const std::string& text, const std::string& fileName) {
    return RuleParser(lex(text, fileName), fileName).parse();
}

RulePackResult loadRulePack(const std::filesystem::path& directory) {
    namespace fs = std::filesystem;
    RulePackResult result;

    std::error_code ec;
    if (!fs::is_directory(directory, ec))
        throw RuleParseError("rule pack directory not found: " + directory.string(),
                             directory.string(), 1, 1);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".rule")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
        std::ifstream in(path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        RuleSpec rule = parseRule(buffer.str(), path.filename().string());
        auto [it, inserted] = result.ruleSet.rules.emplace(rule.className, std::move(rule));
        if (!inserted)
            throw RuleParseError("duplicate rule for class " + it->first + " (" +
                                     path.filename().string() + " and " +
                                     it->second.sourceFile + ")",
                                 path.filename().string(), 1, 1);
    }

    if (result.ruleSet.rules.empty()) {
        Diagnostic d;
        d.construct = "empty-rule-pack";
        d.message = "no .rule files found in " + directory.string();
        d.location.file = directory.string();
        result.warnings.push_back(d);
    }

    std::ifstream versionFile(directory / "pack.version");
    if (versionFile) {
        std::string v;
        std::getline(versionFile, v);
        while (!v.empty() && (v.back() == '\r' || v.back() == ' ')) v.pop_back();
        if (!v.empty()) result.ruleSet.packVersion = v;
    }
    return result;
}

}  // namespace cryptolint
