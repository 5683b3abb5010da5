#include "cryptolint/java_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <set>

namespace cryptolint {

namespace {

struct Token {
    enum class Kind { Ident, IntLit, StringLit, CharLit, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long long intValue = 0;
    int line = 1;
    int column = 1;
};

const std::set<std::string> kModifiers = {
    "public", "private", "protected", "static",   "final",    "abstract",
    "native", "strictfp", "transient", "volatile", "synchronized", "default",
};

const std::set<std::string> kPrimitiveTypes = {
    "int", "byte", "char", "long", "short", "double", "float", "boolean", "void",
};

std::vector<Token> lexJava(const std::string& src, const std::string& file) {
    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    size_t i = 0;
    auto step = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            step(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            size_t end = src.find('\n', i);
            step((end == std::string::npos ? src.size() : end) - i);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            size_t end = src.find("*/", i + 2);
            if (end == std::string::npos) throw JavaParseError("unterminated comment", file, line, column);
            step(end + 2 - i);
            continue;
        }
        Token t;
        t.line = line;
        t.column = column;
        if (c == '"') {
            std::string value;
            size_t j = i + 1;
            while (j < src.size() && src[j] != '"') {
                if (src[j] == '\\' && j + 1 < src.size()) {
                    char e = src[j + 1];
                    value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    j += 2;
                } else {
                    if (src[j] == '\n')
                        throw JavaParseError("unterminated string literal", file, line, column);
                    value += src[j++];
                }
            }
            if (j >= src.size()) throw JavaParseError("unterminated string literal", file, line, column);
            t.kind = Token::Kind::StringLit;
            t.text = value;
            tokens.push_back(t);
            step(j + 1 - i);
            continue;
        }
        if (c == '\'') {
            size_t j = i + 1;
            std::string value;
            while (j < src.size() && src[j] != '\'') {
                if (src[j] == '\\' && j + 1 < src.size()) {
                    value += src[j + 1];
                    j += 2;
                } else {
                    value += src[j++];
                }
            }
            if (j >= src.size()) throw JavaParseError("unterminated char literal", file, line, column);
            t.kind = Token::Kind::CharLit;
            t.text = value;
            tokens.push_back(t);
            step(j + 1 - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            int base = 10;
            if (c == '0' && j + 1 < src.size() && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
                base = 16;
                j += 2;
            }
            size_t digitsStart = j;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string text = src.substr(i, j - i);
            std::string digits = src.substr(digitsStart, j - digitsStart);
            digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
            while (!digits.empty() && (digits.back() == 'L' || digits.back() == 'l' ||
                                       digits.back() == 'f' || digits.back() == 'F' ||
                                       digits.back() == 'd' || digits.back() == 'D'))
                digits.pop_back();
            t.kind = Token::Kind::IntLit;
            t.text = text;
            try {
                t.intValue = digits.empty() ? 0 : std::stoll(digits, nullptr, base);
            } catch (...) {
                t.intValue = 0;
            }
            tokens.push_back(t);
            step(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                      src[j] == '_' || src[j] == '$'))
                ++j;
            t.kind = Token::Kind::Ident;
            t.text = src.substr(i, j - i);
            tokens.push_back(t);
            step(j - i);
            continue;
        }
        static const char* kMulti[] = {">>>=", ">>>", "<<=", ">>=", "...", "==", "!=", "<=",
                                       ">=",  "&&",  "||", "++", "--",  "+=", "-=", "*=",
                                       "/=",  "%=",  "&=", "|=", "^=",  "<<", ">>", "->",
                                       "::"};
        bool matched = false;
        for (const char* op : kMulti) {
            size_t len = std::strlen(op);
            if (src.compare(i, len, op) == 0) {
                t.kind = Token::Kind::Punct;
                t.text = op;
                tokens.push_back(t);
                step(len);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("{}()[];,.=<>!+-*/%&|^~?:@").find(c) != std::string::npos) {
            t.kind = Token::Kind::Punct;
            t.text = std::string(1, c);
            tokens.push_back(t);
            step(1);
            continue;
        }
        throw JavaParseError(std::string("unexpected character '") + c + "'", file, line, column);
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.column = column;
    tokens.push_back(end);
    return tokens;
}

// Thrown while lowering a method body; the parser recovers by dropping the
// method and recording a diagnostic.
struct MethodSkip {
    std::string construct;
    std::string message;
    int line;
    int column;
};

struct LoweredExpr {
    ValueRef value;
    bool isClassRef = false;
    std::string classRefName;
};

class JavaParser {
  public:
    JavaParser(std::vector<Token> tokens, std::string sourcePath)
        : tokens_(std::move(tokens)), file_(std::move(sourcePath)) {}

    CompilationUnitIR parse() {
        unit_.sourcePath = file_;
        parsePackage();
        while (atIdent("import")) skipTo(";");
        parseTopLevel();
        return std::move(unit_);
    }

  private:
    std::vector<Token> tokens_;
    std::string file_;
    size_t pos_ = 0;
    CompilationUnitIR unit_;

    // Per-method lowering state.
    MethodIR* method_ = nullptr;
    std::vector<std::pair<std::string, std::string>> locals_;  // name -> declared type
    int nextStmtId_ = 0;
    int nextTemp_ = 0;
    int currentBlock_ = -1;  // -1 after return/throw
    bool unreachableReported_ = false;
    std::vector<Statement> discard_;

    // ---- token helpers ----

    const Token& peek(int ahead = 0) const {
        size_t p = pos_ + static_cast<size_t>(ahead);
        return p < tokens_.size() ? tokens_[p] : tokens_.back();
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool atPunct(const std::string& p, int ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Punct && peek(ahead).text == p;
    }
    bool atIdent(const std::string& name, int ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Ident && peek(ahead).text == name;
    }
    SourceLocation here() const { return {file_, peek().line, peek().column}; }

    [[noreturn]] void fatal(const std::string& msg) const {
        throw JavaParseError(msg, file_, peek().line, peek().column);
    }
    [[noreturn]] void skip(const std::string& construct, const std::string& msg) const {
        throw MethodSkip{construct, msg, peek().line, peek().column};
    }

    void expectPunct(const std::string& p) {
        if (!atPunct(p)) fatal("expected '" + p + "' but found '" + peek().text + "'");
        next();
    }
    std::string expectIdent(const std::string& what) {
        if (peek().kind != Token::Kind::Ident) fatal("expected " + what);
        return next().text;
    }

    void skipTo(const std::string& punct) {
        while (peek().kind != Token::Kind::End && !atPunct(punct)) next();
        if (atPunct(punct)) next();
    }

    void skipBalanced(const std::string& open, const std::string& close) {
        expectPunct(open);
        int depth = 1;
        while (depth > 0) {
            if (peek().kind == Token::Kind::End) fatal("unbalanced '" + open + "'");
            if (atPunct(open)) ++depth;
            if (atPunct(close)) --depth;
            next();
        }
    }

    void skipAnnotations() {
        while (atPunct("@")) {
            next();
            expectIdent("annotation name");
            while (atPunct(".")) {
                next();
                expectIdent("annotation name");
            }
            if (atPunct("(")) skipBalanced("(", ")");
        }
    }

    void skipGenerics() {
        if (!atPunct("<")) return;
        int depth = 0;
        do {
            if (peek().kind == Token::Kind::End) fatal("unbalanced '<'");
            if (atPunct("<")) ++depth;
            if (atPunct(">")) --depth;
            if (atPunct(">>")) depth -= 2;
            next();
        } while (depth > 0);
    }

    // ---- unit structure ----

    void parsePackage() {
        if (!atIdent("package")) return;
        next();
        std::string name = expectIdent("package name");
        while (atPunct(".")) {
            next();
            name += "." + expectIdent("package name");
        }
        expectPunct(";");
        unit_.packageName = name;
    }

    void parseTopLevel() {
        bool classSeen = false;
        while (peek().kind != Token::Kind::End) {
            skipAnnotations();
            size_t save = pos_;
            while (peek().kind == Token::Kind::Ident && kModifiers.count(peek().text)) next();
            if (atIdent("class")) {
                if (classSeen) {
                    diagnose("additional-top-level-class",
                             "only the first top-level class is analyzed", here());
                    next();
                    skipTo("{");
                    --pos_;  // skipTo consumed the brace
                    skipBalanced("{", "}");
                    continue;
                }
                classSeen = true;
                next();
                parseClass();
                continue;
            }
            if (atIdent("interface") || atIdent("enum") || atIdent("record")) {
                diagnose("unsupported-type-declaration",
                         "'" + peek().text + "' declarations are not analyzed", here());
                next();
                skipTo("{");
                --pos_;
                skipBalanced("{", "}");
                continue;
            }
            pos_ = save;
            if (peek().kind == Token::Kind::End) break;
            fatal("expected a class declaration, found '" + peek().text + "'");
        }
        if (!classSeen) fatal("no class declaration found");
    }

    void parseClass() {
        unit_.className = expectIdent("class name");
        skipGenerics();
        while (atIdent("extends") || atIdent("implements")) {
            next();
            while (!atPunct("{") && !atIdent("extends") && !atIdent("implements")) {
                if (peek().kind == Token::Kind::End) fatal("expected '{'");
                next();
            }
        }
        expectPunct("{");
        while (!atPunct("}")) {
            if (peek().kind == Token::Kind::End) fatal("unterminated class body");
            parseMember();
        }
        expectPunct("}");
    }

    void parseMember() {
        skipAnnotations();
        SourceLocation memberLoc = here();
        std::string visibility = "package";
        while (peek().kind == Token::Kind::Ident && kModifiers.count(peek().text)) {
            if (peek().text == "public" || peek().text == "private" || peek().text == "protected")
                visibility = peek().text;
            next();
        }
        if (atIdent("class") || atIdent("interface") || atIdent("enum") || atIdent("record")) {
            diagnose("nested-type", "nested type declarations are not analyzed", here());
            next();
            skipTo("{");
            --pos_;
            skipBalanced("{", "}");
            return;
        }
        if (atPunct("{")) {  // instance or static initializer
            diagnose("initializer-block", "initializer blocks are not analyzed", here());
            skipBalanced("{", "}");
            return;
        }
        if (atPunct(";")) {
            next();
            return;
        }
        skipGenerics();  // generic method type parameters

        // Constructor: Name( ... where Name is the class being parsed.
        if (atIdent(unit_.className) && atPunct("(", 1)) {
            std::string name = next().text;
            parseMethodRest(name, visibility, memberLoc);
            return;
        }

        parseType();  // return type or field type
        if (peek().kind != Token::Kind::Ident) fatal("expected member name");
        std::string name = next().text;
        if (atPunct("(")) {
            parseMethodRest(name, visibility, memberLoc);
        } else {
            parseFieldRest(memberLoc);
        }
    }

    // Consumes a type: qualified name or primitive, generics, array brackets.
    // Returns its source text (generics stripped).
    std::string parseType() {
        std::string text;
        if (peek().kind != Token::Kind::Ident) fatal("expected type name");
        text = next().text;
        while (atPunct(".")) {
            next();
            text += "." + expectIdent("type name");
        }
        skipGenerics();
        while (atPunct("[") && atPunct("]", 1)) {
            next();
            next();
            text += "[]";
        }
        if (atPunct("...")) {
            next();
            text += "[]";
        }
        return text;
    }

    void parseFieldRest(const SourceLocation& loc) {
        bool hasCall = false;
        while (!atPunct(";")) {
            if (peek().kind == Token::Kind::End) fatal("unterminated field declaration");
            if (atPunct("(") || atIdent("new")) hasCall = true;
            if (atPunct("{")) {
                skipBalanced("{", "}");
                continue;
            }
            next();
        }
        next();
        if (hasCall)
            diagnose("field-initializer", "field initializers are not analyzed", loc);
    }

    void parseMethodRest(const std::string& name, const std::string& visibility,
                         const SourceLocation& loc) {
        MethodIR method;
        method.name = name;
        method.visibility = visibility;

        expectPunct("(");
        if (!atPunct(")")) {
            while (true) {
                skipAnnotations();
                if (atIdent("final")) next();
                std::string type = parseType();
                std::string paramName = expectIdent("parameter name");
                while (atPunct("[") && atPunct("]", 1)) {
                    next();
                    next();
                    type += "[]";
                }
                method.parameters.push_back({paramName, type});
                if (atPunct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expectPunct(")");
        if (atIdent("throws")) {
            next();
            parseType();
            while (atPunct(",")) {
                next();
                parseType();
            }
        }
        if (atPunct(";")) {  // abstract/native
            next();
            return;
        }
        if (!atPunct("{")) fatal("expected method body");

        size_t bodyStart = pos_;
        method_ = &method;
        locals_.clear();
        for (const auto& p : method.parameters) locals_.emplace_back(p.name, p.type);
        nextStmtId_ = 0;
        nextTemp_ = 0;
        unreachableReported_ = false;
        discard_.clear();
        method.blocks.clear();
        method.blocks.push_back(BasicBlock{0, false, {}, {}});
        method.entry = 0;
        currentBlock_ = 0;

        try {
            size_t bodyTokensFrom = pos_;
            parseBlockInto();
            collectIdentifiers(method, bodyTokensFrom, pos_);
            finishMethod(method);
            unit_.methods.push_back(std::move(method));
        } catch (const MethodSkip& s) {
            Diagnostic d;
            d.construct = s.construct;
            d.message = "method " + name + " skipped: " + s.message;
            d.location = {file_, s.line, s.column};
            unit_.diagnostics.push_back(d);
            pos_ = bodyStart;
            skipBalanced("{", "}");
        } catch (const JavaParseError& e) {
            // A body-level syntax problem costs only this method, not the unit.
            Diagnostic d;
            d.construct = "parse-error";
            d.message = "method " + name + " skipped: " + e.what();
            d.location = {file_, e.line, e.column};
            unit_.diagnostics.push_back(d);
            pos_ = bodyStart;
            skipBalanced("{", "}");
        }
        method_ = nullptr;
        (void)loc;
    }

    void collectIdentifiers(MethodIR& method, size_t from, size_t to) {
        std::set<std::string> bag;
        auto lower = [](std::string s) {
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            return s;
        };
        bag.insert(lower(method.name));
        for (const auto& p : method.parameters) {
            bag.insert(lower(p.name));
            bag.insert(lower(p.type));
        }
        for (size_t i = from; i < to && i < tokens_.size(); ++i)
            if (tokens_[i].kind == Token::Kind::Ident) bag.insert(lower(tokens_[i].text));
        method.identifiers.assign(bag.begin(), bag.end());
    }

    void finishMethod(MethodIR& method) {
        // A block ending in Return (or throw) never falls through.
        for (auto& block : method.blocks) {
            bool sealed = !block.statements.empty() &&
                          block.statements.back().kind == Statement::Kind::Return;
            if (sealed) block.successors.clear();
        }
        // Drop blocks that became unreachable (dead code, ignored catch
        // bodies) and renumber the survivors in BFS order from the entry.
        std::vector<int> remap(method.blocks.size(), -1);
        std::vector<int> order;
        order.push_back(method.entry);
        remap[method.entry] = 0;
        for (size_t head = 0; head < order.size(); ++head) {
            for (int succ : method.blocks[order[head]].successors) {
                if (remap[succ] < 0) {
                    remap[succ] = static_cast<int>(order.size());
                    order.push_back(succ);
                }
            }
        }
        std::vector<BasicBlock> pruned;
        pruned.reserve(order.size());
        for (int old : order) {
            BasicBlock b = std::move(method.blocks[old]);
            b.id = remap[old];
            for (int& succ : b.successors) succ = remap[succ];
            pruned.push_back(std::move(b));
        }
        method.blocks = std::move(pruned);
        method.entry = 0;
        for (const auto& block : method.blocks) {
            bool sealed = !block.statements.empty() &&
                          block.statements.back().kind == Statement::Kind::Return;
            if (sealed || block.successors.empty()) method.exits.push_back(block.id);
        }
    }

    void diagnose(const std::string& construct, const std::string& message,
                  const SourceLocation& loc) {
        unit_.diagnostics.push_back({construct, message, loc});
    }

    // ---- CFG builder ----

    int newBlock(bool loopHeader = false) {
        int id = static_cast<int>(method_->blocks.size());
        method_->blocks.push_back(BasicBlock{id, loopHeader, {}, {}});
        return id;
    }

    void link(int from, int to) { method_->blocks[from].successors.push_back(to); }

    Statement& emit(Statement s) {
        s.id = nextStmtId_++;
        if (currentBlock_ < 0) {
            discard_.push_back(std::move(s));
            return discard_.back();
        }
        auto& stmts = method_->blocks[currentBlock_].statements;
        stmts.push_back(std::move(s));
        return stmts.back();
    }

    std::string freshTemp() { return "$t" + std::to_string(nextTemp_++); }

    std::string localType(const std::string& name) const {
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
            if (it->first == name) return it->second;
        return "";
    }
    bool isLocal(const std::string& name) const {
        for (const auto& [n, t] : locals_)
            if (n == name) return true;
        return false;
    }

    // ---- statements ----

    void parseBlockInto() {
        expectPunct("{");
        while (!atPunct("}")) {
            if (peek().kind == Token::Kind::End) fatal("unterminated block");
            parseStatement();
        }
        next();
    }

    void parseStatement() {
        skipAnnotations();
        if (currentBlock_ < 0 && !unreachableReported_ && !atPunct(";") && !atPunct("}")) {
            unreachableReported_ = true;
            diagnose("unreachable-code", "statements after return are ignored", here());
        }
        if (atPunct(";")) {
            next();
            return;
        }
        if (atPunct("{")) {
            parseBlockInto();
            return;
        }
        if (atIdent("if")) {
            parseIf();
            return;
        }
        if (atIdent("while")) {
            parseWhile();
            return;
        }
        if (atIdent("for")) {
            parseFor();
            return;
        }
        if (atIdent("return")) {
            parseReturn();
            return;
        }
        if (atIdent("try")) {
            parseTry();
            return;
        }
        if (atIdent("throw")) {
            SourceLocation loc = here();
            next();
            lowerExpression();
            expectPunct(";");
            Statement s;
            s.kind = Statement::Kind::Return;
            s.location = loc;
            emit(std::move(s));
            currentBlock_ = -1;
            return;
        }
        if (atIdent("synchronized") && atPunct("(", 1)) {
            next();
            expectPunct("(");
            lowerExpression();
            expectPunct(")");
            parseBlockInto();
            return;
        }
        if (atIdent("break") || atIdent("continue") || atIdent("switch") || atIdent("do") ||
            atIdent("yield") || atIdent("assert")) {
            skip("unsupported-statement", "'" + peek().text + "' statements are not supported");
        }
        if (looksLikeLocalDecl()) {
            parseLocalDecl();
            return;
        }
        lowerExpression();
        expectPunct(";");
    }

    bool looksLikeLocalDecl() {
        if (atIdent("final")) return true;
        if (peek().kind != Token::Kind::Ident) return false;
        if (kPrimitiveTypes.count(peek().text)) return true;
        size_t save = pos_;
        bool isDecl = false;
        // type = Ident ('.' Ident)* generics? ('[' ']')*, then another Ident.
        next();
        while (atPunct(".") && peek(1).kind == Token::Kind::Ident) {
            next();
            next();
        }
        if (atPunct("<")) {
            int depth = 0;
            size_t scan = pos_;
            do {
                if (tokens_[scan].kind == Token::Kind::End) break;
                if (tokens_[scan].kind == Token::Kind::Punct && tokens_[scan].text == "<") ++depth;
                if (tokens_[scan].kind == Token::Kind::Punct && tokens_[scan].text == ">") --depth;
                if (tokens_[scan].kind == Token::Kind::Punct && tokens_[scan].text == ">>")
                    depth -= 2;
                ++scan;
            } while (depth > 0);
            pos_ = scan;
        }
        while (atPunct("[") && atPunct("]", 1)) {
            next();
            next();
        }
        isDecl = peek().kind == Token::Kind::Ident;
        pos_ = save;
        return isDecl;
    }

    void parseLocalDecl() {
        if (atIdent("final")) next();
        std::string type = parseType();
        while (true) {
            SourceLocation loc = here();
            std::string name = expectIdent("variable name");
            std::string varType = type;
            while (atPunct("[") && atPunct("]", 1)) {
                next();
                next();
                varType += "[]";
            }
            locals_.emplace_back(name, varType);
            if (atPunct("=")) {
                next();
                lowerInitializer(name, varType, loc);
            }
            if (atPunct(",")) {
                next();
                continue;
            }
            break;
        }
        expectPunct(";");
    }

    // Lowers "name = <expr>" with the declared variable as direct target of a
    // trailing call or allocation when possible.
    void lowerInitializer(const std::string& name, const std::string& type,
                          const SourceLocation& loc) {
        LoweredExpr rhs = lowerExpr(name);
        if (rhs.value.kind == ValueRef::Kind::Variable && rhs.value.name == name) return;
        Statement s;
        s.kind = Statement::Kind::Assignment;
        s.location = loc;
        s.targetVar = name;
        s.source = rhs.value;
        emit(std::move(s));
        (void)type;
    }

    void parseIf() {
        next();
        expectPunct("(");
        lowerExpression();
        expectPunct(")");
        int condBlock = currentBlock_;
        int thenBlock = newBlock();
        if (condBlock >= 0) link(condBlock, thenBlock);
        currentBlock_ = thenBlock;
        parseStatement();
        int thenEnd = currentBlock_;

        if (atIdent("else")) {
            next();
            int elseBlock = newBlock();
            if (condBlock >= 0) link(condBlock, elseBlock);
            currentBlock_ = elseBlock;
            parseStatement();
            int elseEnd = currentBlock_;
            int join = newBlock();
            if (thenEnd >= 0) link(thenEnd, join);
            if (elseEnd >= 0) link(elseEnd, join);
            currentBlock_ = (thenEnd < 0 && elseEnd < 0) ? -1 : join;
            if (currentBlock_ < 0) method_->blocks.pop_back();
        } else {
            int join = newBlock();
            if (condBlock >= 0) link(condBlock, join);
            if (thenEnd >= 0) link(thenEnd, join);
            currentBlock_ = join;
        }
    }

    void parseWhile() {
        next();
        int before = currentBlock_;
        int header = newBlock(true);
        if (before >= 0) link(before, header);
        currentBlock_ = header;
        expectPunct("(");
        lowerExpression();
        expectPunct(")");
        int body = newBlock();
        link(header, body);
        currentBlock_ = body;
        parseStatement();
        if (currentBlock_ >= 0) link(currentBlock_, header);
        int after = newBlock();
        link(header, after);
        currentBlock_ = after;
    }

    void parseFor() {
        next();
        expectPunct("(");
        if (isEnhancedFor()) {
            if (atIdent("final")) next();
            parseType();
            SourceLocation loc = here();
            std::string name = expectIdent("loop variable");
            locals_.emplace_back(name, "");
            expectPunct(":");
            lowerExpression();
            expectPunct(")");
            int before = currentBlock_;
            int header = newBlock(true);
            if (before >= 0) link(before, header);
            int body = newBlock();
            link(header, body);
            currentBlock_ = body;
            Statement init;
            init.kind = Statement::Kind::Assignment;
            init.location = loc;
            init.targetVar = name;
            init.source = ValueRef::unknown();
            emit(std::move(init));
            parseStatement();
            if (currentBlock_ >= 0) link(currentBlock_, header);
            int after = newBlock();
            link(header, after);
            currentBlock_ = after;
            return;
        }
        if (!atPunct(";")) {
            if (looksLikeLocalDecl()) {
                if (atIdent("final")) next();
                std::string type = parseType();
                SourceLocation loc = here();
                std::string name = expectIdent("variable name");
                locals_.emplace_back(name, type);
                if (atPunct("=")) {
                    next();
                    lowerInitializer(name, type, loc);
                }
            } else {
                lowerExpression();
            }
        }
        expectPunct(";");
        int before = currentBlock_;
        int header = newBlock(true);
        if (before >= 0) link(before, header);
        currentBlock_ = header;
        if (!atPunct(";")) lowerExpression();
        expectPunct(";");
        size_t updateStart = pos_;
        int updateDepth = 0;
        while (updateDepth > 0 || !atPunct(")")) {
            if (peek().kind == Token::Kind::End) fatal("unterminated for header");
            if (atPunct("(")) ++updateDepth;
            if (atPunct(")")) --updateDepth;
            next();
        }
        size_t updateEnd = pos_;
        expectPunct(")");
        size_t afterHeader = pos_;

        int body = newBlock();
        link(header, body);
        currentBlock_ = body;
        parseStatement();
        size_t resume = pos_;
        if (updateEnd > updateStart && currentBlock_ >= 0) {
            pos_ = updateStart;
            while (pos_ < updateEnd) {
                lowerExpression();
                if (atPunct(",") && pos_ < updateEnd) {
                    next();
                    continue;
                }
                break;
            }
        }
        pos_ = resume;
        if (currentBlock_ >= 0) link(currentBlock_, header);
        int after = newBlock();
        link(header, after);
        currentBlock_ = after;
        (void)afterHeader;
    }

    bool isEnhancedFor() {
        size_t save = pos_;
        int depth = 0;
        bool found = false;
        while (pos_ < tokens_.size()) {
            if (atPunct("(")) ++depth;
            if (atPunct(")")) {
                if (depth == 0) break;
                --depth;
            }
            if (atPunct(";") && depth == 0) break;
            if (atPunct(":") && depth == 0) {
                found = true;
                break;
            }
            next();
        }
        pos_ = save;
        return found;
    }

    void parseReturn() {
        SourceLocation loc = here();
        next();
        Statement s;
        s.kind = Statement::Kind::Return;
        s.location = loc;
        if (!atPunct(";")) s.returnValue = lowerExpression().value;
        expectPunct(";");
        emit(std::move(s));
        currentBlock_ = -1;
    }

    void parseTry() {
        next();
        if (atPunct("(")) {  // try-with-resources: lower the resource inits
            next();
            while (!atPunct(")")) {
                if (peek().kind == Token::Kind::End) fatal("unterminated try header");
                if (looksLikeLocalDecl()) {
                    if (atIdent("final")) next();
                    std::string type = parseType();
                    SourceLocation loc = here();
                    std::string name = expectIdent("resource name");
                    locals_.emplace_back(name, type);
                    expectPunct("=");
                    lowerInitializer(name, type, loc);
                } else {
                    lowerExpression();
                }
                if (atPunct(";")) next();
            }
            next();
        }
        parseBlockInto();
        while (atIdent("catch")) {
            SourceLocation loc = here();
            next();
            skipBalanced("(", ")");
            diagnose("catch-block", "catch block ignored (exceptional flow is not modeled)", loc);
            int save = currentBlock_;
            currentBlock_ = -1;
            bool savedReport = unreachableReported_;
            unreachableReported_ = true;
            parseBlockInto();
            unreachableReported_ = savedReport;
            currentBlock_ = save;
        }
        if (atIdent("finally")) {
            next();
            parseBlockInto();
        }
    }

    // ---- expressions ----

    LoweredExpr lowerExpression() { return lowerExpr(""); }

    LoweredExpr lowerExpr(const std::string& targetHint) {
        LoweredExpr lhs = lowerTernary(targetHint);
        if (atPunct("=") && !atPunct("==")) {
            // Only plain variables are assignable in the subset.
            SourceLocation loc = {file_, peek().line, peek().column};
            next();
            if (lhs.value.kind == ValueRef::Kind::Variable && !lhs.isClassRef) {
                std::string name = lhs.value.name;
                LoweredExpr rhs = lowerExpr(name);
                if (!(rhs.value.kind == ValueRef::Kind::Variable && rhs.value.name == name)) {
                    Statement s;
                    s.kind = Statement::Kind::Assignment;
                    s.location = loc;
                    s.targetVar = name;
                    s.source = rhs.value;
                    emit(std::move(s));
                }
                return {ValueRef::variable(name, localType(name)), false, ""};
            }
            lowerExpr("");
            return {ValueRef::unknown(), false, ""};
        }
        static const std::set<std::string> kCompound = {"+=", "-=", "*=", "/=", "%=",
                                                        "&=", "|=", "^=", "<<=", ">>="};
        if (peek().kind == Token::Kind::Punct && kCompound.count(peek().text)) {
            SourceLocation loc = {file_, peek().line, peek().column};
            next();
            lowerExpr("");
            if (lhs.value.kind == ValueRef::Kind::Variable && !lhs.isClassRef) {
                Statement s;
                s.kind = Statement::Kind::Assignment;
                s.location = loc;
                s.targetVar = lhs.value.name;
                s.source = ValueRef::unknown();
                emit(std::move(s));
            }
            return {ValueRef::unknown(), false, ""};
        }
        return lhs;
    }

    LoweredExpr lowerTernary(const std::string& targetHint) {
        LoweredExpr cond = lowerBinary(targetHint);
        if (atPunct("?")) {
            next();
            lowerExpr("");
            expectPunct(":");
            lowerExpr("");
            return {ValueRef::unknown(), false, ""};
        }
        return cond;
    }

    bool atBinaryOp() const {
        if (peek().kind == Token::Kind::Ident && peek().text == "instanceof") return true;
        if (peek().kind != Token::Kind::Punct) return false;
        static const std::set<std::string> kOps = {"+",  "-",  "*",  "/",  "%",  "<",  ">",
                                                   "<=", ">=", "==", "!=", "&&", "||", "&",
                                                   "|",  "^",  "<<", ">>", ">>>"};
        return kOps.count(peek().text) > 0;
    }

    LoweredExpr lowerBinary(const std::string& targetHint) {
        LoweredExpr first = lowerUnary(targetHint);
        bool combined = false;
        while (atBinaryOp()) {
            if (atIdent("instanceof")) {
                next();
                parseType();
            } else {
                next();
                lowerUnary("");
            }
            combined = true;
        }
        if (combined) return {ValueRef::unknown(), false, ""};
        return first;
    }

    LoweredExpr lowerUnary(const std::string& targetHint) {
        if (atPunct("-")) {
            next();
            LoweredExpr inner = lowerUnary("");
            if (inner.value.kind == ValueRef::Kind::IntLiteral)
                return {ValueRef::intLit(-inner.value.intValue), false, ""};
            return {ValueRef::unknown(), false, ""};
        }
        if (atPunct("!") || atPunct("+") || atPunct("~")) {
            next();
            lowerUnary("");
            return {ValueRef::unknown(), false, ""};
        }
        if (atPunct("++") || atPunct("--")) {
            next();
            LoweredExpr inner = lowerUnary("");
            if (inner.value.kind == ValueRef::Kind::Variable) {
                Statement s;
                s.kind = Statement::Kind::Assignment;
                s.location = here();
                s.targetVar = inner.value.name;
                s.source = ValueRef::unknown();
                emit(std::move(s));
            }
            return {ValueRef::unknown(), false, ""};
        }
        return lowerPostfix(targetHint);
    }

    LoweredExpr lowerPostfix(const std::string& targetHint) {
        LoweredExpr cur = lowerPrimary(targetHint);
        while (true) {
            if (atPunct(".") && peek(1).kind == Token::Kind::Ident) {
                Token nameTok = peek(1);
                if (atPunct("(", 2)) {
                    next();
                    next();
                    bool last = !callFollowsAfterArgs();
                    cur = lowerCall(cur, nameTok, last ? targetHint : "");
                    continue;
                }
                // Field access / qualified name.
                next();
                next();
                if (cur.isClassRef) {
                    cur.classRefName += "." + nameTok.text;
                    // Could still be a class prefix (javax.crypto.Cipher) or a
                    // static field; resolved when a call or use follows.
                    cur.value = ValueRef::unknown();
                    continue;
                }
                cur = {ValueRef::unknown(), false, ""};
                continue;
            }
            if (atPunct("[")) {
                next();
                lowerExpr("");
                expectPunct("]");
                cur = {ValueRef::unknown(), false, ""};
                continue;
            }
            if (atPunct("++") || atPunct("--")) {
                next();
                if (cur.value.kind == ValueRef::Kind::Variable && !cur.isClassRef) {
                    Statement s;
                    s.kind = Statement::Kind::Assignment;
                    s.location = here();
                    s.targetVar = cur.value.name;
                    s.source = ValueRef::unknown();
                    emit(std::move(s));
                }
                cur = {ValueRef::unknown(), false, ""};
                continue;
            }
            if (atPunct("::")) skip("method-reference", "method references are not supported");
            if (atPunct("->")) skip("lambda-expression", "lambda expressions are not supported");
            break;
        }
        return cur;
    }

    // True when the token sequence after the currently open argument list
    // continues with another call or field access (the chain goes on).
    bool callFollowsAfterArgs() {
        size_t save = pos_;
        int depth = 1;  // we are just past '('... actually before '(' args start
        // pos_ is at the '(' of the call; scan to its matching ')'.
        if (!atPunct("(")) return false;
        size_t scan = pos_ + 1;
        depth = 1;
        while (scan < tokens_.size() && depth > 0) {
            if (tokens_[scan].kind == Token::Kind::Punct) {
                if (tokens_[scan].text == "(") ++depth;
                if (tokens_[scan].text == ")") --depth;
            }
            ++scan;
        }
        bool follows = scan < tokens_.size() && tokens_[scan].kind == Token::Kind::Punct &&
                       (tokens_[scan].text == "." || tokens_[scan].text == "[");
        pos_ = save;
        return follows;
    }

    std::vector<ValueRef> lowerArgs() {
        expectPunct("(");
        std::vector<ValueRef> args;
        if (!atPunct(")")) {
            while (true) {
                args.push_back(lowerExpr("").value);
                if (atPunct(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expectPunct(")");
        return args;
    }

    LoweredExpr lowerCall(const LoweredExpr& receiver, const Token& nameTok,
                          const std::string& targetHint) {
        SourceLocation loc = {file_, nameTok.line, nameTok.column};
        std::vector<ValueRef> args = lowerArgs();
        std::string target = targetHint.empty() ? freshTemp() : targetHint;

        if (receiver.isClassRef) {
            // Static call: modeled as an allocation by factory method.
            Statement s;
            s.kind = Statement::Kind::Allocation;
            s.location = loc;
            s.targetVar = target;
            s.className = receiver.classRefName;
            s.factoryName = nameTok.text;
            s.args = std::move(args);
            emit(std::move(s));
            return {ValueRef::variable(target, receiver.classRefName), false, ""};
        }
        Statement s;
        s.kind = Statement::Kind::Invocation;
        s.location = loc;
        s.targetVar = target;
        s.methodName = nameTok.text;
        s.receiver = receiver.value;
        s.args = std::move(args);
        emit(std::move(s));
        return {ValueRef::variable(target, ""), false, ""};
    }

    LoweredExpr lowerPrimary(const std::string& targetHint) {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::StringLit: {
                next();
                return {ValueRef::stringLit(t.text), false, ""};
            }
            case Token::Kind::IntLit: {
                next();
                return {ValueRef::intLit(t.intValue), false, ""};
            }
            case Token::Kind::CharLit: {
                next();
                return {ValueRef::unknown(), false, ""};
            }
            case Token::Kind::Punct:
                if (t.text == "(") return lowerParenOrCast();
                if (t.text == "{") {
                    return {lowerArrayInitializer(), false, ""};
                }
                fatal("unexpected token '" + t.text + "' in expression");
            case Token::Kind::Ident:
                break;
            case Token::Kind::End:
                fatal("unexpected end of file in expression");
        }

        if (t.text == "new") return lowerNew(targetHint);
        if (t.text == "null" || t.text == "true" || t.text == "false") {
            next();
            return {ValueRef::unknown(), false, ""};
        }
        if (t.text == "this") {
            next();
            return {ValueRef::variable("this", unit_.className), false, ""};
        }
        if (atPunct("(", 1)) {
            // Bare call: receiver is the enclosing instance.
            Token nameTok = next();
            LoweredExpr self{ValueRef::variable("this", unit_.className), false, ""};
            bool last = !callFollowsAfterArgs();
            return lowerCall(self, nameTok, last ? targetHint : "");
        }
        next();
        if (isLocal(t.text)) return {ValueRef::variable(t.text, localType(t.text)), false, ""};
        // Qualified static call: when a dotted chain ends in a call and some
        // receiver segment is class-like (pkg.path.Class.method(...)), consume
        // the receiver segments as one class reference.
        if (atPunct(".")) {
            std::vector<std::string> segs{t.text};
            size_t scan = pos_;
            while (scan + 1 < tokens_.size() && tokens_[scan].kind == Token::Kind::Punct &&
                   tokens_[scan].text == "." && tokens_[scan + 1].kind == Token::Kind::Ident) {
                segs.push_back(tokens_[scan + 1].text);
                scan += 2;
            }
            bool callAfter = tokens_[scan].kind == Token::Kind::Punct && tokens_[scan].text == "(";
            if (callAfter && segs.size() >= 2) {
                bool classLike = false;
                for (size_t k = 0; k + 1 < segs.size(); ++k)
                    if (std::isupper(static_cast<unsigned char>(segs[k][0]))) classLike = true;
                if (classLike) {
                    std::string className = segs[0];
                    for (size_t k = 1; k + 1 < segs.size(); ++k) className += "." + segs[k];
                    pos_ += 2 * (segs.size() - 2);  // leave ".method(" for the postfix loop
                    LoweredExpr ref;
                    ref.isClassRef = true;
                    ref.classRefName = className;
                    ref.value = ValueRef::unknown();
                    return ref;
                }
            }
        }
        if (std::isupper(static_cast<unsigned char>(t.text[0]))) {
            LoweredExpr ref;
            ref.isClassRef = true;
            ref.classRefName = t.text;
            ref.value = ValueRef::unknown();
            return ref;
        }
        // Unknown simple name: a field of the enclosing class.
        return {ValueRef::variable(t.text, ""), false, ""};
    }

    LoweredExpr lowerParenOrCast() {
        // Cast: "(" type ")" followed by a primary-start token.
        size_t save = pos_;
        next();
        bool castShape = false;
        if (peek().kind == Token::Kind::Ident &&
            (kPrimitiveTypes.count(peek().text) ||
             std::isupper(static_cast<unsigned char>(peek().text[0])))) {
            std::string first = peek().text;
            size_t scan = pos_;
            ++scan;
            while (scan + 1 < tokens_.size() && tokens_[scan].kind == Token::Kind::Punct &&
                   tokens_[scan].text == "." && tokens_[scan + 1].kind == Token::Kind::Ident)
                scan += 2;
            while (scan + 1 < tokens_.size() && tokens_[scan].kind == Token::Kind::Punct &&
                   tokens_[scan].text == "[" && tokens_[scan + 1].text == "]")
                scan += 2;
            if (scan < tokens_.size() && tokens_[scan].kind == Token::Kind::Punct &&
                tokens_[scan].text == ")") {
                const Token& after = tokens_[scan + 1];
                bool primaryStart =
                    after.kind == Token::Kind::Ident || after.kind == Token::Kind::StringLit ||
                    after.kind == Token::Kind::IntLit || after.kind == Token::Kind::CharLit ||
                    (after.kind == Token::Kind::Punct && after.text == "(");
                if (primaryStart && !isLocal(first)) {
                    pos_ = scan + 1;
                    castShape = true;
                }
            }
        }
        if (castShape) return lowerUnary("");
        pos_ = save;
        expectPunct("(");
        LoweredExpr inner = lowerExpr("");
        expectPunct(")");
        return inner;
    }

    ValueRef lowerArrayInitializer() {
        expectPunct("{");
        bool allLiterals = true;
        if (!atPunct("}")) {
            while (true) {
                if (peek().kind == Token::Kind::IntLit || peek().kind == Token::Kind::CharLit) {
                    next();
                } else if (atPunct("-") && peek(1).kind == Token::Kind::IntLit) {
                    next();
                    next();
                } else {
                    allLiterals = false;
                    lowerExpr("");
                }
                if (atPunct(",")) {
                    next();
                    if (atPunct("}")) break;  // trailing comma
                    continue;
                }
                break;
            }
        }
        expectPunct("}");
        return allLiterals ? ValueRef::charArray() : ValueRef::unknown();
    }

    LoweredExpr lowerNew(const std::string& targetHint) {
        SourceLocation loc = here();
        next();
        std::string className = expectIdent("class name");
        while (atPunct(".") && peek(1).kind == Token::Kind::Ident) {
            next();
            className += "." + next().text;
        }
        skipGenerics();
        if (atPunct("[")) {
            // Array creation: new T[n] or new T[]{...}
            next();
            if (!atPunct("]")) {
                lowerExpr("");
                expectPunct("]");
                while (atPunct("[")) {
                    next();
                    if (!atPunct("]")) lowerExpr("");
                    expectPunct("]");
                }
                return {ValueRef::unknown(), false, ""};
            }
            expectPunct("]");
            while (atPunct("[") && atPunct("]", 1)) {
                next();
                next();
            }
            if (atPunct("{")) return {lowerArrayInitializer(), false, ""};
            return {ValueRef::unknown(), false, ""};
        }
        std::vector<ValueRef> args = lowerArgs();
        if (atPunct("{")) skip("anonymous-class", "anonymous class bodies are not supported");
        std::string target = targetHint.empty() ? freshTemp() : targetHint;
        Statement s;
        s.kind = Statement::Kind::Allocation;
        s.location = loc;
        s.targetVar = target;
        s.className = className;
        s.factoryName = "new";
        s.args = std::move(args);
        emit(std::move(s));
        return {ValueRef::variable(target, className), false, ""};
    }
};

}  // namespace

CompilationUnitIR parseJava(const std::string& source, const std::string& sourcePath) {
    return JavaParser(lexJava(source, sourcePath), sourcePath).parse();
}

}  // namespace cryptolint
