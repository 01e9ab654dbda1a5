// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include <cctype>
#include <fstream>
#include <sstream>

#include "lysa/dsl.hpp"
#include "surface.hpp"

namespace lysa {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) {
            out += i + 1 == expected.size() ? " or " : ", ";
        }
        out += expected[i];
    }
    return out;
}

} // namespace

ParseError::ParseError(SourceLocation where, std::vector<std::string> expected, std::string found)
    : Error(where.str() + ": expected " + join_expected(expected) + ", found " + found), where_(where),
      expected_(std::move(expected)) {}

ModelError::ModelError(SourceLocation where, const std::string& what) : Error(where.str() + ": " + what), where_(where) {}

namespace {

enum class Tok { ident, integer, attacker_point, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceLocation loc;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.loc = {line_, col_};
            if (pos_ >= src_.size()) {
                t.kind = Tok::end;
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::string word;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '\'')) {
                    word += advance();
                }
                if (word == "l" && (starts_with("•") || starts_with("*"))) {
                    advance_bytes(starts_with("•") ? 3 : 1);
                    t.kind = Tok::attacker_point;
                    t.text = "l•";
                } else {
                    t.kind = Tok::ident;
                    t.text = std::move(word);
                }
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = Tok::integer;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    t.text += advance();
                }
            } else if (starts_with("∈")) {
                advance_bytes(3);
                t.kind = Tok::ident;
                t.text = "in";
            } else if (starts_with("∪")) {
                advance_bytes(3);
                t.kind = Tok::punct;
                t.text = "+";
            } else if (starts_with("⟨")) {
                advance_bytes(3);
                t.kind = Tok::punct;
                t.text = "<";
            } else if (starts_with("⟩")) {
                advance_bytes(3);
                t.kind = Tok::punct;
                t.text = ">";
            } else if (std::string_view("(){}[]<>,;.:|!_=+").find(c) != std::string_view::npos) {
                t.kind = Tok::punct;
                t.text = std::string(1, advance());
            } else {
                std::string bad;
                bad += advance();
                while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) {
                    bad += advance();
                }
                throw ParseError(t.loc, {"a token"}, "'" + bad + "'");
            }
            out.push_back(std::move(t));
        }
    }

  private:
    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++col_;
        }
        return c;
    }

    void advance_bytes(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            advance();
        }
    }

    void skip_space() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            }
            if (starts_with("//")) {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else if (starts_with("/*")) {
                const SourceLocation open{line_, col_};
                advance_bytes(2);
                while (pos_ < src_.size() && !starts_with("*/")) {
                    advance();
                }
                if (pos_ >= src_.size()) {
                    throw ParseError(open, {"'*/'"}, "end of input inside comment");
                }
                advance_bytes(2);
            } else {
                return;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string> keywords = {"let", "new",  "decrypt", "as", "in",     "at",  "dest",
                                        "orig", "if", "then",    "else", "rounds", "max", "min"};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Template parse_model() {
        Template t;
        while (is_word("let")) {
            t.sets.push_back(parse_header());
        }
        t.body = parse_process();
        if (peek().kind != Tok::end) {
            fail({"'|'", "end of input"});
        }
        return t;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) {
            ++pos_;
        }
        return t;
    }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
    }
    bool is_word(std::string_view w, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::ident && peek(ahead).text == w;
    }
    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::end:
            return "end of input";
        case Tok::integer:
            return "integer '" + t.text + "'";
        default:
            return "'" + t.text + "'";
        }
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError(peek().loc, std::move(expected), describe(peek()));
    }
    void expect_punct(std::string_view p) {
        if (!is_punct(p)) {
            fail({"'" + std::string(p) + "'"});
        }
        next();
    }
    void expect_word(std::string_view w) {
        if (!is_word(w)) {
            fail({"'" + std::string(w) + "'"});
        }
        next();
    }
    std::string expect_identifier(const std::string& what) {
        if (peek().kind != Tok::ident || keywords.contains(peek().text)) {
            fail({what});
        }
        return next().text;
    }

    SetDecl parse_header() {
        SetDecl d;
        d.loc = peek().loc;
        expect_word("let");
        d.name = expect_identifier("set name");
        expect_punct("=");
        if (is_word("rounds")) {
            next();
            d.rounds = true;
        } else {
            d.value = parse_set();
        }
        if (is_word("in")) {
            next();
        }
        if (is_punct(";")) {
            next();
        }
        return d;
    }

    SetExpr parse_set() {
        SetExpr s;
        s.atoms.push_back(parse_set_atom());
        while (is_punct("+")) {
            next();
            s.atoms.push_back(parse_set_atom());
        }
        return s;
    }

    SetAtom parse_set_atom() {
        SetAtom a;
        a.loc = peek().loc;
        if (is_punct("{")) {
            next();
            a.literal = true;
            if (!is_punct("}")) {
                a.values.push_back(parse_int());
                while (is_punct(",")) {
                    next();
                    a.values.push_back(parse_int());
                }
            }
            expect_punct("}");
            return a;
        }
        if (peek().kind == Tok::ident && !keywords.contains(peek().text)) {
            a.name = next().text;
            return a;
        }
        fail({"'{'", "set name"});
    }

    int parse_int() {
        if (peek().kind != Tok::integer) {
            fail({"integer"});
        }
        const auto& t = next();
        try {
            return std::stoi(t.text);
        } catch (const std::out_of_range&) {
            throw ParseError(t.loc, {"integer"}, "integer out of range");
        }
    }

    IndexExpr parse_index_expr() {
        IndexExpr e;
        e.loc = peek().loc;
        if (peek().kind == Tok::integer) {
            e.kind = IndexExpr::Kind::literal;
            e.value = parse_int();
            return e;
        }
        if ((is_word("max") || is_word("min")) && is_punct("(", 1)) {
            e.kind = next().text == "max" ? IndexExpr::Kind::max : IndexExpr::Kind::min;
            expect_punct("(");
            e.set = parse_set();
            expect_punct(")");
            return e;
        }
        if (peek().kind == Tok::ident && !keywords.contains(peek().text)) {
            e.kind = IndexExpr::Kind::var;
            e.name = next().text;
            return e;
        }
        fail({"index"});
    }

    // ident := IDENT ['_' (INT | IDENT | '{' index (','? index)* '}')]
    SIdent parse_ident(const std::string& what) {
        SIdent id;
        id.loc = peek().loc;
        id.base = expect_identifier(what);
        if (is_punct("_")) {
            next();
            if (is_punct("{")) {
                next();
                id.indices.push_back(parse_index_expr());
                while (!is_punct("}")) {
                    if (is_punct(",")) {
                        next();
                    }
                    id.indices.push_back(parse_index_expr());
                }
                expect_punct("}");
            } else {
                id.indices.push_back(parse_index_expr());
            }
        }
        return id;
    }

    SIdent parse_point() {
        if (peek().kind == Tok::attacker_point) {
            SIdent id;
            id.loc = next().loc;
            id.attacker = true;
            return id;
        }
        return parse_ident("crypto-point");
    }

    SPointSet parse_point_set() {
        SPointSet s;
        s.loc = peek().loc;
        if (is_word("C") && !is_punct("_", 1)) {
            next();
            s.all = true;
            return s;
        }
        if (!is_punct("{")) {
            fail({"'{'", "'C'"});
        }
        next();
        if (!is_punct("}")) {
            s.points.push_back(parse_point());
            while (is_punct(",")) {
                next();
                s.points.push_back(parse_point());
            }
        }
        expect_punct("}");
        return s;
    }

    STerm parse_term() {
        STerm t;
        t.loc = peek().loc;
        if (peek().kind == Tok::integer) {
            t.id.loc = t.loc;
            t.id.base = next().text;
            return t;
        }
        if (is_punct("(")) {
            next();
            STerm inner = parse_term();
            expect_punct(")");
            return inner;
        }
        if (is_punct("{")) {
            next();
            t.enc = true;
            t.payload = parse_terms("}");
            expect_punct("}");
            expect_punct(":");
            t.key = std::make_shared<STerm>(parse_term());
            expect_punct("[");
            expect_word("at");
            t.at = parse_point();
            expect_word("dest");
            t.dest = parse_point_set();
            expect_punct("]");
            return t;
        }
        if (peek().kind == Tok::ident && !keywords.contains(peek().text)) {
            t.id = parse_ident("term");
            return t;
        }
        fail({"name", "variable", "'{'", "'('"});
    }

    std::vector<STerm> parse_terms(std::string_view stop) {
        std::vector<STerm> out;
        if (is_punct(stop) || is_punct(";")) {
            return out;
        }
        out.push_back(parse_term());
        while (is_punct(",")) {
            next();
            out.push_back(parse_term());
        }
        return out;
    }

    std::vector<SIdent> parse_binders(std::string_view stop) {
        std::vector<SIdent> out;
        if (is_punct(stop)) {
            return out;
        }
        out.push_back(parse_ident("variable"));
        while (is_punct(",")) {
            next();
            out.push_back(parse_ident("variable"));
        }
        return out;
    }

    SProcPtr parse_process() {
        SProcPtr first = parse_prefixed();
        if (!is_punct("|") || is_punct("_", 1)) {
            return first;
        }
        next();
        auto p = std::make_shared<SProc>();
        p->kind = SProc::Kind::par;
        p->loc = first->loc;
        p->left = first;
        p->right = parse_process();
        return p;
    }

    // An opening parenthesis starts an input when a ';' occurs at nesting depth one.
    bool paren_is_input() const {
        int depth = 0;
        for (std::size_t i = pos_; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.kind == Tok::end) {
                return false;
            }
            if (t.kind != Tok::punct) {
                continue;
            }
            if (t.text == "(" || t.text == "{" || t.text == "[") {
                ++depth;
            } else if (t.text == ")" || t.text == "}" || t.text == "]") {
                if (--depth == 0) {
                    return false;
                }
            } else if (t.text == ";" && depth == 1) {
                return true;
            }
        }
        return false;
    }

    SProcPtr make(SProc::Kind kind, SourceLocation loc) {
        auto p = std::make_shared<SProc>();
        p->kind = kind;
        p->loc = loc;
        return p;
    }

    void parse_index_binding(SProc& p) {
        expect_punct("_");
        expect_punct("{");
        p.index = expect_identifier("index name");
        expect_word("in");
        p.range = parse_set();
        expect_punct("}");
    }

    SProcPtr parse_prefixed() {
        const SourceLocation loc = peek().loc;
        if (peek().kind == Tok::integer && peek().text == "0") {
            next();
            return make(SProc::Kind::nil, loc);
        }
        if (is_punct("!")) {
            next();
            auto p = make(SProc::Kind::repl, loc);
            p->left = parse_prefixed();
            return p;
        }
        if (is_word("new")) {
            next();
            SProcPtr p;
            if (is_punct("_")) {
                p = make(SProc::Kind::inew, loc);
                parse_index_binding(*p);
            } else {
                p = make(SProc::Kind::restrict, loc);
            }
            expect_punct("(");
            p->name = parse_ident("name");
            expect_punct(")");
            if (is_punct(".")) {
                next();
            }
            p->left = parse_prefixed();
            return p;
        }
        if (is_punct("|") && is_punct("_", 1)) {
            next();
            auto p = make(SProc::Kind::ipar, loc);
            parse_index_binding(*p);
            p->left = parse_prefixed();
            return p;
        }
        if (is_punct("<")) {
            next();
            auto p = make(SProc::Kind::out, loc);
            p->terms = parse_terms(">");
            expect_punct(">");
            expect_punct(".");
            p->left = parse_prefixed();
            return p;
        }
        if (is_punct("(")) {
            if (paren_is_input()) {
                next();
                auto p = make(SProc::Kind::in, loc);
                p->terms = parse_terms(";");
                expect_punct(";");
                p->bind = parse_binders(")");
                expect_punct(")");
                expect_punct(".");
                p->left = parse_prefixed();
                return p;
            }
            next();
            SProcPtr inner = parse_process();
            expect_punct(")");
            return inner;
        }
        if (is_word("decrypt")) {
            next();
            auto p = make(SProc::Kind::dec, loc);
            p->subject = parse_term();
            expect_word("as");
            expect_punct("{");
            p->terms = parse_terms(";");
            expect_punct(";");
            p->bind = parse_binders("}");
            expect_punct("}");
            expect_punct(":");
            p->key = parse_term();
            expect_punct("[");
            expect_word("at");
            p->at = parse_point();
            expect_word("orig");
            p->orig = parse_point_set();
            expect_punct("]");
            expect_word("in");
            p->left = parse_prefixed();
            return p;
        }
        if (is_word("if")) {
            next();
            auto p = make(SProc::Kind::guard, loc);
            p->lhs = parse_index_expr();
            expect_punct("=");
            p->rhs = parse_index_expr();
            expect_word("then");
            p->left = parse_prefixed();
            if (is_word("else")) {
                next();
                p->right = parse_prefixed();
            } else {
                p->right = make(SProc::Kind::nil, loc);
            }
            return p;
        }
        fail({"'0'", "'!'", "'new'", "'<'", "'('", "'decrypt'", "'if'", "'|_'"});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

std::shared_ptr<const Template> parse_template(std::string_view text) {
    Parser parser(Lexer(text).run());
    return std::make_shared<const Template>(parser.parse_model());
}

SourceModel expand_template(std::shared_ptr<const Template> templ, std::string text, const ParseOptions& options);

SourceModel parse(std::string_view text, const ParseOptions& options) {
    return expand_template(parse_template(text), std::string(text), options);
}

SourceModel parse_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), options);
}

} // namespace lysa
