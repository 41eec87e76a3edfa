// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/dsl.hpp"

#include <cctype>
#include <cstring>
#include <optional>
#include <sstream>

namespace prgc {

bool Term::operator==(const Term& o) const {
    return kind == o.kind && name == o.name && prob == o.prob && depth == o.depth &&
           children == o.children;
}

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    SourcePos pos;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {
        cur_ = lex();
        next_ = lex();
    }

    const Token& peek() const { return cur_; }
    const Token& peek2() const { return next_; }
    Token take() {
        Token t = cur_;
        cur_ = next_;
        next_ = lex();
        return t;
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail("syntax", msg + " at line " + std::to_string(cur_.pos.line) + ", column " +
                           std::to_string(cur_.pos.col));
    }

  private:
    Token lex() {
        skip_space();
        if (i_ >= text_.size()) return Token{Token::Kind::End, "", pos_};
        char c = text_[i_];
        SourcePos at = pos_;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) ||
                                        text_[j] == '_'))
                ++j;
            Token t{Token::Kind::Ident, text_.substr(i_, j - i_), at};
            bump(j - i_);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[j])) ||
                                        text_[j] == '.' || text_[j] == '/'))
                ++j;
            // A trailing '/' or '.' belongs to the number only when digits follow.
            while (j > i_ && (text_[j - 1] == '/' || text_[j - 1] == '.')) --j;
            Token t{Token::Kind::Number, text_.substr(i_, j - i_), at};
            bump(j - i_);
            return t;
        }
        static const char* puncts[] = {"||", "->", ">=", "==", ";", "{", "}", "(", ")",
                                       ",",  ":",  "+",  "|",  "[", "]", "="};
        for (const char* p : puncts) {
            std::size_t len = std::strlen(p);
            if (text_.compare(i_, len, p) == 0) {
                Token t{Token::Kind::Punct, p, at};
                bump(len);
                return t;
            }
        }
        fail("syntax", std::string("unexpected character '") + c + "' at line " +
                           std::to_string(pos_.line) + ", column " + std::to_string(pos_.col));
    }

    void skip_space() {
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (c == '#') {
                while (i_ < text_.size() && text_[i_] != '\n') bump(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump(1);
            } else {
                break;
            }
        }
    }

    void bump(std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (text_[i_] == '\n') {
                ++pos_.line;
                pos_.col = 1;
            } else {
                ++pos_.col;
            }
            ++i_;
        }
    }

    const std::string& text_;
    std::size_t i_ = 0;
    SourcePos pos_;
    Token cur_;
    Token next_;
};

bool is_keyword(const std::string& s) {
    return s == "states" || s == "atom" || s == "guard" || s == "set" || s == "post" ||
           s == "program" || s == "skip" || s == "abort" || s == "if" || s == "then" ||
           s == "else" || s == "star" || s == "P";
}

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Term term() { return parse_par(); }

    ParsedFile file() {
        ParsedFile out;
        std::vector<std::string> state_names;
        while (lex_.peek().kind != Token::Kind::End) {
            Token head = expect_ident("declaration keyword");
            if (head.text == "states") {
                while (lex_.peek().kind == Token::Kind::Ident ||
                       lex_.peek().kind == Token::Kind::Number)
                    state_names.push_back(lex_.take().text);
                expect_punct(";");
                out.decls.space = make_space(state_names);
            } else if (head.text == "atom") {
                std::string name = name_token("atom name");
                require_space(out.decls);
                out.decls.atoms.emplace(name, parse_atom_body(out.decls));
            } else if (head.text == "guard") {
                std::string name = name_token("guard name");
                require_space(out.decls);
                out.decls.guards.emplace(name, parse_state_set(out.decls));
            } else if (head.text == "set") {
                std::string name = name_token("set name");
                require_space(out.decls);
                out.decls.sets.emplace(name, parse_state_set(out.decls));
            } else if (head.text == "post") {
                std::string name = name_token("post name");
                require_space(out.decls);
                out.decls.posts.emplace(name, parse_post(out.decls));
            } else if (head.text == "program") {
                std::string name = name_token("program name");
                expect_punct("=");
                Term t = parse_par();
                expect_punct(";");
                out.decls.programs.emplace(name, std::move(t));
            } else {
                lex_.error("unknown declaration '" + head.text + "'");
            }
        }
        return out;
    }

    void expect_end() {
        if (lex_.peek().kind != Token::Kind::End) lex_.error("trailing input");
    }

  private:
    void require_space(const Declarations& d) {
        if (!d.space) lex_.error("a states declaration must come first");
    }

    Token expect_ident(const std::string& what) {
        if (lex_.peek().kind != Token::Kind::Ident) lex_.error("expected " + what);
        return lex_.take();
    }

    std::string name_token(const std::string& what) {
        Token t = expect_ident(what);
        if (is_keyword(t.text)) lex_.error("'" + t.text + "' is reserved");
        return t.text;
    }

    void expect_punct(const std::string& p) {
        if (lex_.peek().kind != Token::Kind::Punct || lex_.peek().text != p)
            lex_.error("expected '" + p + "'");
        lex_.take();
    }

    bool eat_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
            lex_.take();
            return true;
        }
        return false;
    }

    Rat number(const std::string& what) {
        if (lex_.peek().kind != Token::Kind::Number) lex_.error("expected " + what);
        return rat_from_string(lex_.take().text);
    }

    Rat probability() {
        Rat p = number("probability literal");
        if (p < 0 || p > 1) lex_.error("probability literal outside [0,1]");
        return p;
    }

    int state_index(const Declarations& d) {
        if (lex_.peek().kind != Token::Kind::Ident && lex_.peek().kind != Token::Kind::Number)
            lex_.error("expected a state identifier");
        Token t = lex_.take();
        if (!d.space->has(t.text))
            fail("state-space", "unknown state identifier '" + t.text + "' at line " +
                                    std::to_string(t.pos.line));
        return d.space->index_of(t.text);
    }

    std::vector<bool> parse_state_set(const Declarations& d) {
        expect_punct("{");
        std::vector<bool> member(static_cast<std::size_t>(d.space->size()), false);
        while (!eat_punct("}")) member[static_cast<std::size_t>(state_index(d))] = true;
        return member;
    }

    Distribution parse_distribution(const Declarations& d) {
        expect_punct("{");
        WeightEntries entries;
        for (;;) {
            int s = state_index(d);
            expect_punct(":");
            entries.emplace_back(s, probability());
            if (eat_punct("}")) break;
            expect_punct(",");
        }
        return Distribution(d.space, std::move(entries));
    }

    ConvexProgram parse_atom_body(const Declarations& d) {
        expect_punct("{");
        std::vector<std::vector<Distribution>> rows(static_cast<std::size_t>(d.space->size()));
        while (!eat_punct("}")) {
            int s = state_index(d);
            expect_punct("->");
            auto& row = rows[static_cast<std::size_t>(s)];
            if (!row.empty()) lex_.error("duplicate atom row");
            row.push_back(parse_distribution(d));
            while (eat_punct("|")) row.push_back(parse_distribution(d));
            expect_punct(";");
        }
        std::vector<ConvexSet> body;
        for (int s = 0; s < d.space->size(); ++s) {
            if (rows[static_cast<std::size_t>(s)].empty())
                fail("feasibility",
                     "atom leaves state '" + d.space->name(s) + "' without a distribution");
            body.push_back(hull_reduce(d.space, rows[static_cast<std::size_t>(s)]));
        }
        return ConvexProgram::program(d.space, std::move(body));
    }

    PostSpec parse_post(const Declarations& d) {
        expect_punct("{");
        PostSpec spec;
        while (!eat_punct("}")) {
            Token p = expect_ident("'P'");
            if (p.text != "P") lex_.error("post items look like P(SET) >= r");
            expect_punct("(");
            std::string set_name = name_token("set name");
            if (!d.sets.count(set_name))
                fail("syntax", "undeclared set '" + set_name + "'");
            expect_punct(")");
            bool eq;
            if (eat_punct(">="))
                eq = false;
            else if (eat_punct("=="))
                eq = true;
            else
                lex_.error("expected '>=' or '=='");
            Rat rhs = number("bound");
            expect_punct(";");
            spec.items.push_back(PostSpec::Item{set_name, eq, rhs});
        }
        return spec;
    }

    Term parse_par() {
        Term t = parse_choice();
        while (eat_punct("||")) {
            Term rhs = parse_choice();
            Term par;
            par.kind = Term::Kind::Par;
            par.pos = t.pos;
            par.children = {std::move(t), std::move(rhs)};
            t = std::move(par);
        }
        return t;
    }

    Term parse_choice() {
        Term t = parse_seq();
        for (;;) {
            if (eat_punct("+")) {
                Term rhs = parse_seq();
                Term ch;
                ch.kind = Term::Kind::Choice;
                ch.pos = t.pos;
                ch.children = {std::move(t), std::move(rhs)};
                t = std::move(ch);
            } else if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "[") {
                lex_.take();
                Rat p = probability();
                expect_punct("]");
                Term rhs = parse_seq();
                Term ch;
                ch.kind = Term::Kind::PChoice;
                ch.pos = t.pos;
                ch.prob = p;
                ch.children = {std::move(t), std::move(rhs)};
                t = std::move(ch);
            } else {
                return t;
            }
        }
    }

    // The token after ';' decides whether it sequences or terminates a
    // program declaration: a declaration keyword or end of input ends the term.
    bool seq_continues() const {
        const Token& cur = lex_.peek();
        if (cur.kind != Token::Kind::Punct || cur.text != ";") return false;
        const Token& nxt = lex_.peek2();
        if (nxt.kind == Token::Kind::Punct) return nxt.text == "(";
        if (nxt.kind != Token::Kind::Ident) return false;
        if (nxt.text == "skip" || nxt.text == "abort" || nxt.text == "if" || nxt.text == "star")
            return true;
        return !is_keyword(nxt.text);
    }

    Term parse_seq() {
        Term t = parse_primary();
        while (seq_continues()) {
            lex_.take();
            Term rhs = parse_primary();
            Term sq;
            sq.kind = Term::Kind::Seq;
            sq.pos = t.pos;
            sq.children = {std::move(t), std::move(rhs)};
            t = std::move(sq);
        }
        return t;
    }

    Term parse_primary() {
        if (eat_punct("(")) {
            Term t = parse_par();
            expect_punct(")");
            return t;
        }
        Token tok = expect_ident("a term");
        Term t;
        t.pos = tok.pos;
        if (tok.text == "skip") {
            t.kind = Term::Kind::Skip;
            return t;
        }
        if (tok.text == "abort") {
            t.kind = Term::Kind::Abort;
            return t;
        }
        if (tok.text == "if") {
            t.kind = Term::Kind::If;
            t.name = name_token("guard name");
            Token kw = expect_ident("'then'");
            if (kw.text != "then") lex_.error("expected 'then'");
            Term thn = parse_primary();
            kw = expect_ident("'else'");
            if (kw.text != "else") lex_.error("expected 'else'");
            Term els = parse_primary();
            t.children = {std::move(thn), std::move(els)};
            return t;
        }
        if (tok.text == "star") {
            t.kind = Term::Kind::Star;
            expect_punct("(");
            Term body = parse_par();
            expect_punct(",");
            Term exit = parse_par();
            expect_punct(",");
            Rat d = number("star depth");
            if (d < 0 || d.get_den() != 1) lex_.error("star depth must be a natural number");
            t.depth = static_cast<int>(d.get_num().get_si());
            expect_punct(")");
            t.children = {std::move(body), std::move(exit)};
            return t;
        }
        if (is_keyword(tok.text)) lex_.error("'" + tok.text + "' is reserved");
        t.kind = Term::Kind::Atom;
        t.name = tok.text;
        return t;
    }

    Lexer lex_;
};

int precedence(Term::Kind k) {
    switch (k) {
    case Term::Kind::Par: return 0;
    case Term::Kind::Choice:
    case Term::Kind::PChoice: return 1;
    case Term::Kind::Seq: return 2;
    default: return 3;
    }
}

void pretty_rec(const Term& t, std::ostringstream& out, int min_prec) {
    int prec = precedence(t.kind);
    bool paren = prec < min_prec;
    if (paren) out << "(";
    switch (t.kind) {
    case Term::Kind::Atom: out << t.name; break;
    case Term::Kind::Skip: out << "skip"; break;
    case Term::Kind::Abort: out << "abort"; break;
    case Term::Kind::Seq:
        pretty_rec(t.children[0], out, 2);
        out << " ; ";
        pretty_rec(t.children[1], out, 3);
        break;
    case Term::Kind::Choice:
        pretty_rec(t.children[0], out, 1);
        out << " + ";
        pretty_rec(t.children[1], out, 2);
        break;
    case Term::Kind::PChoice:
        pretty_rec(t.children[0], out, 1);
        out << " [" << rat_to_string(t.prob) << "] ";
        pretty_rec(t.children[1], out, 2);
        break;
    case Term::Kind::Par:
        pretty_rec(t.children[0], out, 0);
        out << " || ";
        pretty_rec(t.children[1], out, 1);
        break;
    case Term::Kind::If:
        out << "if " << t.name << " then ";
        pretty_rec(t.children[0], out, 3);
        out << " else ";
        pretty_rec(t.children[1], out, 3);
        break;
    case Term::Kind::Star:
        out << "star(";
        pretty_rec(t.children[0], out, 0);
        out << ", ";
        pretty_rec(t.children[1], out, 0);
        out << ", " << t.depth << ")";
        break;
    }
    if (paren) out << ")";
}

// Single-event Program label when the term is atomic, nullopt otherwise.
std::optional<ConvexProgram> atomic_label(const Term& t, const Declarations& d) {
    switch (t.kind) {
    case Term::Kind::Atom: {
        auto it = d.atoms.find(t.name);
        if (it == d.atoms.end()) fail("syntax", "undeclared atom '" + t.name + "'");
        return it->second;
    }
    case Term::Kind::Skip: return ConvexProgram::skip(d.space);
    case Term::Kind::PChoice: {
        auto l = atomic_label(t.children[0], d);
        auto r = atomic_label(t.children[1], d);
        if (!l || !r) return std::nullopt;
        return prob_choice(*l, *r, t.prob);
    }
    default: return std::nullopt;
    }
}

} // namespace

ParsedFile parse_file(const std::string& text) {
    Parser p(text);
    return p.file();
}

Term parse_term(const std::string& text) {
    Parser p(text);
    Term t = p.term();
    p.expect_end();
    return t;
}

std::string pretty(const Term& t) {
    std::ostringstream out;
    pretty_rec(t, out, 0);
    return out.str();
}

IpBes elaborate(const Term& t, const Declarations& d) {
    if (!d.space) fail("syntax", "no states declaration in scope");
    switch (t.kind) {
    case Term::Kind::Atom: {
        auto it = d.atoms.find(t.name);
        if (it == d.atoms.end()) fail("syntax", "undeclared atom '" + t.name + "'");
        return IpBes::atomic(it->second, t.name);
    }
    case Term::Kind::Skip: return IpBes::unit(d.space);
    case Term::Kind::Abort: return IpBes::zero(d.space);
    case Term::Kind::Seq: return seq(elaborate(t.children[0], d), elaborate(t.children[1], d));
    case Term::Kind::Choice: return sum(elaborate(t.children[0], d), elaborate(t.children[1], d));
    case Term::Kind::Par: return par(elaborate(t.children[0], d), elaborate(t.children[1], d));
    case Term::Kind::PChoice: {
        // A probabilistic choice denotes one atomic event; anything larger
        // changes the semantics and must be written as a conditional.
        auto label = atomic_label(t, d);
        if (!label)
            fail("atomicity", "probabilistic choice over non-atomic operands at line " +
                                  std::to_string(t.pos.line) + "; split it with if/else");
        return IpBes::atomic(*label, "pchoice");
    }
    case Term::Kind::If: {
        auto it = d.guards.find(t.name);
        if (it == d.guards.end()) fail("syntax", "undeclared guard '" + t.name + "'");
        ConvexProgram guard = ConvexProgram::test(d.space, it->second);
        return sum(seq(IpBes::atomic(guard, t.name), elaborate(t.children[0], d)),
                   seq(IpBes::atomic(guard.negated(), "not_" + t.name),
                       elaborate(t.children[1], d)));
    }
    case Term::Kind::Star:
        return star_unfold(elaborate(t.children[0], d), elaborate(t.children[1], d), t.depth);
    }
    fail("internal", "unreachable");
}

ConvexProgram post_to_program(const PostSpec& spec, const Declarations& d) {
    int n = d.space->size();
    std::vector<HalfspaceConstraint> cs;
    for (const auto& item : spec.items) {
        RatVec coeff(static_cast<std::size_t>(n), Rat(0));
        const auto& member = d.sets.at(item.set_name);
        for (int s = 0; s < n; ++s)
            if (member[static_cast<std::size_t>(s)]) coeff[static_cast<std::size_t>(s)] = 1;
        cs.push_back(HalfspaceConstraint{std::move(coeff), item.rhs, item.equality});
    }
    ConvexSet set = ConvexSet::halfspaces(d.space, std::move(cs));
    if (set.is_empty()) fail("feasibility", "postcondition constraints are unsatisfiable");
    return ConvexProgram::program(d.space,
                                  std::vector<ConvexSet>(static_cast<std::size_t>(n), set));
}

} // namespace prgc
