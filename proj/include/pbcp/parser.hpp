#pragma once

// Recursive-descent parser for .pbcp action descriptions. Statements are
// keyword-led and end with '.'; schematic variables are bound in a trailing
// `where` clause and grounded here, honoring =/!= guards.

#include "pbcp/ast.hpp"
#include "pbcp/lexer.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pbcp {

struct ParseResult {
    std::optional<ActionDescription> description;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return description.has_value() && !has_errors(diagnostics); }
};

namespace detail {

struct Term {
    bool is_number = false;
    std::string text;
    SourcePos pos;
};

enum class AtomOp { BoolPos, BoolNeg, Eq, Neq };

struct RawAtom {
    std::string name;
    std::vector<Term> args;
    AtomOp op = AtomOp::BoolPos;
    Term value;
    SourcePos pos;
};

struct RawFormula {
    bool is_true = false;
    bool is_false = false;
    std::vector<RawAtom> atoms;
};

struct WhereItem {
    bool is_binding = false;
    std::string var;
    std::string sort;
    Term lhs, rhs;
    bool eq = true;
    SourcePos pos;
};

struct RawRow {
    Term value;
    Rational prob;
    SourcePos pos;
};

struct RawLaw {
    enum class Kind { Caused, Observed, Initially, Reward, Inertial, Default, PfDecl } kind;
    RawFormula head;
    RawAtom pf_atom;          // PfDecl
    std::vector<RawRow> rows; // PfDecl
    Term reward;              // Reward
    RawFormula cond;          // if
    RawFormula precond;       // after
    bool has_if = false;
    bool has_after = false;
    std::string unless_name;
    std::vector<WhereItem> where;
    SourcePos pos;
    int law_index = 0;
};

class Parser {
  public:
    explicit Parser(const std::string& src) { toks_ = lex(src, diags_); }

    ParseResult run() {
        splitStatements();
        ActionDescription d;
        // builtin boolean sort
        d.sorts.push_back(Sort{kBooleanSortName, {"false", "true"}});
        // pass 1: sorts and constant declarations
        for (auto& st : statements_) declPass(d, st);
        if (d.families.empty()) {
            diags_.push_back(make_error(SourcePos{1, 1}, "no constants declared"));
            return {std::nullopt, diags_};
        }
        instantiate_constants(d);
        buildConstantIndex(d);
        // pass 2: laws and groups
        int law_index = 0;
        for (auto& st : statements_) lawPass(d, st, law_index);
        if (has_errors(diags_)) return {std::nullopt, diags_};
        return {std::move(d), diags_};
    }

  private:
    std::vector<Token> toks_;
    std::vector<Diagnostic> diags_;
    std::vector<std::vector<Token>> statements_;
    std::map<std::pair<int, std::vector<int>>, int> constant_index_;

    // ---- statement splitting ----
    void splitStatements() {
        std::vector<Token> cur;
        for (auto& t : toks_) {
            if (t.kind == TokKind::End) break;
            if (t.kind == TokKind::Dot) {
                if (!cur.empty()) {
                    statements_.push_back(cur);
                    cur.clear();
                }
                continue;
            }
            cur.push_back(t);
        }
        if (!cur.empty()) {
            diags_.push_back(make_error(cur.front().pos, "statement not terminated by '.'"));
            statements_.push_back(cur);
        }
    }

    // ---- token cursor over one statement ----
    struct Cursor {
        const std::vector<Token>* toks;
        std::size_t i = 0;
        const Token& peek(int k = 0) const {
            std::size_t j = i + k;
            static Token end{TokKind::End, "", {}};
            return j < toks->size() ? (*toks)[j] : end;
        }
        Token next() {
            Token t = peek();
            if (i < toks->size()) ++i;
            return t;
        }
        bool atEnd() const { return i >= toks->size(); }
    };

    bool expect(Cursor& c, TokKind k, const char* what) {
        if (c.peek().kind == k) {
            c.next();
            return true;
        }
        diags_.push_back(make_error(c.peek().pos,
                                    std::string("expected ") + what + " but found '" +
                                        (c.atEnd() ? "end of statement" : c.peek().text) + "'"));
        return false;
    }

    static bool isKeyword(const Token& t, const char* kw) {
        return t.kind == TokKind::Ident && t.text == kw;
    }

    // ---- pass 1: declarations ----
    void declPass(ActionDescription& d, const std::vector<Token>& st) {
        Cursor c{&st, 0};
        const Token& head = c.peek();
        if (head.kind != TokKind::Ident) return;
        const std::string& kw = head.text;
        if (kw == "sort") {
            c.next();
            parseSortDecl(d, c);
        } else if (kw == "fluent" || kw == "sdFluent" || kw == "rigid" || kw == "action" ||
                   kw == "pf" || kw == "initpf" || kw == "observation") {
            c.next();
            parseConstantDecl(d, c, kw, head.pos);
        }
    }

    void parseSortDecl(ActionDescription& d, Cursor& c) {
        Token name = c.peek();
        if (!expect(c, TokKind::Ident, "sort name")) return;
        if (d.sort_index(name.text) >= 0) {
            diags_.push_back(make_error(name.pos, "duplicate sort '" + name.text + "'"));
            return;
        }
        if (!expect(c, TokKind::Eq, "'='")) return;
        if (!expect(c, TokKind::LBrace, "'{'")) return;
        Sort s;
        s.name = name.text;
        while (true) {
            Term m = parseTerm(c);
            if (m.text.empty()) return;
            if (s.member_index(m.text) >= 0)
                diags_.push_back(make_error(m.pos, "duplicate member '" + m.text + "' in sort '" +
                                                       s.name + "'"));
            else
                s.members.push_back(m.text);
            if (c.peek().kind == TokKind::Comma) {
                c.next();
                continue;
            }
            break;
        }
        if (!expect(c, TokKind::RBrace, "'}'")) return;
        if (s.members.empty()) {
            diags_.push_back(make_error(name.pos, "sort '" + s.name + "' has no members"));
            return;
        }
        d.sorts.push_back(std::move(s));
    }

    void parseConstantDecl(ActionDescription& d, Cursor& c, const std::string& kw, SourcePos pos) {
        Token name = c.peek();
        if (!expect(c, TokKind::Ident, "constant name")) return;
        if (d.family_index(name.text) >= 0) {
            diags_.push_back(make_error(name.pos, "duplicate constant '" + name.text + "'"));
            return;
        }
        ConstantFamily fam;
        fam.name = name.text;
        fam.pos = pos;
        if (kw == "fluent") fam.kind = ConstantKind::RegularFluent;
        else if (kw == "sdFluent") fam.kind = ConstantKind::SdFluent;
        else if (kw == "rigid") fam.kind = ConstantKind::Rigid;
        else if (kw == "action") fam.kind = ConstantKind::Action;
        else if (kw == "pf") fam.kind = ConstantKind::Pf;
        else if (kw == "initpf") fam.kind = ConstantKind::InitPf;
        else fam.kind = ConstantKind::Observation;
        if (c.peek().kind == TokKind::LParen) {
            c.next();
            while (true) {
                Token s = c.peek();
                if (!expect(c, TokKind::Ident, "argument sort name")) return;
                int si = d.sort_index(s.text);
                if (si < 0) {
                    diags_.push_back(make_error(s.pos, "undeclared sort '" + s.text + "'"));
                    return;
                }
                fam.arg_sorts.push_back(si);
                if (c.peek().kind == TokKind::Comma) {
                    c.next();
                    continue;
                }
                break;
            }
            if (!expect(c, TokKind::RParen, "')'")) return;
        }
        int vs = -1;
        if (c.peek().kind == TokKind::DoubleColon) {
            c.next();
            Token s = c.peek();
            if (!expect(c, TokKind::Ident, "value sort name")) return;
            vs = d.sort_index(s.text);
            if (vs < 0) {
                diags_.push_back(make_error(s.pos, "undeclared sort '" + s.text + "'"));
                return;
            }
        }
        if (fam.kind == ConstantKind::Action) {
            if (vs >= 0 && d.sorts[vs].name != kBooleanSortName) {
                diags_.push_back(
                    make_error(pos, "action constant '" + fam.name + "' must be Boolean"));
                return;
            }
            vs = d.sort_index(kBooleanSortName);
        }
        if (vs < 0 && fam.kind != ConstantKind::Observation) vs = d.sort_index(kBooleanSortName);
        fam.value_sort = vs;
        if (vs >= 0) fam.values = d.sorts[vs].members;
        if (fam.kind == ConstantKind::Observation) {
            if (fam.value_index(kNaValue) < 0) fam.values.push_back(kNaValue);
        }
        d.families.push_back(std::move(fam));
    }

    void buildConstantIndex(ActionDescription& d) {
        constant_index_.clear();
        for (std::size_t i = 0; i < d.constants.size(); ++i)
            constant_index_[{d.constants[i].family, d.constants[i].args}] = static_cast<int>(i);
    }

    int lookupConstant(const ActionDescription& d, int family, const std::vector<int>& args) {
        auto it = constant_index_.find({family, args});
        (void)d;
        return it == constant_index_.end() ? -1 : it->second;
    }

    // ---- shared term / atom / formula parsing ----
    Term parseTerm(Cursor& c) {
        Term t;
        t.pos = c.peek().pos;
        if (c.peek().kind == TokKind::Minus) {
            c.next();
            Token n = c.peek();
            if (!expect(c, TokKind::Number, "number after '-'")) return t;
            t.is_number = true;
            t.text = "-" + n.text;
            return t;
        }
        if (c.peek().kind == TokKind::Number) {
            t.is_number = true;
            t.text = c.next().text;
            return t;
        }
        if (c.peek().kind == TokKind::Ident) {
            t.text = c.next().text;
            return t;
        }
        diags_.push_back(make_error(c.peek().pos, "expected identifier or number"));
        return t;
    }

    bool parseRawAtom(Cursor& c, RawAtom& a) {
        a.pos = c.peek().pos;
        if (c.peek().kind == TokKind::Tilde) {
            c.next();
            Token n = c.peek();
            if (!expect(c, TokKind::Ident, "constant name after '~'")) return false;
            a.name = n.text;
            a.op = AtomOp::BoolNeg;
            parseAtomArgs(c, a);
            return true;
        }
        Token n = c.peek();
        if (!expect(c, TokKind::Ident, "constant name")) return false;
        a.name = n.text;
        parseAtomArgs(c, a);
        if (c.peek().kind == TokKind::Eq) {
            c.next();
            a.op = AtomOp::Eq;
            a.value = parseTerm(c);
        } else if (c.peek().kind == TokKind::Neq) {
            c.next();
            a.op = AtomOp::Neq;
            a.value = parseTerm(c);
        } else {
            a.op = AtomOp::BoolPos;
        }
        return true;
    }

    void parseAtomArgs(Cursor& c, RawAtom& a) {
        if (c.peek().kind != TokKind::LParen) return;
        c.next();
        while (true) {
            a.args.push_back(parseTerm(c));
            if (c.peek().kind == TokKind::Comma) {
                c.next();
                continue;
            }
            break;
        }
        expect(c, TokKind::RParen, "')'");
    }

    RawFormula parseRawFormula(Cursor& c) {
        RawFormula f;
        bool first = true;
        while (true) {
            if (isKeyword(c.peek(), "true") && c.peek(1).kind != TokKind::Eq &&
                c.peek(1).kind != TokKind::Neq && c.peek(1).kind != TokKind::LParen) {
                c.next();
                if (!first) diags_.push_back(make_error(c.peek().pos, "'true' cannot be conjoined"));
            } else if (isKeyword(c.peek(), "false") && c.peek(1).kind != TokKind::Eq &&
                       c.peek(1).kind != TokKind::Neq && c.peek(1).kind != TokKind::LParen) {
                Token t = c.next();
                if (!first || (c.peek().kind == TokKind::Amp))
                    diags_.push_back(make_error(t.pos, "'false' cannot be conjoined"));
                f.is_false = true;
            } else {
                RawAtom a;
                if (!parseRawAtom(c, a)) return f;
                f.atoms.push_back(std::move(a));
            }
            first = false;
            if (c.peek().kind == TokKind::Amp) {
                c.next();
                continue;
            }
            break;
        }
        f.is_true = !f.is_false && f.atoms.empty();
        return f;
    }

    std::vector<WhereItem> parseWhere(Cursor& c) {
        std::vector<WhereItem> items;
        c.next();  // 'where'
        while (true) {
            WhereItem it;
            it.pos = c.peek().pos;
            Term lhs = parseTerm(c);
            if (c.peek().kind == TokKind::Colon) {
                c.next();
                Token s = c.peek();
                if (!expect(c, TokKind::Ident, "sort name")) return items;
                it.is_binding = true;
                it.var = lhs.text;
                it.sort = s.text;
                if (lhs.is_number)
                    diags_.push_back(make_error(lhs.pos, "variable name expected before ':'"));
            } else if (c.peek().kind == TokKind::Eq || c.peek().kind == TokKind::Neq) {
                it.eq = c.next().kind == TokKind::Eq;
                it.lhs = lhs;
                it.rhs = parseTerm(c);
            } else {
                diags_.push_back(make_error(c.peek().pos, "expected ':', '=' or '!=' in where clause"));
                return items;
            }
            items.push_back(std::move(it));
            if (c.peek().kind == TokKind::Comma) {
                c.next();
                continue;
            }
            break;
        }
        return items;
    }

    // ---- pass 2: laws ----
    void lawPass(ActionDescription& d, const std::vector<Token>& st, int& law_index) {
        Cursor c{&st, 0};
        const Token& head = c.peek();
        if (head.kind != TokKind::Ident) {
            diags_.push_back(make_error(head.pos, "expected statement keyword"));
            return;
        }
        const std::string& kw = head.text;
        if (kw == "sort" || kw == "fluent" || kw == "sdFluent" || kw == "rigid" ||
            kw == "action" || kw == "pf" || kw == "initpf" || kw == "observation")
            return;  // handled in pass 1
        if (kw == "group") {
            c.next();
            parseGroup(d, c);
            return;
        }
        RawLaw law;
        law.pos = head.pos;
        law.law_index = law_index++;
        if (kw == "caused") {
            c.next();
            if (looksLikePfDecl(c)) {
                law.kind = RawLaw::Kind::PfDecl;
                if (!parsePfDecl(c, law)) return;
            } else {
                law.kind = RawLaw::Kind::Caused;
                law.head = parseRawFormula(c);
            }
        } else if (kw == "observed") {
            c.next();
            law.kind = RawLaw::Kind::Observed;
            law.head = parseRawFormula(c);
        } else if (kw == "initially") {
            c.next();
            law.kind = RawLaw::Kind::Initially;
            law.head = parseRawFormula(c);
        } else if (kw == "reward") {
            c.next();
            law.kind = RawLaw::Kind::Reward;
            law.reward = parseTerm(c);
        } else if (kw == "inertial") {
            c.next();
            law.kind = RawLaw::Kind::Inertial;
            RawAtom a;
            if (!parseRawAtom(c, a)) return;
            if (a.op != AtomOp::BoolPos) {
                diags_.push_back(make_error(a.pos, "inertial expects a constant, not an atom"));
                return;
            }
            law.head.atoms.push_back(std::move(a));
        } else if (kw == "default") {
            c.next();
            law.kind = RawLaw::Kind::Default;
            law.head = parseRawFormula(c);
        } else {
            diags_.push_back(make_error(head.pos, "unknown statement keyword '" + kw + "'"));
            return;
        }
        // trailing clauses
        while (!c.atEnd()) {
            if (isKeyword(c.peek(), "if")) {
                c.next();
                law.cond = parseRawFormula(c);
                law.has_if = true;
            } else if (isKeyword(c.peek(), "after")) {
                c.next();
                law.precond = parseRawFormula(c);
                law.has_after = true;
            } else if (isKeyword(c.peek(), "unless")) {
                c.next();
                Token n = c.peek();
                if (!expect(c, TokKind::Ident, "constant name after 'unless'")) return;
                law.unless_name = n.text;
            } else if (isKeyword(c.peek(), "where")) {
                law.where = parseWhere(c);
            } else {
                diags_.push_back(make_error(c.peek().pos,
                                            "unexpected token '" + c.peek().text + "' in law"));
                return;
            }
        }
        groundLaw(d, law);
    }

    bool looksLikePfDecl(Cursor c) {
        // NAME ( args )? = {
        if (c.peek().kind != TokKind::Ident) return false;
        c.next();
        if (c.peek().kind == TokKind::LParen) {
            int depth = 0;
            while (!c.atEnd()) {
                if (c.peek().kind == TokKind::LParen) ++depth;
                if (c.peek().kind == TokKind::RParen) {
                    c.next();
                    if (--depth == 0) break;
                    continue;
                }
                c.next();
            }
        }
        return c.peek().kind == TokKind::Eq && c.peek(1).kind == TokKind::LBrace;
    }

    bool parsePfDecl(Cursor& c, RawLaw& law) {
        if (!parseRawAtomNameArgs(c, law.pf_atom)) return false;
        if (!expect(c, TokKind::Eq, "'='")) return false;
        if (!expect(c, TokKind::LBrace, "'{'")) return false;
        while (true) {
            RawRow row;
            row.pos = c.peek().pos;
            row.value = parseTerm(c);
            if (!expect(c, TokKind::Colon, "':'")) return false;
            row.prob = parseProbability(c);
            law.rows.push_back(std::move(row));
            if (c.peek().kind == TokKind::Comma) {
                c.next();
                continue;
            }
            break;
        }
        return expect(c, TokKind::RBrace, "'}'");
    }

    bool parseRawAtomNameArgs(Cursor& c, RawAtom& a) {
        a.pos = c.peek().pos;
        Token n = c.peek();
        if (!expect(c, TokKind::Ident, "constant name")) return false;
        a.name = n.text;
        parseAtomArgs(c, a);
        return true;
    }

    Rational parseProbability(Cursor& c) {
        Token n = c.peek();
        if (!expect(c, TokKind::Number, "probability")) return Rational(0);
        if (c.peek().kind == TokKind::Slash) {
            c.next();
            Token den = c.peek();
            if (!expect(c, TokKind::Number, "denominator")) return Rational(0);
            return parse_rational(n.text + "/" + den.text);
        }
        return parse_rational(n.text);
    }

    void parseGroup(ActionDescription& d, Cursor& c) {
        Token name = c.peek();
        if (!expect(c, TokKind::Ident, "group name")) return;
        for (auto& g : d.groups)
            if (g.name == name.text) {
                diags_.push_back(make_error(name.pos, "duplicate group '" + name.text + "'"));
                return;
            }
        if (!expect(c, TokKind::LBrace, "'{'")) return;
        ActionGroup g;
        g.name = name.text;
        g.pos = name.pos;
        while (true) {
            RawAtom a;
            if (!parseRawAtomNameArgs(c, a)) return;
            int fam = d.family_index(a.name);
            if (fam < 0) {
                diags_.push_back(make_error(a.pos, "undeclared constant '" + a.name + "'"));
                return;
            }
            if (d.families[fam].kind != ConstantKind::Action) {
                diags_.push_back(make_error(a.pos, "group member '" + a.name + "' is not an action"));
                return;
            }
            if (a.args.empty()) {
                for (std::size_t i = 0; i < d.constants.size(); ++i)
                    if (d.constants[i].family == fam) g.actions.push_back(static_cast<int>(i));
            } else {
                std::vector<int> args;
                if (!resolveArgs(d, fam, a, {}, args)) return;
                int id = lookupConstant(d, fam, args);
                if (id < 0) {
                    diags_.push_back(make_error(a.pos, "no such ground action"));
                    return;
                }
                g.actions.push_back(id);
            }
            if (c.peek().kind == TokKind::Comma) {
                c.next();
                continue;
            }
            break;
        }
        if (!expect(c, TokKind::RBrace, "'}'")) return;
        std::sort(g.actions.begin(), g.actions.end());
        g.actions.erase(std::unique(g.actions.begin(), g.actions.end()), g.actions.end());
        d.groups.push_back(std::move(g));
    }

    // ---- grounding ----
    using Binding = std::map<std::string, std::string>;

    std::string substitute(const Term& t, const Binding& b) {
        if (!t.is_number) {
            auto it = b.find(t.text);
            if (it != b.end()) return it->second;
        }
        return t.text;
    }

    bool resolveArgs(ActionDescription& d, int fam, const RawAtom& a, const Binding& b,
                     std::vector<int>& out) {
        const auto& sorts = d.families[fam].arg_sorts;
        if (a.args.size() != sorts.size()) {
            diags_.push_back(make_error(a.pos, "constant '" + a.name + "' expects " +
                                                   std::to_string(sorts.size()) + " argument(s), got " +
                                                   std::to_string(a.args.size())));
            return false;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            std::string v = substitute(a.args[i], b);
            int mi = d.sorts[sorts[i]].member_index(v);
            if (mi < 0) {
                diags_.push_back(make_error(a.args[i].pos,
                                            "'" + v + "' is not a member of sort '" +
                                                d.sorts[sorts[i]].name +
                                                "' (missing where binding?)"));
                return false;
            }
            out.push_back(mi);
        }
        return true;
    }

    bool resolveLiteral(ActionDescription& d, const RawAtom& a, const Binding& b, Literal& out,
                        bool as_head) {
        int fam = d.family_index(a.name);
        if (fam < 0) {
            diags_.push_back(make_error(a.pos, "undeclared constant '" + a.name + "'"));
            return false;
        }
        std::vector<int> args;
        if (!resolveArgs(d, fam, a, b, args)) return false;
        int id = lookupConstant(d, fam, args);
        const auto& famv = d.families[fam];
        out.constant = id;
        switch (a.op) {
            case AtomOp::BoolPos:
            case AtomOp::BoolNeg: {
                int ti = famv.value_index("true");
                int fi = famv.value_index("false");
                if (ti < 0 || fi < 0) {
                    diags_.push_back(make_error(a.pos, "constant '" + a.name +
                                                           "' is not Boolean; write " + a.name +
                                                           "=value"));
                    return false;
                }
                out.value = a.op == AtomOp::BoolPos ? ti : fi;
                out.positive = true;
                return true;
            }
            case AtomOp::Eq:
            case AtomOp::Neq: {
                std::string v = substitute(a.value, b);
                int vi = famv.value_index(v);
                if (vi < 0) {
                    diags_.push_back(make_error(a.value.pos,
                                                "'" + v + "' is not in the domain of '" +
                                                    a.name + "'"));
                    return false;
                }
                out.value = vi;
                out.positive = a.op == AtomOp::Eq;
                if (as_head && !out.positive) {
                    diags_.push_back(make_error(a.pos, "'!=' cannot appear in a law head"));
                    return false;
                }
                return true;
            }
        }
        return false;
    }

    bool resolveFormula(ActionDescription& d, const RawFormula& rf, const Binding& b, Formula& out) {
        out.is_false = rf.is_false;
        out.lits.clear();
        for (const auto& a : rf.atoms) {
            Literal l;
            if (!resolveLiteral(d, a, b, l, false)) return false;
            out.lits.push_back(l);
        }
        return true;
    }

    int ensureUnlessConstant(ActionDescription& d, const std::string& name, SourcePos pos) {
        int fam = d.family_index(name);
        if (fam >= 0) {
            if (d.families[fam].value_index("true") < 0 || !d.families[fam].arg_sorts.empty()) {
                diags_.push_back(make_error(pos, "'unless " + name +
                                                     "' requires a Boolean zero-argument constant"));
                return -1;
            }
            return lookupConstant(d, fam, {});
        }
        // auto-declare as a rigid Boolean, false by default
        ConstantFamily f;
        f.name = name;
        f.kind = ConstantKind::Rigid;
        f.value_sort = d.sort_index(kBooleanSortName);
        f.values = d.sorts[f.value_sort].members;
        f.pos = pos;
        d.families.push_back(std::move(f));
        const int fam_id = static_cast<int>(d.families.size()) - 1;
        GroundConstant gc;
        gc.family = fam_id;
        gc.display = name;
        d.constants.push_back(std::move(gc));
        int id = static_cast<int>(d.constants.size()) - 1;
        constant_index_[{fam_id, std::vector<int>{}}] = id;
        CausalLaw def;
        def.kind = LawKind::Default;
        def.head = Literal{id, d.families.back().value_index("false"), true};
        def.pos = pos;
        d.laws.push_back(std::move(def));
        return id;
    }

    // Enumerates where-bindings, applies guards, and emits ground laws.
    void groundLaw(ActionDescription& d, const RawLaw& law) {
        std::vector<std::pair<std::string, int>> vars;  // (name, sort)
        std::vector<WhereItem> guards;
        for (const auto& it : law.where) {
            if (it.is_binding) {
                int si = d.sort_index(it.sort);
                if (si < 0) {
                    diags_.push_back(make_error(it.pos, "undeclared sort '" + it.sort + "'"));
                    return;
                }
                for (auto& v : vars)
                    if (v.first == it.var) {
                        diags_.push_back(make_error(it.pos, "duplicate variable '" + it.var + "'"));
                        return;
                    }
                vars.push_back({it.var, si});
            } else {
                guards.push_back(it);
            }
        }
        int unless_id = -1;
        if (!law.unless_name.empty()) {
            if (law.kind != RawLaw::Kind::Caused && law.kind != RawLaw::Kind::PfDecl) {
                diags_.push_back(make_error(law.pos, "'unless' is not applicable to this law form"));
                return;
            }
            unless_id = ensureUnlessConstant(d, law.unless_name, law.pos);
            if (unless_id < 0) return;
        }
        std::vector<int> idx(vars.size(), 0);
        int tuple_index = 0;
        while (true) {
            Binding b;
            for (std::size_t i = 0; i < vars.size(); ++i)
                b[vars[i].first] = d.sorts[vars[i].second].members[idx[i]];
            bool pass = true;
            for (const auto& g : guards) {
                std::string l = substitute(g.lhs, b);
                std::string r = substitute(g.rhs, b);
                if ((l == r) != g.eq) {
                    pass = false;
                    break;
                }
            }
            if (pass) emitGroundLaw(d, law, b, unless_id, tuple_index++);
            // advance odometer
            int p = static_cast<int>(idx.size()) - 1;
            while (p >= 0) {
                if (++idx[p] < static_cast<int>(d.sorts[vars[p].second].members.size())) break;
                idx[p] = 0;
                --p;
            }
            if (p < 0) break;
        }
    }

    bool checkSlot(ActionDescription& d, const Formula& f, std::initializer_list<ConstantKind> ok,
                   const char* lawname, const char* slot, SourcePos pos) {
        for (const auto& l : f.lits) {
            ConstantKind k = d.kind_of(l.constant);
            bool found = false;
            for (auto kk : ok)
                if (kk == k) found = true;
            if (!found) {
                if (k == ConstantKind::Observation)
                    diags_.push_back(make_error(
                        pos, std::string("observation constant '") +
                                 d.constants[l.constant].display +
                                 "' can occur only in observation dynamic laws (or static constraints)"));
                else
                    diags_.push_back(make_error(
                        pos, std::string(kind_name(k)) + " constant '" +
                                 d.constants[l.constant].display + "' cannot appear in the " + slot +
                                 " of a " + lawname));
                return false;
            }
        }
        return true;
    }

    void emitGroundLaw(ActionDescription& d, const RawLaw& law, const Binding& b, int unless_id,
                       int tuple_index) {
        CausalLaw out;
        out.pos = law.pos;
        out.law_index = law.law_index;
        out.tuple_index = tuple_index;
        out.unless_ab = unless_id;
        switch (law.kind) {
            case RawLaw::Kind::PfDecl: {
                int fam = d.family_index(law.pf_atom.name);
                if (fam < 0) {
                    diags_.push_back(make_error(law.pf_atom.pos,
                                                "undeclared constant '" + law.pf_atom.name + "'"));
                    return;
                }
                const bool isInit = d.families[fam].kind == ConstantKind::InitPf;
                if (d.families[fam].kind != ConstantKind::Pf && !isInit) {
                    diags_.push_back(make_error(law.pf_atom.pos,
                                                "probability rows require a pf or initpf constant"));
                    return;
                }
                std::vector<int> args;
                if (!resolveArgs(d, fam, law.pf_atom, b, args)) return;
                out.pf_constant = lookupConstant(d, fam, args);
                out.kind = isInit ? LawKind::InitPfDecl : LawKind::PfDecl;
                const auto& famv = d.families[fam];
                std::set<int> seen;
                Rational sum(0);
                for (const auto& row : law.rows) {
                    std::string v = substitute(row.value, b);
                    int vi = famv.value_index(v);
                    if (vi < 0) {
                        diags_.push_back(make_error(row.pos, "'" + v + "' is not in the domain of '" +
                                                                 law.pf_atom.name + "'"));
                        return;
                    }
                    if (!seen.insert(vi).second) {
                        diags_.push_back(make_error(row.pos, "duplicate probability row for '" + v + "'"));
                        return;
                    }
                    if (!(row.prob > 0 && row.prob < 1)) {
                        diags_.push_back(make_error(row.pos,
                                                    "probability must be strictly between 0 and 1"));
                        return;
                    }
                    sum += row.prob;
                    out.pf_rows.push_back({vi, row.prob});
                }
                if (sum != Rational(1)) {
                    diags_.push_back(make_error(law.pos, "probability rows sum to " + to_string(sum) +
                                                             ", expected 1"));
                    return;
                }
                if (static_cast<int>(out.pf_rows.size()) != static_cast<int>(famv.values.size())) {
                    diags_.push_back(make_error(law.pos,
                                                "probability rows must cover the whole domain of '" +
                                                    law.pf_atom.name + "'"));
                    return;
                }
                if (isInit && (law.has_if || unless_id >= 0)) {
                    diags_.push_back(make_error(law.pos,
                                                "initpf declarations take no condition"));
                    return;
                }
                if (law.has_if && !resolveFormula(d, law.cond, b, out.cond)) return;
                if (!checkSlot(d, out.cond, {ConstantKind::Rigid}, "pf declaration", "condition",
                               law.pos))
                    return;
                if (law.has_after) {
                    diags_.push_back(make_error(law.pos, "pf declarations take no after clause"));
                    return;
                }
                break;
            }
            case RawLaw::Kind::Caused: {
                if (law.has_after)
                    out.kind = LawKind::FluentDynamic;
                else
                    out.kind = LawKind::Static;
                if (!resolveHeads(d, law, b, out)) return;
                if (!resolveFormula(d, law.cond, b, out.cond)) return;
                if (!resolveFormula(d, law.precond, b, out.precond)) return;
                // emitted one law per head literal inside resolveHeads
                return;
            }
            case RawLaw::Kind::Observed: {
                out.kind = LawKind::ObservationDynamic;
                if (!law.has_after) {
                    diags_.push_back(make_error(law.pos,
                                                "observation dynamic law requires an after clause"));
                    return;
                }
                if (!resolveHeads(d, law, b, out)) return;
                if (!resolveFormula(d, law.cond, b, out.cond)) return;
                if (!resolveFormula(d, law.precond, b, out.precond)) return;
                return;
            }
            case RawLaw::Kind::Initially: {
                out.kind = LawKind::InitStatic;
                if (law.has_after) {
                    diags_.push_back(make_error(law.pos, "initial static laws take no after clause"));
                    return;
                }
                if (!resolveHeads(d, law, b, out)) return;
                if (!resolveFormula(d, law.cond, b, out.cond)) return;
                return;
            }
            case RawLaw::Kind::Reward: {
                out.kind = LawKind::Utility;
                std::string v = substitute(law.reward, b);
                try {
                    out.utility_value = parse_rational(v);
                } catch (...) {
                    diags_.push_back(make_error(law.pos, "reward value '" + v + "' is not numeric"));
                    return;
                }
                if (!resolveFormula(d, law.cond, b, out.cond)) return;
                if (!resolveFormula(d, law.precond, b, out.precond)) return;
                if (!law.has_after) {
                    // `reward v if G` sugar: the whole condition is evaluated at step i
                    out.precond = out.cond;
                    out.cond = Formula{};
                }
                if (!checkSlot(d, out.cond,
                               {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                ConstantKind::Rigid},
                               "utility law", "if part", law.pos))
                    return;
                if (!checkSlot(d, out.precond,
                               {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                ConstantKind::Rigid, ConstantKind::Action},
                               "utility law", "after part", law.pos))
                    return;
                d.laws.push_back(std::move(out));
                return;
            }
            case RawLaw::Kind::Inertial: {
                out.kind = LawKind::Inertial;
                const RawAtom& a = law.head.atoms[0];
                int fam = d.family_index(a.name);
                if (fam < 0) {
                    diags_.push_back(make_error(a.pos, "undeclared constant '" + a.name + "'"));
                    return;
                }
                if (d.families[fam].kind != ConstantKind::RegularFluent) {
                    diags_.push_back(make_error(a.pos, "inertial requires a regular fluent"));
                    return;
                }
                if (a.args.empty() && !d.families[fam].arg_sorts.empty()) {
                    // family form: every ground instance
                    for (std::size_t i = 0; i < d.constants.size(); ++i)
                        if (d.constants[i].family == fam) {
                            CausalLaw l = out;
                            l.inertial_constant = static_cast<int>(i);
                            d.laws.push_back(std::move(l));
                        }
                    return;
                }
                std::vector<int> args;
                if (!resolveArgs(d, fam, a, b, args)) return;
                out.inertial_constant = lookupConstant(d, fam, args);
                d.laws.push_back(std::move(out));
                return;
            }
            case RawLaw::Kind::Default: {
                out.kind = LawKind::Default;
                if (!resolveHeads(d, law, b, out)) return;
                return;
            }
        }
        d.laws.push_back(std::move(out));
    }

    // Resolves head literals, runs slot checks, emits one law per head literal.
    bool resolveHeads(ActionDescription& d, const RawLaw& law, const Binding& b, CausalLaw& proto) {
        std::vector<Literal> heads;
        if (law.head.is_false) {
            proto.head_false = true;
        } else {
            for (const auto& a : law.head.atoms) {
                Literal l;
                if (!resolveLiteral(d, a, b, l, true)) return false;
                heads.push_back(l);
            }
            if (heads.empty()) {
                diags_.push_back(make_error(law.pos, "law head is empty"));
                return false;
            }
        }
        Formula cond, precond;
        if (!resolveFormula(d, law.cond, b, cond)) return false;
        if (!resolveFormula(d, law.precond, b, precond)) return false;
        proto.cond = cond;
        proto.precond = precond;
        auto emit = [&](const Literal* headLit) -> bool {
            CausalLaw out = proto;
            if (headLit) out.head = *headLit;
            if (!slotCheckLaw(d, out, law.pos)) return false;
            d.laws.push_back(std::move(out));
            return true;
        };
        if (proto.head_false) return emit(nullptr);
        for (const auto& h : heads)
            if (!emit(&h)) return false;
        return true;
    }

    bool slotCheckLaw(ActionDescription& d, const CausalLaw& law, SourcePos pos) {
        auto headKind = [&]() { return d.kind_of(law.head.constant); };
        switch (law.kind) {
            case LawKind::Static: {
                if (!law.head_false) {
                    ConstantKind k = headKind();
                    if (!is_fluent_kind(k) && k != ConstantKind::Observation) {
                        diags_.push_back(make_error(pos, "static law head must be a fluent or observation"));
                        return false;
                    }
                    if (k == ConstantKind::Rigid &&
                        !checkSlot(d, law.cond, {ConstantKind::Rigid}, "rigid static law",
                                   "condition", pos))
                        return false;
                }
                return checkSlot(d, law.cond,
                                 {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                  ConstantKind::Rigid, ConstantKind::Observation},
                                 "static law", "condition", pos);
            }
            case LawKind::FluentDynamic: {
                if (!law.head_false) {
                    ConstantKind k = headKind();
                    if (k != ConstantKind::RegularFluent) {
                        diags_.push_back(make_error(
                            pos, "fluent dynamic law head must be a regular fluent"));
                        return false;
                    }
                }
                return checkSlot(d, law.cond,
                                 {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                  ConstantKind::Rigid},
                                 "fluent dynamic law", "if part", pos) &&
                       checkSlot(d, law.precond,
                                 {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                  ConstantKind::Rigid, ConstantKind::Action, ConstantKind::Pf},
                                 "fluent dynamic law", "after part", pos);
            }
            case LawKind::ObservationDynamic: {
                if (!law.head_false && headKind() != ConstantKind::Observation) {
                    diags_.push_back(make_error(
                        pos, "observed law head must be an observation constant"));
                    return false;
                }
                return checkSlot(d, law.cond,
                                 {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                  ConstantKind::Rigid},
                                 "observation dynamic law", "if part", pos) &&
                       checkSlot(d, law.precond, {ConstantKind::Action, ConstantKind::Pf},
                                 "observation dynamic law", "after part", pos);
            }
            case LawKind::InitStatic: {
                if (!law.head_false) {
                    ConstantKind k = headKind();
                    if (k != ConstantKind::RegularFluent && k != ConstantKind::SdFluent) {
                        diags_.push_back(make_error(pos, "initially law head must be a fluent"));
                        return false;
                    }
                }
                return checkSlot(d, law.cond,
                                 {ConstantKind::RegularFluent, ConstantKind::SdFluent,
                                  ConstantKind::Rigid, ConstantKind::InitPf},
                                 "initial static law", "condition", pos);
            }
            case LawKind::Default: {
                ConstantKind k = headKind();
                if (k != ConstantKind::SdFluent && k != ConstantKind::Rigid) {
                    diags_.push_back(make_error(
                        pos, "default requires a statically determined or rigid fluent"));
                    return false;
                }
                return true;
            }
            default: return true;
        }
    }
};

}  // namespace detail

inline ParseResult parse(const std::string& source) {
    detail::Parser p(source);
    return p.run();
}

}  // namespace pbcp
