#include "ia/syntax.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace ia {

TypeP Type::com() {
    static TypeP t = std::make_shared<Type>(Type{Com, nullptr, nullptr});
    return t;
}
TypeP Type::exp() {
    static TypeP t = std::make_shared<Type>(Type{Exp, nullptr, nullptr});
    return t;
}
TypeP Type::var() {
    static TypeP t = std::make_shared<Type>(Type{Var, nullptr, nullptr});
    return t;
}
TypeP Type::arrow(TypeP a, TypeP b) {
    return std::make_shared<Type>(Type{Arrow, std::move(a), std::move(b)});
}

bool type_eq(const TypeP& a, const TypeP& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    if (a->kind != Type::Arrow) return true;
    return type_eq(a->param, b->param) && type_eq(a->result, b->result);
}

std::string to_string(const TypeP& t) {
    if (!t) return "?";
    switch (t->kind) {
    case Type::Com: return "com";
    case Type::Exp: return "exp";
    case Type::Var: return "var";
    case Type::Arrow: {
        std::string l = to_string(t->param);
        if (t->param->kind == Type::Arrow) l = "(" + l + ")";
        return l + "->" + to_string(t->result);
    }
    }
    return "?";
}

int type_order(const TypeP& t) {
    switch (t->kind) {
    case Type::Com:
    case Type::Exp: return 0;
    case Type::Var: return 1;
    case Type::Arrow: return std::max(type_order(t->param) + 1, type_order(t->result));
    }
    return 0;
}

std::size_t type_size(const TypeP& t) {
    if (t->kind != Type::Arrow) return 1;
    return 1 + type_size(t->param) + type_size(t->result);
}

namespace mk {
static TermP node(Term t) { return std::make_shared<Term>(std::move(t)); }
TermP unit() {
    static TermP u = node(Term{Tag::Unit});
    return u;
}
TermP num(std::int64_t i) {
    Term t{Tag::Int};
    t.num = i;
    return node(std::move(t));
}
TermP id(std::string x) {
    Term t{Tag::Ident};
    t.name = std::move(x);
    return node(std::move(t));
}
TermP bin(BinOp op, TermP l, TermP r) {
    Term t{Tag::Bin};
    t.op = op;
    t.a = std::move(l);
    t.b = std::move(r);
    return node(std::move(t));
}
TermP ite(TermP c, TermP th, TermP el) {
    Term t{Tag::If};
    t.a = std::move(c);
    t.b = std::move(th);
    t.c = std::move(el);
    return node(std::move(t));
}
TermP deref(TermP m) {
    Term t{Tag::Deref};
    t.a = std::move(m);
    return node(std::move(t));
}
TermP assign(TermP m, TermP n) {
    Term t{Tag::Assign};
    t.a = std::move(m);
    t.b = std::move(n);
    return node(std::move(t));
}
TermP mkvar(TermP rd, TermP wr) {
    Term t{Tag::MkVar};
    t.a = std::move(rd);
    t.b = std::move(wr);
    return node(std::move(t));
}
TermP app(TermP f, TermP x) {
    Term t{Tag::App};
    t.a = std::move(f);
    t.b = std::move(x);
    return node(std::move(t));
}
TermP lam(std::string x, TypeP ty, TermP body) {
    Term t{Tag::Lambda};
    t.name = std::move(x);
    t.ty = std::move(ty);
    t.a = std::move(body);
    return node(std::move(t));
}
TermP fix(TermP m) {
    Term t{Tag::Fix};
    t.a = std::move(m);
    return node(std::move(t));
}
TermP new_(std::string x, TermP body) {
    Term t{Tag::New};
    t.name = std::move(x);
    t.a = std::move(body);
    return node(std::move(t));
}
TermP ref() {
    static TermP r = node(Term{Tag::Ref});
    return r;
}
TermP while_(TermP g, TermP body) {
    Term t{Tag::While};
    t.a = std::move(g);
    t.b = std::move(body);
    return node(std::move(t));
}
TermP let(std::string x, TypeP ty, TermP bound, TermP body) {
    Term t{Tag::Let};
    t.name = std::move(x);
    t.ty = std::move(ty);
    t.a = std::move(bound);
    t.b = std::move(body);
    return node(std::move(t));
}
TermP seq(TermP m, TermP n) { return let("_", nullptr, std::move(m), std::move(n)); }
TermP loc(std::int64_t id) {
    Term t{Tag::Loc};
    t.num = id;
    return node(std::move(t));
}
TermP omega(const TypeP& ty) {
    TermP loop = while_(num(1), unit());
    switch (ty->kind) {
    case Type::Com: return loop;
    case Type::Exp: return seq(loop, num(0));
    case Type::Var: return seq(loop, mkvar(lam("u", Type::com(), num(0)), lam("v", Type::exp(), unit())));
    case Type::Arrow: return seq(loop, lam("u", ty->param, omega(ty->result)));
    }
    return loop;
}
}

TypeP lookup(const Context& ctx, const std::string& x) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->first == x) return it->second;
    return nullptr;
}

Context extend(Context ctx, const std::string& x, TypeP ty) {
    for (auto& p : ctx)
        if (p.first == x) {
            p.second = std::move(ty);
            return ctx;
        }
    ctx.emplace_back(x, std::move(ty));
    return ctx;
}

SyntaxError::SyntaxError(const std::string& msg, int l, int c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tk { Ident, Num, Sym, End };

struct Token {
    Tk kind;
    std::string text;
    int line, col;
};

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '$' || c == '\''; }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    static const char* syms[] = {"|-", "->", "=>", ":=", "()", "(", ")", ",", ":", ";", "+", "-", "*", "!", "="};
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace((unsigned char)c)) {
            adv(1);
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') adv(1);
            continue;
        }
        int l = line, cc = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.push_back({Tk::Ident, s.substr(i, j - i), l, cc});
            adv(j - i);
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
            out.push_back({Tk::Num, s.substr(i, j - i), l, cc});
            adv(j - i);
            continue;
        }
        bool found = false;
        for (const char* sym : syms) {
            std::string t(sym);
            if (s.compare(i, t.size(), t) == 0) {
                // "()" only as a unit literal; "( )" with a space is handled by the parser
                out.push_back({Tk::Sym, t, l, cc});
                adv(t.size());
                found = true;
                break;
            }
        }
        if (!found) throw SyntaxError(std::string("unexpected character '") + c + "'", l, cc);
    }
    out.push_back({Tk::End, "", line, col});
    return out;
}

const std::set<std::string> keywords = {
    "skip", "if", "then", "else", "fn", "fix", "new", "in", "ref", "while", "do",
    "let", "mkvar", "com", "exp", "var", "int"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    const Token& peek() const { return t_[p_]; }
    bool at(const std::string& s) const {
        const Token& k = t_[p_];
        return (k.kind == Tk::Sym || k.kind == Tk::Ident) && k.text == s;
    }
    bool at_end() const { return t_[p_].kind == Tk::End; }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& k = t_[p_];
        std::string got = k.kind == Tk::End ? "end of input" : "'" + k.text + "'";
        throw SyntaxError(msg + ", got " + got, k.line, k.col);
    }
    void expect(const std::string& s) {
        if (!at(s)) fail("expected '" + s + "'");
        ++p_;
    }
    std::string ident() {
        const Token& k = t_[p_];
        if (k.kind != Tk::Ident || keywords.count(k.text)) fail("expected identifier");
        ++p_;
        return k.text;
    }

    TypeP type() {
        TypeP a = type_atom();
        if (at("->")) {
            ++p_;
            return Type::arrow(a, type());
        }
        return a;
    }
    TypeP type_atom() {
        if (at("com")) { ++p_; return Type::com(); }
        if (at("exp") || at("int")) { ++p_; return Type::exp(); }
        if (at("var")) { ++p_; return Type::var(); }
        if (at("(")) {
            ++p_;
            TypeP t = type();
            expect(")");
            return t;
        }
        fail("expected type");
    }

    Context context() {
        Context ctx;
        if (at("|-")) return ctx;
        for (;;) {
            const Token& start = peek();
            std::string x = ident();
            expect(":");
            TypeP ty = type();
            if (lookup(ctx, x)) throw SyntaxError("duplicate context name '" + x + "'", start.line, start.col);
            ctx.emplace_back(x, ty);
            if (!at(",")) break;
            ++p_;
        }
        return ctx;
    }

    TermP seq() {
        TermP m = expr();
        if (at(";")) {
            ++p_;
            return mk::seq(m, seq());
        }
        return m;
    }

    TermP expr() {
        if (at("fn")) {
            ++p_;
            std::string x = ident();
            expect(":");
            TypeP ty = type();
            expect("=>");
            return mk::lam(x, ty, seq());
        }
        if (at("let")) {
            ++p_;
            std::string x = at("_") ? (++p_, std::string("_")) : ident();
            TypeP ty;
            if (at(":")) {
                ++p_;
                ty = type();
            }
            expect("=");
            TermP m = seq();
            expect("in");
            return mk::let(x, ty, m, seq());
        }
        if (at("new")) {
            ++p_;
            std::string x = ident();
            expect("in");
            return mk::new_(x, seq());
        }
        if (at("if")) {
            ++p_;
            TermP c = seq();
            expect("then");
            TermP th = seq();
            expect("else");
            return mk::ite(c, th, expr());
        }
        if (at("while")) {
            ++p_;
            TermP g = seq();
            expect("do");
            return mk::while_(g, expr());
        }
        return assign();
    }

    TermP assign() {
        TermP m = additive();
        if (at(":=")) {
            ++p_;
            return mk::assign(m, expr());
        }
        return m;
    }

    TermP additive() {
        TermP m = multiplicative();
        while (at("+") || at("-")) {
            BinOp op = at("+") ? BinOp::Add : BinOp::Sub;
            ++p_;
            m = mk::bin(op, m, multiplicative());
        }
        return m;
    }

    TermP multiplicative() {
        TermP m = application();
        while (at("*")) {
            ++p_;
            m = mk::bin(BinOp::Mul, m, application());
        }
        return m;
    }

    bool starts_prefix() const {
        const Token& k = peek();
        if (k.kind == Tk::Num) return true;
        if (k.kind == Tk::Ident) {
            if (!keywords.count(k.text)) return true;
            return k.text == "skip" || k.text == "ref" || k.text == "mkvar" || k.text == "fix";
        }
        return k.kind == Tk::Sym && (k.text == "(" || k.text == "()" || k.text == "!");
    }

    TermP application() {
        TermP f = prefix();
        while (starts_prefix()) f = mk::app(f, prefix());
        return f;
    }

    TermP prefix() {
        if (at("!")) {
            ++p_;
            return mk::deref(prefix());
        }
        if (at("fix")) {
            ++p_;
            return mk::fix(prefix());
        }
        return atom();
    }

    TermP atom() {
        const Token& k = peek();
        if (k.kind == Tk::Num) {
            ++p_;
            try {
                return mk::num(std::stoll(k.text));
            } catch (const std::out_of_range&) {
                throw SyntaxError("integer literal out of range", k.line, k.col);
            }
        }
        if (at("skip") || at("()")) {
            ++p_;
            return mk::unit();
        }
        if (at("ref")) {
            ++p_;
            return mk::ref();
        }
        if (at("mkvar")) {
            ++p_;
            expect("(");
            TermP r = seq();
            expect(",");
            TermP w = seq();
            expect(")");
            return mk::mkvar(r, w);
        }
        if (at("(")) {
            ++p_;
            if (at(")")) {
                ++p_;
                return mk::unit();
            }
            TermP m = seq();
            expect(")");
            return m;
        }
        return mk::id(ident());
    }

    void finish() {
        if (!at_end()) fail("trailing input");
    }

private:
    std::vector<Token> t_;
    std::size_t p_ = 0;
};

}

Judgment parse_judgment(const std::string& src) {
    Parser p(lex(src));
    Judgment j;
    j.ctx = p.context();
    p.expect("|-");
    j.term = p.seq();
    if (p.at(":")) {
        p.expect(":");
        j.type = p.type();
    }
    p.finish();
    return j;
}

std::pair<Context, TypeP> parse_sequent(const std::string& src) {
    Parser p(lex(src));
    Context ctx = p.context();
    p.expect("|-");
    TypeP t = p.type();
    p.finish();
    return {ctx, t};
}

TermP parse_term(const std::string& src) {
    Parser p(lex(src));
    TermP t = p.seq();
    p.finish();
    return t;
}

TypeP parse_type(const std::string& src) {
    Parser p(lex(src));
    TypeP t = p.type();
    p.finish();
    return t;
}

// ---------------------------------------------------------------- printer

namespace {

// 0 seq, 1 binder/if/while, 2 assign, 3 additive, 4 multiplicative, 5 application, 6 prefix, 7 atom
void print(std::ostream& os, const TermP& t, int need) {
    auto wrap = [&](int lvl, auto body) {
        bool paren = lvl < need;
        if (paren) os << "(";
        body();
        if (paren) os << ")";
    };
    switch (t->tag) {
    case Tag::Unit: os << "skip"; return;
    case Tag::Int:
        if (t->num < 0) os << "(0 - " << -t->num << ")";
        else os << t->num;
        return;
    case Tag::Ident: os << t->name; return;
    case Tag::Ref: os << "ref"; return;
    case Tag::Loc: os << "@" << t->num; return;
    case Tag::MkVar:
        os << "mkvar(";
        print(os, t->a, 0);
        os << ", ";
        print(os, t->b, 0);
        os << ")";
        return;
    case Tag::Bin: {
        int lvl = t->op == BinOp::Mul ? 4 : 3;
        const char* sym = t->op == BinOp::Add ? " + " : t->op == BinOp::Sub ? " - " : " * ";
        wrap(lvl, [&] {
            print(os, t->a, lvl);
            os << sym;
            print(os, t->b, lvl + 1);
        });
        return;
    }
    case Tag::App:
        wrap(5, [&] {
            print(os, t->a, 5);
            os << " ";
            print(os, t->b, 6);
        });
        return;
    case Tag::Deref:
        wrap(6, [&] {
            os << "!";
            print(os, t->a, 6);
        });
        return;
    case Tag::Fix:
        wrap(6, [&] {
            os << "fix ";
            print(os, t->a, 6);
        });
        return;
    case Tag::Assign:
        wrap(2, [&] {
            print(os, t->a, 3);
            os << " := ";
            print(os, t->b, 3);
        });
        return;
    case Tag::If:
        wrap(1, [&] {
            os << "if ";
            print(os, t->a, 0);
            os << " then ";
            print(os, t->b, 0);
            os << " else ";
            print(os, t->c, 1);
        });
        return;
    case Tag::While:
        wrap(1, [&] {
            os << "while ";
            print(os, t->a, 0);
            os << " do ";
            print(os, t->b, 1);
        });
        return;
    case Tag::Lambda:
        wrap(1, [&] {
            os << "fn " << t->name << ":" << to_string(t->ty) << " => ";
            print(os, t->a, 0);
        });
        return;
    case Tag::New:
        wrap(1, [&] {
            os << "new " << t->name << " in ";
            print(os, t->a, 0);
        });
        return;
    case Tag::Let:
        if (t->name == "_") {
            wrap(0, [&] {
                print(os, t->a, 2);
                os << "; ";
                print(os, t->b, 0);
            });
        } else {
            wrap(1, [&] {
                os << "let " << t->name << " = ";
                print(os, t->a, 0);
                os << " in ";
                print(os, t->b, 0);
            });
        }
        return;
    }
}

}

std::string to_string(const TermP& t) {
    std::ostringstream os;
    print(os, t, 0);
    return os.str();
}

std::string to_string(const Context& ctx) {
    std::string s;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (i) s += ", ";
        s += ctx[i].first + ":" + to_string(ctx[i].second);
    }
    return s;
}

std::string to_string(const Judgment& j) {
    std::string s = to_string(j.ctx);
    s += s.empty() ? "|- " : " |- ";
    s += to_string(j.term);
    if (j.type) s += " : " + to_string(j.type);
    return s;
}

// ---------------------------------------------------------------- typing

namespace {

[[noreturn]] void type_fail(const std::string& rule, const TermP& t, const std::string& why) {
    throw TypeError(rule + ": " + why + " in `" + to_string(t) + "`");
}

TypeP check(const Context& ctx, const TermP& t, TermP* out) {
    auto expect_ty = [&](const char* rule, const TypeP& got, const TypeP& want, const TermP& sub) {
        if (!type_eq(got, want))
            type_fail(rule, t, "subterm `" + to_string(sub) + "` has type " + to_string(got) + ", expected " + to_string(want));
    };
    TermP na, nb, nc;
    TermP* pa = out ? &na : nullptr;
    TermP* pb = out ? &nb : nullptr;
    TermP* pc = out ? &nc : nullptr;
    TypeP res;
    switch (t->tag) {
    case Tag::Unit: res = Type::com(); break;
    case Tag::Int: res = Type::exp(); break;
    case Tag::Ref: res = Type::var(); break;
    case Tag::Loc: res = Type::var(); break;
    case Tag::Ident:
        res = lookup(ctx, t->name);
        if (!res) throw TypeError("unbound identifier '" + t->name + "'");
        break;
    case Tag::Bin:
        expect_ty("arithmetic", check(ctx, t->a, pa), Type::exp(), t->a);
        expect_ty("arithmetic", check(ctx, t->b, pb), Type::exp(), t->b);
        res = Type::exp();
        break;
    case Tag::If: {
        expect_ty("if", check(ctx, t->a, pa), Type::exp(), t->a);
        TypeP t1 = check(ctx, t->b, pb);
        expect_ty("if", check(ctx, t->c, pc), t1, t->c);
        res = t1;
        break;
    }
    case Tag::Deref:
        expect_ty("dereference", check(ctx, t->a, pa), Type::var(), t->a);
        res = Type::exp();
        break;
    case Tag::Assign:
        expect_ty("assignment", check(ctx, t->a, pa), Type::var(), t->a);
        expect_ty("assignment", check(ctx, t->b, pb), Type::exp(), t->b);
        res = Type::com();
        break;
    case Tag::MkVar:
        expect_ty("mkvar", check(ctx, t->a, pa), Type::arrow(Type::com(), Type::exp()), t->a);
        expect_ty("mkvar", check(ctx, t->b, pb), Type::arrow(Type::exp(), Type::com()), t->b);
        res = Type::var();
        break;
    case Tag::App: {
        TypeP f = check(ctx, t->a, pa);
        if (f->kind != Type::Arrow) type_fail("application", t, "`" + to_string(t->a) + "` is not a function");
        expect_ty("application", check(ctx, t->b, pb), f->param, t->b);
        res = f->result;
        break;
    }
    case Tag::Lambda:
        res = Type::arrow(t->ty, check(extend(ctx, t->name, t->ty), t->a, pa));
        break;
    case Tag::Fix: {
        TypeP f = check(ctx, t->a, pa);
        if (f->kind != Type::Arrow || f->param->kind != Type::Arrow || !type_eq(f->param, f->result))
            type_fail("fix", t, "argument must have type (A->B)->(A->B)");
        res = f->param;
        break;
    }
    case Tag::New: {
        TypeP b = check(extend(ctx, t->name, Type::var()), t->a, pa);
        if (!b->is_base()) type_fail("new", t, "block body must have base type");
        res = b;
        break;
    }
    case Tag::While:
        expect_ty("while", check(ctx, t->a, pa), Type::exp(), t->a);
        expect_ty("while", check(ctx, t->b, pb), Type::com(), t->b);
        res = Type::com();
        break;
    case Tag::Let: {
        TypeP bt = check(ctx, t->a, pa);
        if (t->ty) expect_ty("let", bt, t->ty, t->a);
        Context inner = t->name == "_" ? ctx : extend(ctx, t->name, bt);
        res = check(inner, t->b, pb);
        if (out) {
            *out = mk::let(t->name, bt, na, nb);
            return res;
        }
        break;
    }
    }
    if (out) {
        if (!t->a) {
            *out = t;
        } else {
            Term copy = *t;
            copy.a = na;
            copy.b = nb;
            copy.c = nc;
            *out = std::make_shared<Term>(std::move(copy));
        }
    }
    return res;
}

}

TypeP typecheck(const Context& ctx, const TermP& t) { return check(ctx, t, nullptr); }

TermP elaborate(const Context& ctx, const TermP& t) {
    TermP out;
    check(ctx, t, &out);
    return out;
}

// ---------------------------------------------------------------- binding

bool is_value(const TermP& t) {
    switch (t->tag) {
    case Tag::Unit:
    case Tag::Int:
    case Tag::Loc:
    case Tag::Lambda: return true;
    case Tag::MkVar: return t->a->tag == Tag::Lambda && t->b->tag == Tag::Lambda;
    default: return false;
    }
}

namespace {
void fv(const TermP& t, std::set<std::string>& bound, std::set<std::string>& out) {
    if (!t) return;
    switch (t->tag) {
    case Tag::Ident:
        if (!bound.count(t->name)) out.insert(t->name);
        return;
    case Tag::Lambda:
    case Tag::New: {
        bool added = bound.insert(t->name).second;
        fv(t->a, bound, out);
        if (added) bound.erase(t->name);
        return;
    }
    case Tag::Let: {
        fv(t->a, bound, out);
        bool added = bound.insert(t->name).second;
        fv(t->b, bound, out);
        if (added) bound.erase(t->name);
        return;
    }
    default:
        fv(t->a, bound, out);
        fv(t->b, bound, out);
        fv(t->c, bound, out);
    }
}

std::string rename_away(const std::string& x, const std::set<std::string>& avoid) {
    std::string y = x + "'";
    while (avoid.count(y)) y += "'";
    return y;
}
}

std::set<std::string> free_vars(const TermP& t) {
    std::set<std::string> bound, out;
    fv(t, bound, out);
    return out;
}

namespace {
TermP subst(const TermP& t, const std::string& x, const TermP& v, const std::set<std::string>& fvv) {
    switch (t->tag) {
    case Tag::Ident: return t->name == x ? v : t;
    case Tag::Unit:
    case Tag::Int:
    case Tag::Ref:
    case Tag::Loc: return t;
    case Tag::Lambda:
    case Tag::New: {
        if (t->name == x) return t;
        TermP body = t->a;
        std::string y = t->name;
        if (fvv.count(y)) {
            std::set<std::string> avoid = free_vars(body);
            avoid.insert(fvv.begin(), fvv.end());
            avoid.insert(x);
            y = rename_away(y, avoid);
            body = subst(body, t->name, mk::id(y), {y});
        }
        TermP nb = subst(body, x, v, fvv);
        if (nb == t->a && y == t->name) return t;
        Term c = *t;
        c.name = y;
        c.a = nb;
        return std::make_shared<Term>(std::move(c));
    }
    case Tag::Let: {
        TermP na = subst(t->a, x, v, fvv);
        if (t->name == x) {
            if (na == t->a) return t;
            Term c = *t;
            c.a = na;
            return std::make_shared<Term>(std::move(c));
        }
        TermP body = t->b;
        std::string y = t->name;
        if (fvv.count(y)) {
            std::set<std::string> avoid = free_vars(body);
            avoid.insert(fvv.begin(), fvv.end());
            avoid.insert(x);
            y = rename_away(y, avoid);
            body = subst(body, t->name, mk::id(y), {y});
        }
        TermP nb = subst(body, x, v, fvv);
        if (na == t->a && nb == t->b && y == t->name) return t;
        Term c = *t;
        c.name = y;
        c.a = na;
        c.b = nb;
        return std::make_shared<Term>(std::move(c));
    }
    default: {
        TermP na = t->a ? subst(t->a, x, v, fvv) : nullptr;
        TermP nb = t->b ? subst(t->b, x, v, fvv) : nullptr;
        TermP nc = t->c ? subst(t->c, x, v, fvv) : nullptr;
        if (na == t->a && nb == t->b && nc == t->c) return t;
        Term c = *t;
        c.a = na;
        c.b = nb;
        c.c = nc;
        return std::make_shared<Term>(std::move(c));
    }
    }
}

bool aeq(const TermP& a, const TermP& b, std::map<std::string, int>& ea, std::map<std::string, int>& eb, int depth) {
    if (a->tag != b->tag) return false;
    auto bind = [&](const std::string& xa, const std::string& xb, auto body) {
        auto sa = ea.find(xa) != ea.end() ? std::optional<int>(ea[xa]) : std::nullopt;
        auto sb = eb.find(xb) != eb.end() ? std::optional<int>(eb[xb]) : std::nullopt;
        ea[xa] = depth;
        eb[xb] = depth;
        bool r = body();
        if (sa) ea[xa] = *sa; else ea.erase(xa);
        if (sb) eb[xb] = *sb; else eb.erase(xb);
        return r;
    };
    switch (a->tag) {
    case Tag::Unit:
    case Tag::Ref: return true;
    case Tag::Int:
    case Tag::Loc: return a->num == b->num;
    case Tag::Ident: {
        auto ia = ea.find(a->name), ib = eb.find(b->name);
        if (ia == ea.end() && ib == eb.end()) return a->name == b->name;
        return ia != ea.end() && ib != eb.end() && ia->second == ib->second;
    }
    case Tag::Lambda:
        if (!type_eq(a->ty, b->ty)) return false;
        return bind(a->name, b->name, [&] { return aeq(a->a, b->a, ea, eb, depth + 1); });
    case Tag::New:
        return bind(a->name, b->name, [&] { return aeq(a->a, b->a, ea, eb, depth + 1); });
    case Tag::Let:
        if ((a->name == "_") != (b->name == "_")) return false;
        if (!aeq(a->a, b->a, ea, eb, depth)) return false;
        return bind(a->name, b->name, [&] { return aeq(a->b, b->b, ea, eb, depth + 1); });
    case Tag::Bin:
        if (a->op != b->op) return false;
        [[fallthrough]];
    default:
        if (a->a && !aeq(a->a, b->a, ea, eb, depth)) return false;
        if (a->b && !aeq(a->b, b->b, ea, eb, depth)) return false;
        if (a->c && !aeq(a->c, b->c, ea, eb, depth)) return false;
        return true;
    }
}
}

TermP substitute(const TermP& t, const std::string& x, const TermP& v) {
    return subst(t, x, v, free_vars(v));
}

TermP substitute_closed(const TermP& t, const std::string& x, const TermP& v) {
    static const std::set<std::string> none;
    return subst(t, x, v, none);
}

bool alpha_eq(const TermP& a, const TermP& b) {
    std::map<std::string, int> ea, eb;
    return aeq(a, b, ea, eb, 0);
}

std::size_t term_size(const TermP& t) {
    if (!t) return 0;
    return 1 + term_size(t->a) + term_size(t->b) + term_size(t->c);
}

std::string Fresh::next() { return "$" + std::to_string(k_++); }

// ---------------------------------------------------------------- fragments

std::string to_string(Fragment f) {
    switch (f) {
    case Fragment::PCFplus: return "PCF+";
    case Fragment::IAcbv: return "IAcbv";
    case Fragment::RML: return "RML";
    case Fragment::FullL: return "L";
    case Fragment::IAloop: return "IAloop";
    case Fragment::IA2plus: return "IA2+";
    }
    return "?";
}

bool in_ia2plus_context_grammar(const TypeP& t) {
    if (t->kind != Type::Arrow) return true;
    const TypeP& p = t->param;
    if (p->kind != Type::Arrow) return in_ia2plus_context_grammar(t->result);
    if (p->param->is_base() && p->result->is_base()) return in_ia2plus_context_grammar(t->result);
    return false;
}

bool in_ia2plus_result_grammar(const TypeP& t) {
    if (t->kind != Type::Arrow) return true;
    return in_ia2plus_context_grammar(t->param) && in_ia2plus_result_grammar(t->result);
}

namespace {
struct Features {
    bool fix = false, ref = false, nu = false, loc = false, big_literal = false, grammar_ok = true;
};

void scan(const Context& ctx, const TermP& t, int N, Features& f) {
    TypeP ty = typecheck(ctx, t);
    if (!in_ia2plus_result_grammar(ty)) f.grammar_ok = false;
    switch (t->tag) {
    case Tag::Fix: f.fix = true; break;
    case Tag::Ref: f.ref = true; break;
    case Tag::Loc: f.loc = true; break;
    case Tag::New: f.nu = true; break;
    case Tag::Int:
        if (t->num < 0 || t->num > N) f.big_literal = true;
        break;
    default: break;
    }
    switch (t->tag) {
    case Tag::Lambda: {
        if (!in_ia2plus_context_grammar(t->ty)) f.grammar_ok = false;
        scan(extend(ctx, t->name, t->ty), t->a, N, f);
        return;
    }
    case Tag::New:
        scan(extend(ctx, t->name, Type::var()), t->a, N, f);
        return;
    case Tag::Let: {
        scan(ctx, t->a, N, f);
        if (t->name == "_") {
            scan(ctx, t->b, N, f);
        } else {
            TypeP bt = typecheck(ctx, t->a);
            if (!in_ia2plus_context_grammar(bt)) f.grammar_ok = false;
            scan(extend(ctx, t->name, bt), t->b, N, f);
        }
        return;
    }
    default:
        if (t->a) scan(ctx, t->a, N, f);
        if (t->b) scan(ctx, t->b, N, f);
        if (t->c) scan(ctx, t->c, N, f);
    }
}
}

std::set<Fragment> classify_fragment(const Context& ctx, const TermP& t, int N) {
    Features f;
    for (auto& [x, ty] : ctx)
        if (!in_ia2plus_context_grammar(ty)) f.grammar_ok = false;
    scan(ctx, t, N, f);
    std::set<Fragment> out{Fragment::FullL};
    if (!f.ref && !f.nu && !f.loc) out.insert(Fragment::PCFplus);
    if (!f.ref && !f.loc) out.insert(Fragment::IAcbv);
    if (!f.nu) out.insert(Fragment::RML);
    if (!f.ref && !f.loc && !f.fix && !f.big_literal) {
        out.insert(Fragment::IAloop);
        if (f.grammar_ok) out.insert(Fragment::IA2plus);
    }
    return out;
}

}
