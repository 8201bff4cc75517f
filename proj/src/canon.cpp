#include "ia/canon.hpp"

#include <functional>
#include <map>

namespace ia {

namespace {

using Scope = std::map<std::string, TypeP>;

TypeP scope_type(const Scope& sc, const std::string& x) {
    auto it = sc.find(x);
    return it == sc.end() ? nullptr : it->second;
}

bool ident_of(const TermP& t, const Scope& sc, std::function<bool(const TypeP&)> ok) {
    if (t->tag != Tag::Ident) return false;
    TypeP ty = scope_type(sc, t->name);
    return !ty || ok(ty);  // unknown identifiers are given the benefit of the doubt
}

bool base_ident(const TermP& t, const Scope& sc) {
    return ident_of(t, sc, [](const TypeP& ty) { return ty->is_base(); });
}

bool canon_check(const TermP& t, Scope sc);

bool canon_lam(const TermP& t, const Scope& sc) {
    if (t->tag != Tag::Lambda) return false;
    Scope inner = sc;
    inner[t->name] = t->ty;
    return canon_check(t->a, inner);
}

bool canon_mkvar(const TermP& t, const Scope& sc) {
    return t->tag == Tag::MkVar && canon_lam(t->a, sc) && canon_lam(t->b, sc) &&
           t->a->ty->kind == Type::Com && t->b->ty->kind == Type::Exp;
}

// the right-hand sides `z y`, `z mkvar(...)`, `z (fn x => C)`
bool canon_call(const TermP& m, const Scope& sc) {
    if (m->tag != Tag::App) return false;
    if (!ident_of(m->a, sc, [](const TypeP& ty) { return ty->kind == Type::Arrow; })) return false;
    const TermP& arg = m->b;
    return base_ident(arg, sc) || canon_mkvar(arg, sc) || canon_lam(arg, sc);
}

TypeP loose_type(const TermP& t, const Scope& sc) {
    // types of canonical right-hand sides, when derivable from the scope alone
    Context ctx;
    for (auto& [x, ty] : sc) ctx.emplace_back(x, ty);
    try {
        return typecheck(ctx, t);
    } catch (const std::exception&) {
        return nullptr;
    }
}

bool canon_check(const TermP& t, Scope sc) {
    switch (t->tag) {
    case Tag::Unit:
    case Tag::Int: return true;
    case Tag::Ident: return base_ident(t, sc);
    case Tag::Bin: return base_ident(t->a, sc) && base_ident(t->b, sc);
    case Tag::If: return base_ident(t->a, sc) && canon_check(t->b, sc) && canon_check(t->c, sc);
    case Tag::Assign:
        return ident_of(t->a, sc, [](const TypeP& ty) { return ty->kind == Type::Var; }) && base_ident(t->b, sc);
    case Tag::Deref: return ident_of(t->a, sc, [](const TypeP& ty) { return ty->kind == Type::Var; });
    case Tag::Lambda: return canon_lam(t, sc);
    case Tag::MkVar: return canon_mkvar(t, sc);
    case Tag::New: {
        sc[t->name] = Type::var();
        return canon_check(t->a, sc);
    }
    case Tag::While: return canon_check(t->a, sc) && canon_check(t->b, sc);
    case Tag::Let: {
        TypeP ty = t->ty ? t->ty : loose_type(t->a, sc);
        bool rhs = canon_call(t->a, sc) || ((!ty || ty->is_base()) && canon_check(t->a, sc));
        if (!rhs) return false;
        if (t->name != "_") sc[t->name] = ty;
        return canon_check(t->b, sc);
    }
    default: return false;
    }
}

// ---------------------------------------------------------------- conversion

class Canon {
public:
    explicit Canon(const TermP& t, const Context& ctx) {
        collect(t);
        for (auto& [x, ty] : ctx) used_.insert(x);
    }

    std::string fresh() {
        for (;;) {
            std::string n = "$" + std::to_string(k_++);
            if (used_.insert(n).second) return n;
        }
    }

    /// Renames binders so that each is bound once and none shadows the context.
    TermP uniquify(const TermP& t, std::map<std::string, std::string> ren, std::set<std::string>& bound) {
        auto rebind = [&](const std::string& x) {
            if (x == "_") return x;
            std::string n = x;
            if (bound.count(n))
                do n += "'";
                while (used_.count(n) || bound.count(n));
            bound.insert(n);
            used_.insert(n);
            return n;
        };
        switch (t->tag) {
        case Tag::Ident: {
            auto it = ren.find(t->name);
            return it == ren.end() ? t : mk::id(it->second);
        }
        case Tag::Lambda: {
            std::string n = rebind(t->name);
            ren[t->name] = n;
            return mk::lam(n, t->ty, uniquify(t->a, ren, bound));
        }
        case Tag::New: {
            std::string n = rebind(t->name);
            ren[t->name] = n;
            return mk::new_(n, uniquify(t->a, ren, bound));
        }
        case Tag::Let: {
            TermP a = uniquify(t->a, ren, bound);
            std::string n = rebind(t->name);
            if (n != "_") ren[t->name] = n;
            return mk::let(n, t->ty, a, uniquify(t->b, ren, bound));
        }
        default: return map_children(t, [&](const TermP& c) { return uniquify(c, ren, bound); });
        }
    }

    /// Copy with every binder renamed afresh.
    TermP refresh(const TermP& t, std::map<std::string, std::string> ren = {}) {
        switch (t->tag) {
        case Tag::Ident: {
            auto it = ren.find(t->name);
            return it == ren.end() ? t : mk::id(it->second);
        }
        case Tag::Lambda: {
            std::string n = fresh();
            ren[t->name] = n;
            return mk::lam(n, t->ty, refresh(t->a, ren));
        }
        case Tag::New: {
            std::string n = fresh();
            ren[t->name] = n;
            return mk::new_(n, refresh(t->a, ren));
        }
        case Tag::Let: {
            TermP a = refresh(t->a, ren);
            std::string n = t->name == "_" ? "_" : fresh();
            if (n != "_") ren[t->name] = n;
            return mk::let(n, t->ty, a, refresh(t->b, ren));
        }
        default: return map_children(t, [&](const TermP& c) { return refresh(c, ren); });
        }
    }

    TermP canon(const Context& ctx, const TermP& t) {
        switch (t->tag) {
        case Tag::Unit:
        case Tag::Int: return t;
        case Tag::Ident: return eta(t->name, lookup(ctx, t->name));
        case Tag::Bin: {
            TermP a = canon(ctx, t->a), b = canon(ctx, t->b);
            return bind_base(a, Type::exp(), [&](TermP x) {
                return bind_base(b, Type::exp(), [&](TermP y) { return mk::bin(t->op, x, y); });
            });
        }
        case Tag::If: {
            TermP g = canon(ctx, t->a);
            TermP a = canon(ctx, t->b), b = canon(ctx, t->c);
            return bind_base(g, Type::exp(), [&](TermP x) { return mk::ite(x, a, b); });
        }
        case Tag::Deref:
            if (t->a->tag == Tag::Ident) return t;
            return deref_c(canon(ctx, t->a));
        case Tag::Assign: {
            TermP n = canon(ctx, t->b);
            if (t->a->tag == Tag::Ident)
                return bind_base(n, Type::exp(), [&](TermP y) { return mk::assign(t->a, y); });
            return assign_c(canon(ctx, t->a), n);
        }
        case Tag::MkVar: return mkvar_c(canon(ctx, t->a), canon(ctx, t->b));
        case Tag::App: {
            TypeP ft = typecheck(ctx, t->a);
            TermP f = canon(ctx, t->a), a = canon(ctx, t->b);
            return app_c(f, a, ft->param);
        }
        case Tag::Lambda: return mk::lam(t->name, t->ty, canon(extend(ctx, t->name, t->ty), t->a));
        case Tag::New: return mk::new_(t->name, canon(extend(ctx, t->name, Type::var()), t->a));
        case Tag::While: return mk::while_(canon(ctx, t->a), canon(ctx, t->b));
        case Tag::Let: {
            TypeP ty = t->ty ? t->ty : typecheck(ctx, t->a);
            TermP a = canon(ctx, t->a);
            Context inner = t->name == "_" ? ctx : extend(ctx, t->name, ty);
            return let_c(t->name, ty, a, canon(inner, t->b));
        }
        case Tag::Fix: throw CanonError("fix is outside IAloop");
        case Tag::Ref: throw CanonError("ref is outside IAloop");
        case Tag::Loc: throw CanonError("locations cannot be canonicalized");
        }
        throw CanonError("unknown term");
    }

private:
    std::set<std::string> used_;
    int k_ = 0;

    void collect(const TermP& t) {
        if (!t) return;
        if (!t->name.empty()) used_.insert(t->name);
        collect(t->a);
        collect(t->b);
        collect(t->c);
    }

    static TermP map_children(const TermP& t, const std::function<TermP(const TermP&)>& f) {
        if (!t->a && !t->b && !t->c) return t;
        auto n = std::make_shared<Term>(*t);
        if (n->a) n->a = f(n->a);
        if (n->b) n->b = f(n->b);
        if (n->c) n->c = f(n->c);
        return n;
    }

    // x : ty expanded into canonical form
    TermP eta(const std::string& x, const TypeP& ty) {
        switch (ty->kind) {
        case Type::Com:
        case Type::Exp: return mk::id(x);
        case Type::Var: {
            std::string u = fresh(), v = fresh();
            return mk::mkvar(mk::lam(u, Type::com(), mk::deref(mk::id(x))),
                             mk::lam(v, Type::exp(), mk::assign(mk::id(x), mk::id(v))));
        }
        case Type::Arrow: {
            std::string w = fresh(), r = fresh();
            TermP arg = eta(w, ty->param);
            return mk::lam(w, ty->param, mk::let(r, ty->result, mk::app(mk::id(x), arg), eta(r, ty->result)));
        }
        }
        throw CanonError("eta");
    }

    TermP bind_base(const TermP& c, const TypeP& ty, const std::function<TermP(TermP)>& k) {
        if (c->tag == Tag::Ident) return k(c);
        std::string x = fresh();
        return mk::let(x, ty, c, k(mk::id(x)));
    }

    // Pushes `f` through the if/let prefix of a canonical term.
    TermP push(const TermP& c, const std::function<TermP(const TermP&)>& f) {
        switch (c->tag) {
        case Tag::If: return mk::ite(c->a, f(c->b), f(c->c));
        case Tag::Let: return mk::let(c->name, c->ty, c->a, f(c->b));
        default: return nullptr;
        }
    }

    TermP deref_c(const TermP& c) {
        if (c->tag == Tag::MkVar) {
            TermP rd = c->a;
            return mk::let(rd->name, Type::com(), mk::unit(), rd->a);
        }
        if (auto r = push(c, [&](const TermP& d) { return deref_c(d); })) return r;
        throw CanonError("dereferencing a non-variable canonical form");
    }

    TermP assign_c(const TermP& c, const TermP& n) {
        if (c->tag == Tag::MkVar) {
            TermP wr = c->b;
            return mk::let(wr->name, Type::exp(), n, wr->a);
        }
        if (c->tag == Tag::If) return mk::ite(c->a, assign_c(c->b, refresh(n)), assign_c(c->c, refresh(n)));
        if (auto r = push(c, [&](const TermP& d) { return assign_c(d, n); })) return r;
        throw CanonError("assigning to a non-variable canonical form");
    }

    TermP mkvar_c(const TermP& a, const TermP& b) {
        if (a->tag == Tag::If) return mk::ite(a->a, mkvar_c(a->b, refresh(b)), mkvar_c(a->c, refresh(b)));
        if (a->tag == Tag::Let) return mk::let(a->name, a->ty, a->a, mkvar_c(a->b, b));
        if (a->tag != Tag::Lambda) throw CanonError("mkvar reader is not a function");
        if (b->tag == Tag::If) return mk::ite(b->a, mkvar_c(refresh(a), b->b), mkvar_c(refresh(a), b->c));
        if (b->tag == Tag::Let) return mk::let(b->name, b->ty, b->a, mkvar_c(a, b->b));
        if (b->tag != Tag::Lambda) throw CanonError("mkvar writer is not a function");
        return mk::mkvar(a, b);
    }

    TermP app_c(const TermP& f, const TermP& a, const TypeP& param) {
        if (f->tag == Tag::Lambda) return let_c(f->name, param, a, f->a);
        if (f->tag == Tag::If) return mk::ite(f->a, app_c(f->b, refresh(a), param), app_c(f->c, refresh(a), param));
        if (auto r = push(f, [&](const TermP& d) { return app_c(d, a, param); })) return r;
        throw CanonError("applying a non-function canonical form");
    }

    TermP let_c(const std::string& y, const TypeP& ty, const TermP& c1, const TermP& c2) {
        if (ty->is_base()) return mk::let(y, ty, c1, c2);
        if (c1->tag == Tag::If)
            return mk::ite(c1->a, let_c(y, ty, c1->b, refresh(c2)), let_c(y, ty, c1->c, refresh(c2)));
        if (c1->tag == Tag::Let) return mk::let(c1->name, c1->ty, c1->a, let_c(y, ty, c1->b, c2));
        if (c1->tag == Tag::MkVar) return subst_var(c2, y, c1);
        if (c1->tag == Tag::Lambda) return subst_fun(c2, y, c1, ty);
        throw CanonError("unexpected shape bound at non-base type");
    }

    // replaces !y and y := w by the reader and writer bodies
    TermP subst_var(const TermP& t, const std::string& y, const TermP& mv) {
        if (t->tag == Tag::Deref && t->a->tag == Tag::Ident && t->a->name == y) {
            TermP rd = refresh(mv->a);
            return mk::let(rd->name, Type::com(), mk::unit(), rd->a);
        }
        if (t->tag == Tag::Assign && t->a->tag == Tag::Ident && t->a->name == y) {
            TermP wr = refresh(mv->b);
            return mk::let(wr->name, Type::exp(), t->b, wr->a);
        }
        if (t->tag == Tag::Ident && t->name == y) throw CanonError("variable used outside ! and :=");
        return map_children(t, [&](const TermP& c) { return subst_var(c, y, mv); });
    }

    // replaces each `let x = y A in C` by the inlined body, innermost occurrences first
    TermP subst_fun(const TermP& t, const std::string& y, const TermP& lam, const TypeP& ty) {
        if (t->tag == Tag::Let && t->a->tag == Tag::App && t->a->a->tag == Tag::Ident && t->a->a->name == y) {
            TermP arg = subst_fun(t->a->b, y, lam, ty);
            TermP body = subst_fun(t->b, y, lam, ty);
            TermP copy = refresh(lam);
            TermP inner = let_c(copy->name, ty->param, arg, copy->a);
            return let_c(t->name, t->ty ? t->ty : ty->result, inner, body);
        }
        if (t->tag == Tag::Ident && t->name == y) throw CanonError("function used outside a call");
        return map_children(t, [&](const TermP& c) { return subst_fun(c, y, lam, ty); });
    }
};

}

bool is_canonical(const Context& ctx, const TermP& t) {
    Scope sc;
    for (auto& [x, ty] : ctx) sc[x] = ty;
    return canon_check(t, sc);
}

bool is_canonical(const TermP& t) { return canon_check(t, {}); }

TermP canonicalize(const Context& ctx, const TermP& t) {
    TermP e = elaborate(ctx, t);
    Canon c(e, ctx);
    std::set<std::string> bound;
    for (auto& [x, ty] : ctx) bound.insert(x);
    TermP u = c.uniquify(e, {}, bound);
    TermP r = c.canon(ctx, u);
    return elaborate(ctx, r);
}

}
