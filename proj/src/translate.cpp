#include "ia/translate.hpp"

#include "ia/canon.hpp"
#include "ia/games.hpp"
#include "ia/interp.hpp"

#include <functional>

namespace ia {

namespace {

struct Binding {
    std::string name;
    TypeP ty;
    int val;  ///< value of an exp identifier, -1 otherwise
};

using Env = std::vector<Binding>;

const Binding& find(const Env& env, const std::string& x) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->name == x) return *it;
    throw TranslateError("unbound identifier " + x);
}

int S(const std::string& m, Mark mark = Mark::None) { return intern(m, mark); }

Nfa word(std::initializer_list<std::string> moves) {
    Word w;
    for (auto& m : moves) w.push_back(S(m));
    return lang::lit(w);
}

/// Initial moves of a type's arena, by name.
std::vector<std::string> inits(const TypeP& ty, int N) {
    if (ty->kind == Type::Exp) {
        std::vector<std::string> v;
        for (int j = 0; j <= N; ++j) v.push_back(std::to_string(j));
        return v;
    }
    return {"*"};
}

int init_value(const TypeP& ty, const std::string& i) { return ty->kind == Type::Exp ? std::stoi(i) : -1; }

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

class Translator {
public:
    explicit Translator(int N) : N_(N) {}

    Nfa T(const Env& env, const TermP& c, const TypeP& ty) {
        std::string key = std::to_string((std::uintptr_t)c.get());
        for (auto& b : env) key += "|" + b.name + "=" + std::to_string(b.val);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Nfa r = lang::tidy(clause(env, c, ty));
        memo_.emplace(key, r);
        return r;
    }

    /// comp^{i,j}: plays ending in the answer `j`, with it removed.
    Nfa Tj(const Env& env, const TermP& c, const TypeP& ty, const std::string& j) {
        return lang::tidy(lang::right_quotient(T(env, c, ty), S(j)));
    }

private:
    int N_;
    std::map<std::string, Nfa> memo_;

    std::string lit(std::int64_t v) const { return std::to_string(arith(BinOp::Add, v, 0, N_)); }

    Nfa clause(const Env& env, const TermP& c, const TypeP& ty) {
        switch (c->tag) {
        case Tag::Unit: return word({"*"});
        case Tag::Int: return word({lit(c->num)});
        case Tag::Ident: {
            const Binding& b = find(env, c->name);
            if (b.ty->kind == Type::Com) return word({"*"});
            if (b.ty->kind == Type::Exp) return word({std::to_string(b.val)});
            throw TranslateError("identifier of non-base type in canonical form");
        }
        case Tag::Bin: {
            int i = find(env, c->a->name).val, j = find(env, c->b->name).val;
            return word({std::to_string(arith(c->op, i, j, N_))});
        }
        case Tag::If: {
            int v = find(env, c->a->name).val;
            return T(env, v == 0 ? c->c : c->b, ty);
        }
        case Tag::Assign: {
            const std::string& x = c->a->name;
            int j = find(env, c->b->name).val;
            return word({x + ".write(" + std::to_string(j) + ")", x + ".ok", "*"});
        }
        case Tag::Deref: {
            const std::string& x = c->a->name;
            std::vector<Nfa> alts;
            for (int j = 0; j <= N_; ++j) alts.push_back(word({x + "." + std::to_string(j), std::to_string(j)}));
            return lang::concat(word({x + ".read"}), lang::unite(alts));
        }
        case Tag::Lambda: return lambda(env, c, ty);
        case Tag::MkVar: return mkvar(env, c);
        case Tag::New: return new_block(env, c, ty);
        case Tag::While: return loop(env, c);
        case Tag::Let:
            if (c->a->tag == Tag::App) return call(env, c, ty);
            return base_let(env, c, ty);
        default: throw TranslateError("not a canonical form: " + to_string(c));
        }
    }

    bool is_context_move(const Env& env, const std::string& m) const {
        for (auto& b : env)
            if (starts_with(m, b.name + ".")) return true;
        return false;
    }

    Nfa lambda(const Env& env, const TermP& c, const TypeP& ty) {
        const std::string& x = c->name;
        std::vector<Nfa> alts{lang::epsilon()};
        for (auto& i : inits(c->ty, N_)) {
            Env inner = env;
            inner.push_back({x, c->ty, init_value(c->ty, i)});
            Nfa body = T(inner, c->a, ty->result);
            std::map<int, int> ren;
            for (int s : lang::used_symbols(body)) {
                const Symbol& sy = symbol(s);
                if (starts_with(sy.move, x + ".")) ren[s] = S("a." + sy.move.substr(x.size() + 1), sy.mark);
                else if (!is_context_move(env, sy.move)) ren[s] = S("r." + sy.move, sy.mark);
            }
            alts.push_back(lang::concat(word({"a." + i}), lang::rename(body, ren)));
        }
        return lang::concat(word({"*"}), lang::unite(alts));
    }

    Nfa mkvar(const Env& env, const TermP& c) {
        const TermP &rd = c->a, &wr = c->b;
        std::vector<Nfa> alts{lang::epsilon()};
        Env e1 = env;
        e1.push_back({rd->name, Type::com(), -1});
        alts.push_back(lang::concat(word({"read"}), T(e1, rd->a, Type::exp())));
        for (int j = 0; j <= N_; ++j) {
            Env e2 = env;
            e2.push_back({wr->name, Type::exp(), j});
            Nfa body = lang::concat(Tj(e2, wr->a, Type::com(), "*"), word({"ok"}));
            alts.push_back(lang::concat(word({"write(" + std::to_string(j) + ")"}), body));
        }
        return lang::concat(word({"*"}), lang::unite(alts));
    }

    Nfa new_block(const Env& env, const TermP& c, const TypeP& ty) {
        const std::string& x = c->name;
        Env inner = env;
        inner.push_back({x, Type::var(), -1});
        Nfa body = T(inner, c->a, ty);
        std::set<int> mine, ambient;
        for (int s : lang::used_symbols(body)) (starts_with(symbol(s).move, x + ".") ? mine : ambient).insert(s);
        Nfa cell = cell_discipline(x, N_, ambient);
        for (int s : lang::used_symbols(cell))
            if (starts_with(symbol(s).move, x + ".")) mine.insert(s);
        return lang::minimize(lang::erase(lang::intersect(body, cell), mine));
    }

    Nfa loop(const Env& env, const TermP& c) {
        std::vector<Nfa> rounds;
        for (int j = 1; j <= N_; ++j)
            rounds.push_back(lang::concat(Tj(env, c->a, Type::exp(), std::to_string(j)), Tj(env, c->b, Type::com(), "*")));
        return lang::concat({lang::star(lang::unite(rounds)), Tj(env, c->a, Type::exp(), "0"), word({"*"})});
    }

    Nfa base_let(const Env& env, const TermP& c, const TypeP& ty) {
        TypeP bt = c->ty;
        if (!bt || !bt->is_base()) throw TranslateError("let of non-base type without a call: " + to_string(c));
        std::vector<Nfa> alts;
        for (auto& j : inits(bt, N_)) {
            Nfa first = Tj(env, c->a, bt, j);
            if (lang::is_empty(first)) continue;
            Env inner = env;
            if (c->name != "_") inner.push_back({c->name, bt, init_value(bt, j)});
            alts.push_back(lang::concat(first, T(inner, c->b, ty)));
        }
        return lang::unite(alts);
    }

    // `let x = z A in N`
    Nfa call(const Env& env, const TermP& c, const TypeP& ty) {
        const TermP& app = c->a;
        if (app->a->tag != Tag::Ident) throw TranslateError("call of a non-identifier: " + to_string(c));
        const std::string& z = app->a->name;
        const Binding& zb = find(env, z);
        if (zb.ty->kind != Type::Arrow) throw TranslateError(z + " is not a function");
        TypeP xt = zb.ty->result;
        const TermP& arg = app->b;

        Nfa head;
        std::optional<Nfa> detour;  // C'
        if (arg->tag == Tag::Ident) {
            const Binding& yb = find(env, arg->name);
            head = word({z + ".a." + (yb.ty->kind == Type::Exp ? std::to_string(yb.val) : "*")});
        } else if (arg->tag == Tag::Lambda) {
            head = word({z + ".a.*"});
            TypeP b1 = arg->ty, b2 = zb.ty->param->result;
            std::vector<Nfa> alts;
            for (auto& i : inits(b1, N_)) {
                Env inner = env;
                inner.push_back({arg->name, b1, init_value(b1, i)});
                for (auto& j : inits(b2, N_)) {
                    Nfa body = Tj(inner, arg->a, b2, j);
                    if (lang::is_empty(body)) continue;
                    alts.push_back(lang::concat({word({z + ".a.a." + i}), body, word({z + ".a.r." + j})}));
                }
            }
            detour = lang::tidy(lang::star(lang::unite(alts)));
        } else if (arg->tag == Tag::MkVar) {
            head = word({z + ".a.*"});
            const TermP &rd = arg->a, &wr = arg->b;
            std::vector<Nfa> alts;
            Env e1 = env;
            e1.push_back({rd->name, Type::com(), -1});
            for (int j = 0; j <= N_; ++j) {
                Nfa body = Tj(e1, rd->a, Type::exp(), std::to_string(j));
                if (!lang::is_empty(body))
                    alts.push_back(lang::concat({word({z + ".a.read"}), body, word({z + ".a." + std::to_string(j)})}));
            }
            for (int j = 0; j <= N_; ++j) {
                Env e2 = env;
                e2.push_back({wr->name, Type::exp(), j});
                Nfa body = Tj(e2, wr->a, Type::com(), "*");
                if (!lang::is_empty(body))
                    alts.push_back(lang::concat({word({z + ".a.write(" + std::to_string(j) + ")"}), body, word({z + ".a.ok"})}));
            }
            detour = lang::tidy(lang::star(lang::unite(alts)));
        } else {
            throw TranslateError("argument is not canonical: " + to_string(arg));
        }
        Nfa pre = detour ? lang::concat(head, *detour) : head;

        const std::string& x = c->name;
        if (xt->is_base()) {
            std::vector<Nfa> alts;
            for (auto& k : inits(xt, N_)) {
                Env inner = env;
                if (x != "_") inner.push_back({x, xt, init_value(xt, k)});
                alts.push_back(lang::concat(word({z + ".r." + k}), T(inner, c->b, ty)));
            }
            return lang::concat(pre, lang::unite(alts));
        }

        Env inner = env;
        inner.push_back({x, xt, -1});
        Nfa body = T(inner, c->b, ty);
        Arena xa = denote_type(xt, N_);
        std::map<std::string, int> idx;
        for (int m = xa.num_initial; m < xa.size(); ++m) idx[xa.names[m]] = m;
        auto relabel = [&](bool marked) {
            std::map<int, Nfa> rules;
            for (int s : lang::used_symbols(body)) {
                const Symbol& sy = symbol(s);
                if (!starts_with(sy.move, x + ".")) continue;
                std::string m = sy.move.substr(x.size() + 1);
                auto it = idx.find(m);
                if (it == idx.end()) throw TranslateError("unknown move " + sy.move);
                int mv = it->second;
                bool p_move = xa.labels[mv].player == Player::O;  // flipped on the context side
                bool q_x = xa.labels[mv].kind == Kind::Q && xa.enabled_by(0, mv);
                Mark mk = sy.mark;
                if (q_x && marked && mk == Mark::None) mk = Mark::Bullet;
                Nfa r = lang::sym(S(z + ".r." + m, mk));
                if (p_move && detour) r = lang::concat(r, *detour);
                rules.emplace(s, std::move(r));
            }
            return lang::subst(body, rules);
        };
        Nfa with_ptr = lang::concat(lang::sym(S(z + ".r.*", Mark::Circle)), relabel(true));
        Nfa without = lang::concat(word({z + ".r.*"}), relabel(false));
        return lang::concat(pre, lang::unite(with_ptr, without));
    }
};

/// Renames every binder to a reserved name so that move prefixes cannot collide.
TermP rename_binders(const TermP& t, std::map<std::string, std::string> ren, int& k) {
    auto fresh = [&] { return "$b" + std::to_string(k++); };
    auto kids = [&](const TermP& n, const std::map<std::string, std::string>& r) {
        auto m = std::make_shared<Term>(*n);
        if (m->a) m->a = rename_binders(m->a, r, k);
        if (m->b) m->b = rename_binders(m->b, r, k);
        if (m->c) m->c = rename_binders(m->c, r, k);
        return TermP(m);
    };
    switch (t->tag) {
    case Tag::Ident: {
        auto it = ren.find(t->name);
        return it == ren.end() ? t : mk::id(it->second);
    }
    case Tag::Lambda:
    case Tag::New: {
        auto m = std::make_shared<Term>(*t);
        m->name = fresh();
        ren[t->name] = m->name;
        m->a = rename_binders(t->a, ren, k);
        return m;
    }
    case Tag::Let: {
        auto m = std::make_shared<Term>(*t);
        m->a = rename_binders(t->a, ren, k);
        if (t->name != "_") {
            m->name = fresh();
            ren[t->name] = m->name;
        }
        m->b = rename_binders(t->b, ren, k);
        return m;
    }
    default: return kids(t, ren);
    }
}

TermP reduce_literals(const TermP& t, int N) {
    if (t->tag == Tag::Int) {
        std::int64_t v = arith(BinOp::Add, t->num, 0, N);
        return v == t->num ? t : mk::num(v);
    }
    if (!t->a && !t->b && !t->c) return t;
    auto m = std::make_shared<Term>(*t);
    if (m->a) m->a = reduce_literals(m->a, N);
    if (m->b) m->b = reduce_literals(m->b, N);
    if (m->c) m->c = reduce_literals(m->c, N);
    return m;
}

}

Nfa cell_discipline(const std::string& x, int N, const std::set<int>& ambient) {
    Nfa a;
    std::vector<int> ready(N + 1), reading(N + 1), writing(N + 1);
    for (int v = 0; v <= N; ++v) {
        ready[v] = a.add_state(true);
        reading[v] = a.add_state();
        writing[v] = a.add_state();
    }
    a.set_start(ready[0]);
    int rd = S(x + ".read"), ok = S(x + ".ok");
    for (int v = 0; v <= N; ++v) {
        a.add_edge(ready[v], rd, reading[v]);
        a.add_edge(reading[v], S(x + "." + std::to_string(v)), ready[v]);
        a.add_edge(writing[v], ok, ready[v]);
        for (int u = 0; u <= N; ++u) a.add_edge(ready[u], S(x + ".write(" + std::to_string(v) + ")"), writing[v]);
        for (int s : ambient) {
            a.add_edge(ready[v], s, ready[v]);
            a.add_edge(reading[v], s, reading[v]);
            a.add_edge(writing[v], s, writing[v]);
        }
    }
    return a;
}

ComponentLang translate(const Context& ctx, const TermP& canonical, const TypeP& ty, int N) {
    if (N < 1) throw TranslateError("N must be at least 1");
    for (auto& [x, t] : ctx)
        if (x == "a" || x == "r") throw TranslateError("context identifier '" + x + "' clashes with result move names");
    if (!is_canonical(ctx, canonical)) throw TranslateError("term is not in canonical form");
    int k = 0;
    TermP term = rename_binders(elaborate(ctx, canonical), {}, k);
    ComponentLang out{ctx, canonical, ty, N, {}};
    Prearena pa = prearena_of_judgment(ctx, ty, N);
    Translator tr(N);
    // initial moves in the same lexicographic order as the tensor arena
    std::vector<std::vector<int>> tuples{{}};
    for (auto& [x, t] : ctx) {
        std::vector<std::vector<int>> next;
        for (auto& tup : tuples)
            for (auto& i : inits(t, N)) {
                auto u = tup;
                u.push_back(init_value(t, i));
                next.push_back(std::move(u));
            }
        tuples.swap(next);
    }
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        Env env;
        for (std::size_t c = 0; c < ctx.size(); ++c) env.push_back({ctx[c].first, ctx[c].second, tuples[i][c]});
        Component comp{tuples[i], pa.game.names[i], lang::minimize(tr.T(env, term, ty))};
        out.components.push_back(std::move(comp));
    }
    return out;
}

std::map<std::pair<int, std::string>, Nfa> split_components(const ComponentLang& l) {
    if (!l.type->is_base()) throw TranslateError("split_components needs a base result type");
    std::map<std::pair<int, std::string>, Nfa> out;
    for (std::size_t i = 0; i < l.components.size(); ++i)
        for (auto& j : inits(l.type, l.N))
            out.emplace(std::pair{(int)i, j}, lang::tidy(lang::right_quotient(l.components[i].lang, S(j))));
    return out;
}

std::string EquivResult::witness_text() const {
    std::string s = initial;
    for (int x : witness) s += " " + symbol_name(x);
    return s;
}

EquivResult decide_equiv(const Judgment& a, const Judgment& b, int N) {
    if (a.ctx.size() != b.ctx.size()) throw TranslateError("contexts differ");
    for (std::size_t i = 0; i < a.ctx.size(); ++i)
        if (a.ctx[i].first != b.ctx[i].first || !type_eq(a.ctx[i].second, b.ctx[i].second))
            throw TranslateError("contexts differ at " + a.ctx[i].first);
    if (!type_eq(a.type, b.type)) throw TranslateError("types differ");
    std::vector<ComponentLang> ls;
    for (const Judgment* j : {&a, &b}) {
        TypeP t = typecheck(j->ctx, j->term);
        if (!type_eq(t, j->type)) throw TranslateError("term does not have the declared type");
        // literals are read modulo N+1, as the interpreter does in finitary mode
        TermP term = reduce_literals(j->term, N);
        if (!classify_fragment(j->ctx, term, N).count(Fragment::IA2plus))
            throw TranslateError("judgment is outside IA2+: " + to_string(*j));
        TermP c = canonicalize(j->ctx, term);
        if (!classify_fragment(j->ctx, c, N).count(Fragment::IA2plus))
            throw TranslateError("canonical form left IA2+: " + to_string(c));
        ls.push_back(translate(j->ctx, c, j->type, N));
    }
    EquivResult r;
    for (std::size_t i = 0; i < ls[0].components.size(); ++i) {
        const Nfa &l0 = ls[0].components[i].lang, &l1 = ls[1].components[i].lang;
        if (!lang::difference_witness(l0, l1)) continue;
        // shortest word of either difference, preferring the first judgment on ties
        Nfa both = lang::intersect(l0, l1);
        auto w0 = lang::difference_witness(l0, both), w1 = lang::difference_witness(l1, both);
        r.equivalent = false;
        r.component = (int)i;
        r.initial = ls[0].components[i].initial;
        r.witness_in_first = w0 && (!w1 || w0->size() <= w1->size());
        r.witness = r.witness_in_first ? *w0 : *w1;
        break;
    }
    return r;
}

}
