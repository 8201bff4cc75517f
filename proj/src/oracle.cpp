#include "ia/oracle.hpp"

#include "ia/interp.hpp"

#include <map>
#include <stdexcept>

namespace ia {

namespace {

const std::string kHole = "[-]";

bool is_lit(const TermP& t) { return t->tag == Tag::Int || t->tag == Tag::Unit; }

// Grammar of contexts. Binders are named v0, v1, ... by depth, so α-variants never
// arise twice. Left operands of sequencing are neither skip, divergence nor
// sequences; guards are never literals; new and let binders are always used;
// application heads are identifiers, the hole, or applications of those.
class Gen {
public:
    Gen(const Context& hole_ctx, const TypeP& theta, int N) : N_(N) {
        if (hole_ctx.empty()) {
            leaf_ = mk::id(kHole);
            leaf_ty_ = theta;
        } else {
            TermP body = mk::id(kHole);
            TypeP ty = theta;
            for (auto it = hole_ctx.rbegin(); it != hole_ctx.rend(); ++it) {
                body = mk::lam(it->first, it->second, body);
                ty = Type::arrow(it->second, ty);
            }
            leaf_ = body;
            leaf_ty_ = ty;
        }
        for (int i = 0; i <= N; ++i) nums_.push_back(mk::num(i));
        skip_ = mk::unit();
    }

    const std::vector<TermP>& terms(const TypeP& ty, const std::vector<TypeP>& env, int n, bool hole) {
        std::string key = ia::to_string(ty) + "|" + std::to_string(n) + (hole ? "h" : "c");
        for (const auto& e : env) key += "," + ia::to_string(e);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<TermP> out;
        build(ty, env, n, hole, [&](const TermP& t) { out.push_back(t); });
        return memo_.emplace(key, std::move(out)).first->second;
    }

    /// Like terms() but streams the result without storing it.
    void stream(const TypeP& ty, int n, const std::function<void(const TermP&)>& sink) {
        build(ty, {}, n, true, sink);
    }

private:
    int N_;
    TermP leaf_;
    TypeP leaf_ty_;
    std::vector<TermP> nums_;
    TermP skip_;
    std::map<std::string, TermP> omegas_;
    std::map<std::string, std::vector<TermP>> memo_;
    std::map<std::string, std::vector<TermP>> spine_memo_;

    TermP omega(const TypeP& ty) {
        auto key = ia::to_string(ty);
        auto it = omegas_.find(key);
        if (it != omegas_.end()) return it->second;
        return omegas_.emplace(key, mk::omega(ty)).first->second;
    }

    bool is_omega(const TermP& t) {
        for (const auto& [k, o] : omegas_)
            if (o == t) return true;
        return false;
    }

    static std::string var_name(std::size_t depth) { return "v" + std::to_string(depth); }

    static std::vector<TypeP> push(const std::vector<TypeP>& env, const TypeP& t) {
        auto e = env;
        e.push_back(t);
        return e;
    }

    static void arrows(const TypeP& t, std::vector<std::pair<TypeP, TypeP>>& out) {
        for (TypeP u = t; u->kind == Type::Arrow; u = u->result) out.push_back({u->param, u->result});
    }

    std::vector<std::pair<TypeP, TypeP>> arrow_pairs(const std::vector<TypeP>& env, bool hole) {
        std::vector<std::pair<TypeP, TypeP>> out;
        for (const auto& e : env) arrows(e, out);
        if (hole) arrows(leaf_ty_, out);
        std::vector<std::pair<TypeP, TypeP>> uniq;
        for (const auto& p : out) {
            bool seen = false;
            for (const auto& q : uniq) seen = seen || (type_eq(p.first, q.first) && type_eq(p.second, q.second));
            if (!seen) uniq.push_back(p);
        }
        return uniq;
    }

    // identifiers, the hole, and applications with such a head
    const std::vector<TermP>& spines(const TypeP& ty, const std::vector<TypeP>& env, int n, bool hole) {
        std::string key = ia::to_string(ty) + "|" + std::to_string(n) + (hole ? "h" : "c");
        for (const auto& e : env) key += "," + ia::to_string(e);
        auto it = spine_memo_.find(key);
        if (it != spine_memo_.end()) return it->second;
        std::vector<TermP> out;
        if (n == 1) {
            if (hole) {
                if (type_eq(leaf_ty_, ty)) out.push_back(leaf_);
            } else {
                // a com identifier always holds (), which skip already covers
                if (ty->kind != Type::Com)
                    for (std::size_t i = 0; i < env.size(); ++i)
                        if (type_eq(env[i], ty)) out.push_back(mk::id(var_name(i)));
            }
        } else {
            for (const auto& [param, result] : arrow_pairs(env, hole)) {
                if (!type_eq(result, ty)) continue;
                TypeP fty = Type::arrow(param, result);
                for (int k = 1; k <= n - 2; ++k) {
                    for (int hf = 0; hf <= (hole ? 1 : 0); ++hf) {
                        bool ha = hole && hf == 0;
                        const auto& fs = spines(fty, env, k, hf == 1);
                        if (fs.empty()) continue;
                        const auto& as = terms(param, env, n - 1 - k, ha);
                        for (const auto& f : fs)
                            for (const auto& a : as) {
                                // x M with M : com is M; x ()
                                if (param->kind == Type::Com && a != skip_ && (f->tag == Tag::Ident || f->tag == Tag::Lambda)) continue;
                                out.push_back(mk::app(f, a));
                            }
                    }
                }
            }
        }
        return spine_memo_.emplace(key, std::move(out)).first->second;
    }

    template <class F>
    void split2(int total, bool hole, F&& f) {
        for (int k = 1; k < total; ++k) {
            if (hole) {
                f(k, total - k, true, false);
                f(k, total - k, false, true);
            } else {
                f(k, total - k, false, false);
            }
        }
    }

    // A closed hole-free term of base type is equivalent to a constant, skip or
    // divergence, so only those leaves are kept.
    template <class Sink>
    void build(const TypeP& ty, const std::vector<TypeP>& env, int n, bool hole, Sink&& emit) {
        struct Out {
            Sink& emit;
            bool filter;
            void push_back(const TermP& t) {
                if (filter && free_vars(t).empty()) return;
                emit(t);
            }
        } out{emit, !hole && n > 1 && ty->is_base()};
        for (const auto& s : spines(ty, env, n, hole)) out.push_back(s);
        if (n == 1) {
            if (hole) return;
            switch (ty->kind) {
            case Type::Com:
                out.push_back(skip_);
                out.push_back(omega(ty));
                break;
            case Type::Exp:
                for (const auto& k : nums_) out.push_back(k);
                out.push_back(omega(ty));
                break;
            case Type::Arrow: out.push_back(omega(ty)); break;
            case Type::Var: break;
            }
            return;
        }
        if (ty->kind == Type::Var) {
            // mkvar(fn u => R, fn v => W)
            const TypeP rd = Type::arrow(Type::com(), Type::exp()), wr = Type::arrow(Type::exp(), Type::com());
            split2(n - 1, hole, [&](int a, int b, bool ha, bool hb) {
                const auto& rs = terms(rd, env, a, ha);
                if (rs.empty()) return;
                const auto& ws = terms(wr, env, b, hb);
                for (const auto& r : rs)
                    for (const auto& w : ws)
                        if (r->tag == Tag::Lambda && w->tag == Tag::Lambda) out.push_back(mk::mkvar(r, w));
            });
            return;
        }
        const TypeP com = Type::com(), exp = Type::exp(), var = Type::var();
        const std::string x = var_name(env.size());
        // new x in B
        if (ty->is_base()) {
            for (const auto& body : terms(ty, push(env, var), n - 1, hole))
                if (free_vars(body).count(x)) out.push_back(mk::new_(x, body));
        }

        if (ty->kind == Type::Exp) {
            // !V
            for (const auto& v : terms(var, env, n - 1, hole)) out.push_back(mk::deref(v));
            // l + r, l - r
            split2(n - 1, hole, [&](int a, int b, bool ha, bool hb) {
                const auto& ls = terms(exp, env, a, ha);
                if (ls.empty()) return;
                const auto& rs = terms(exp, env, b, hb);
                for (const auto& l : ls)
                    for (const auto& r : rs) {
                        if (is_lit(l) && is_lit(r)) continue;
                        // k + e is e + k, e - k is e + (N+1-k), e + 0 is e
                        if (!is_lit(l) && !(r->tag == Tag::Int && r->num == 0)) out.push_back(mk::bin(BinOp::Add, l, r));
                        if (!is_lit(r)) out.push_back(mk::bin(BinOp::Sub, l, r));
                    }
            });
        }
        if (ty->kind == Type::Com) {
            // V := E
            split2(n - 1, hole, [&](int a, int b, bool ha, bool hb) {
                const auto& vs = terms(var, env, a, ha);
                if (vs.empty()) return;
                for (const auto& v : vs)
                    for (const auto& e : terms(exp, env, b, hb)) {
                        if (e->tag == Tag::Deref && alpha_eq(e->a, v)) continue;
                        out.push_back(mk::assign(v, e));
                    }
            });
            // while G do B
            split2(n - 1, hole, [&](int a, int b, bool ha, bool hb) {
                const auto& gs = terms(exp, env, a, ha);
                if (gs.empty()) return;
                const auto& bs = terms(com, env, b, hb);
                for (const auto& g : gs) {
                    if (is_lit(g)) continue;
                    for (const auto& body : bs) out.push_back(mk::while_(g, body));
                }
            });
        }
        // if G then T else E
        for (int a = 1; a <= n - 3; ++a)
            for (int b = 1; a + b <= n - 2; ++b) {
                int c = n - 1 - a - b;
                for (int h = 0; h < (hole ? 3 : 1); ++h) {
                    const auto& gs = terms(exp, env, a, hole && h == 0);
                    if (gs.empty()) continue;
                    const auto& ts = terms(ty, env, b, hole && h == 1);
                    if (ts.empty()) continue;
                    const auto& es = terms(ty, env, c, hole && h == 2);
                    for (const auto& g : gs) {
                        if (is_lit(g)) continue;
                        for (const auto& t : ts)
                            for (const auto& e : es) {
                                if (!hole && alpha_eq(t, e)) continue;
                                out.push_back(mk::ite(g, t, e));
                            }
                    }
                }
            }
        // L; R
        split2(n - 1, hole, [&](int a, int b, bool ha, bool hb) {
            const auto& ls = terms(com, env, a, ha);
            if (ls.empty()) return;
            const auto& rs = terms(ty, env, b, hb);
            for (const auto& l : ls) {
                if (l == skip_ || is_omega(l)) continue;
                if (l->tag == Tag::Let && l->name == "_") continue;
                for (const auto& r : rs)
                    if (!is_omega(r)) out.push_back(mk::seq(l, r));
            }
        });
        // fn x => B
        if (ty->kind == Type::Arrow) {
            for (const auto& body : terms(ty->result, push(env, ty->param), n - 1, hole))
                out.push_back(mk::lam(x, ty->param, body));
        }
        // let x = S in B, S an application
        std::vector<TypeP> bound;
        for (const auto& p : arrow_pairs(env, hole)) {
            bool seen = false;
            for (const auto& b : bound) seen = seen || type_eq(b, p.second);
            if (!seen) bound.push_back(p.second);
        }
        for (const auto& tau : bound) {
            split2(n - 1, hole, [&](int a, int b, bool ha, bool hb) {
                if (a < 2) return;
                const auto& ss = spines(tau, env, a, ha);
                if (ss.empty()) return;
                const auto& bs = terms(ty, push(env, tau), b, hb);
                for (const auto& s : ss)
                    for (const auto& body : bs)
                        if (free_vars(body).count(x)) out.push_back(mk::let(x, tau, s, body));
            });
        }
    }
};

}

TermP ContextTemplate::fill(const TermP& m) const { return substitute_closed(term, kHole, m); }

std::string ContextTemplate::to_string() const { return ia::to_string(term); }

std::size_t enumerate_contexts(const Context& hole_ctx, const TypeP& hole_ty, const OracleConfig& cfg,
                               const std::function<bool(const ContextTemplate&)>& f) {
    if (cfg.fragment != Fragment::IAloop && cfg.fragment != Fragment::IAcbv)
        throw std::invalid_argument("contexts are enumerated for IAcbv or IAloop only");
    struct Stop {};
    Gen gen(hole_ctx, hole_ty, cfg.N);
    std::size_t visited = 0;
    try {
        for (int n = 1; n <= cfg.max_size; ++n) {
            gen.stream(Type::com(), n, [&](const TermP& t) {
                ++visited;
                ContextTemplate c{t, hole_ctx, hole_ty, static_cast<std::size_t>(n)};
                if (!f(c)) throw Stop{};
            });
        }
    } catch (const Stop&) {
    }
    return visited;
}

Run run_closed(const TermP& program, std::uint64_t fuel, int N) {
    EvalResult r = eval(Heap{}, program, fuel, N);
    return {r.converged, r.used};
}

std::optional<Distinction> try_context(const ContextTemplate& c, const TermP& m1, const TermP& m2,
                                       const OracleConfig& cfg) {
    TermP p1 = c.fill(m1), p2 = c.fill(m2);
    Run r1 = run_closed(p1, cfg.fuel, cfg.N);
    Run r2 = run_closed(p2, cfg.fuel, cfg.N);
    if (r1.converged == r2.converged) return std::nullopt;
    bool first = r1.converged;
    std::uint64_t cost = first ? r1.used : r2.used;
    std::uint64_t spent = cfg.fuel;
    if (spent < 10 * cost) {
        spent = 10 * cost;
        Run again = run_closed(first ? p2 : p1, spent, cfg.N);
        if (again.converged) return std::nullopt;
    }
    return Distinction{c, first, cost};
}

DistinguishResult distinguish(const Judgment& m1, const Judgment& m2, const OracleConfig& cfg) {
    bool same = m1.ctx.size() == m2.ctx.size() && type_eq(m1.type, m2.type);
    for (std::size_t i = 0; same && i < m1.ctx.size(); ++i)
        same = m1.ctx[i].first == m2.ctx[i].first && type_eq(m1.ctx[i].second, m2.ctx[i].second);
    if (!same) throw std::invalid_argument("judgments differ in context or type");
    DistinguishResult res;
    res.examined = enumerate_contexts(m1.ctx, m1.type, cfg, [&](const ContextTemplate& c) {
        res.witness = try_context(c, m1.term, m2.term, cfg);
        return !res.witness;
    });
    return res;
}

}
