#pragma once

// Shared by the unit tests and the acceptance runner.

#include "ia/games.hpp"
#include "ia/interp.hpp"
#include "ia/lang.hpp"
#include "ia/splays.hpp"
#include "ia/syntax.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef IA_TEST_DATA
#define IA_TEST_DATA "tests/data"
#endif

namespace fx {

using namespace ia;

inline std::string read_data(const std::string& name) {
    std::ifstream in(std::string(IA_TEST_DATA) + "/" + name);
    if (!in) throw std::runtime_error("missing test data " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::shared_ptr<const Prearena> arena(const std::string& sequent, int N) {
    auto [ctx, ty] = parse_sequent(sequent);
    return std::make_shared<const Prearena>(prearena_of_judgment(ctx, ty, N));
}

inline SPlay load_play(const std::string& file, const std::string& sequent, int N) {
    return parse_splay(read_data(file), arena(sequent, N));
}

// ------------------------------------------------------------ equivalence suite

struct EquivCase {
    std::string first, second;
    bool equivalent;
};

inline const std::vector<EquivCase>& equivalence_suite() {
    static const std::vector<EquivCase> cases = {
        {"|- new x in 5 : exp", "|- 5 : exp", true},
        {"|- new x in (x := 1; !x) : exp", "|- 1 : exp", true},
        {"|- new x in (x := 1; x := 2; !x) : exp", "|- 2 : exp", true},
        {"|- skip; skip : com", "|- skip : com", true},
        {"|- 1 : exp", "|- 2 : exp", false},
        {"f:com->com->com |- let g1 = f () in let g2 = f () in g1 () : com",
         "f:com->com->com |- let g1 = f () in let g2 = f () in g2 () : com", false},
        {"f:com->exp |- while f () do skip : com",
         "f:com->exp |- if f () then (skip; while f () do skip) else skip : com", true},
        {"f:com->exp |- new x in while f () do x := !x + 1 : com", "f:com->exp |- while f () do skip : com", true},
        {"f:com->exp |- f () + f () : exp", "f:com->exp |- let a = f () in a + f () : exp", true},
        {"f:exp->com |- new x in f (!x) : com", "f:exp->com |- f 0 : com", true},
        {"f:(com->exp)->com |- new x in f (fn u:com => (x := !x + 1; !x)) : com",
         "f:(com->exp)->com |- f (fn u:com => 1) : com", false},
        {"x:var |- x := !x : com", "x:var |- skip : com", false},
        {"x:var |- !x : exp", "x:var |- !x + 0 : exp", true},
        {"|- fn x:exp => x + 1 : exp->exp", "|- fn y:exp => 1 + y : exp->exp", true},
    };
    return cases;
}

// ------------------------------------------------------------ automata

inline std::vector<int> letters(int k) {
    std::vector<int> out;
    for (int i = 0; i < k; ++i) out.push_back(intern(std::string(1, char('a' + i))));
    return out;
}

inline Nfa random_nfa(std::mt19937& rng, int max_states, const std::vector<int>& alpha, bool eps = false) {
    std::uniform_int_distribution<int> ns(1, max_states);
    int n = ns(rng);
    std::uniform_int_distribution<int> st(0, n - 1), coin(0, 3);
    Nfa a;
    for (int i = 0; i < n; ++i) a.add_state(coin(rng) == 0);
    for (int s : alpha) a.add_symbol(s);
    int edges = std::uniform_int_distribution<int>(0, 2 * n * (int)alpha.size())(rng);
    for (int e = 0; e < edges; ++e) {
        int sym = alpha[std::uniform_int_distribution<int>(0, (int)alpha.size() - 1)(rng)];
        if (eps && coin(rng) == 0) sym = kEps;
        a.add_edge(st(rng), sym, st(rng));
    }
    return a;
}

/// Direct simulation, independent of the engine's determinization.
inline bool simulate(const Nfa& a, const Word& w) {
    std::vector<char> cur(a.size(), 0);
    auto closure = [&](std::vector<char>& set) {
        std::vector<int> stack;
        for (int s = 0; s < a.size(); ++s)
            if (set[s]) stack.push_back(s);
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (const auto& e : a.edges(s))
                if (e.sym == kEps && !set[e.to]) set[e.to] = 1, stack.push_back(e.to);
        }
    };
    if (a.size() == 0) return false;
    cur[a.start()] = 1;
    closure(cur);
    for (int sym : w) {
        std::vector<char> nx(a.size(), 0);
        for (int s = 0; s < a.size(); ++s)
            if (cur[s])
                for (const auto& e : a.edges(s))
                    if (e.sym == sym) nx[e.to] = 1;
        closure(nx);
        cur = std::move(nx);
    }
    for (int s = 0; s < a.size(); ++s)
        if (cur[s] && a.accepting(s)) return true;
    return false;
}

inline std::vector<Word> all_words(const std::vector<int>& alpha, int k) {
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i)
        if ((int)out[i].size() < k)
            for (int s : alpha) {
                Word w = out[i];
                w.push_back(s);
                out.push_back(w);
            }
    return out;
}

// ------------------------------------------------------------ cell S-plays

/// Plays of `new x in f x` style clients over `f:var->β |- β`: P hands f a fresh or
/// reused cell and answers reads and writes as a cell would. Every valid prefix up to
/// `max_len` is collected.
class CellCorpus {
public:
    CellCorpus(std::shared_ptr<const Prearena> arena, int N, int max_len, int max_names = 2)
        : A_(std::move(arena)), N_(N), max_len_(max_len), max_names_(max_names) {}

    std::vector<SPlay> plays;

    void run() {
        SPlay s{A_, {}};
        push(s, {move("f.*"), {}, -1});
    }

    bool complete(const SPlay& s) const { return s.size() > 1 && A_->side[s.moves.back().move] == Side::Right; }

private:
    std::shared_ptr<const Prearena> A_;
    int N_, max_len_, max_names_;

    int move(const std::string& name) const {
        auto ms = A_->lookup(name);
        if (ms.empty()) throw std::logic_error("no move " + name);
        return ms.front();
    }
    const std::string& name(const SPlay& s, int i) const { return A_->name(s.moves[i].move); }

    void push(SPlay& s, SMove m) {
        s.moves.push_back(std::move(m));
        if (!validate_last(s, N_)) {
            plays.push_back(s);
            if ((int)s.size() < max_len_) step(s);
        }
        s.moves.pop_back();
    }

    int names_used(const SPlay& s) const { return (int)names_of(s).size(); }

    // the pending call: the most recent f.a.* whose f.r.* has not been played
    int pending_call(const SPlay& s) const {
        for (int i = (int)s.size() - 1; i >= 0; --i) {
            const std::string& n = name(s, i);
            if (n.rfind("f.r.", 0) == 0) return -1;
            if (n == "f.a.*") return i;
        }
        return -1;
    }

    Name cell_of(const SPlay& s, int call) const { return s.moves[call].store.front().first; }

    void call(SPlay& s, const Store& from) {
        int used = names_used(s);
        if (used < max_names_) push(s, {move("f.a.*"), {{used, 0}}, 0});
        for (const auto& [a, v] : from) push(s, {move("f.a.*"), {{a, v}}, 0});
    }

    void step(SPlay& s) {
        const SMove& last = s.moves.back();
        const std::string& n = A_->name(last.move);
        bool o_turn = s.is_p(s.size() - 1);
        if (o_turn) {
            int c = pending_call(s);
            if (c < 0) return;
            for (const Store& t : o_stores(s, c)) {
                push(s, {move("f.a.read"), t, c});
                for (int j = 0; j <= N_; ++j) push(s, {move("f.a.write(" + std::to_string(j) + ")"), t, c});
                for (int m = 0; m < A_->size(); ++m) {
                    const std::string& rn = A_->name(m);
                    if (rn.rfind("f.r.", 0) == 0 && A_->enabled_by(s.moves[c].move, m)) push(s, {m, t, c});
                }
            }
            return;
        }
        int here = (int)s.size() - 1;
        Store st = last.store;
        if (n == "f.*") {
            call(s, {});
        } else if (n == "f.a.read") {
            Name a = cell_of(s, last.just);
            push(s, {move("f.a." + std::to_string(store::at(st, a))), st, here});
        } else if (n.rfind("f.a.write(", 0) == 0) {
            Name a = cell_of(s, last.just);
            std::int64_t j = std::stoll(n.substr(10));
            push(s, {move("f.a.ok"), store::update(st, {{a, j}}), here});
        } else if (n.rfind("f.r.", 0) == 0) {
            push(s, {move("R:" + n.substr(4)), {}, 0});
            call(s, st);
        }
    }

    // O keeps the domain of the justifier's store and echoes the latest values
    std::vector<Store> o_stores(const SPlay& s, int just) {
        Store base;
        const Store& prev = s.moves.back().store;
        for (const auto& [a, v] : s.moves[just].store) base.push_back({a, store::has(prev, a) ? store::at(prev, a) : v});
        return {base};
    }
};

/// The store-free play of the function f that `t` (over f:var->β |- β) interacts with,
/// over |- var->β.
inline SPlay opponent_of(const SPlay& t, std::shared_ptr<const Prearena> sa) {
    SPlay s{sa, {}};
    s.moves.push_back({sa->lookup("L:*").front(), {}, -1});
    std::vector<int> index(t.size(), -1);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string& n = t.arena->name(t.moves[i].move);
        if (n.rfind("f.", 0) != 0) continue;
        std::string local = n == "f.*" ? "R:*" : "R:" + n.substr(2);
        int just = t.moves[i].just < 0 ? 0 : index[t.moves[i].just];
        index[i] = (int)s.size();
        s.moves.push_back({sa->lookup(local).front(), {}, just});
    }
    return s;
}

/// u over x:β |- β: reads the argument and answers `f(k)`.
inline SPlay unary_play(std::shared_ptr<const Prearena> ua, const std::string& in, const std::string& out) {
    SPlay u{ua, {}};
    u.moves.push_back({ua->lookup("L:x." + in).front(), {}, -1});
    u.moves.push_back({ua->lookup("R:" + out).front(), {}, 0});
    return u;
}

// ------------------------------------------------------------ random programs

/// Random closed IAcbv programs over a few var-typed identifiers.
class ProgramGen {
public:
    ProgramGen(std::uint32_t seed, int N) : rng_(seed), N_(N) {}

    TermP exp(std::vector<std::string>& env, int depth, bool hole = false) { return gen(true, env, depth, hole); }
    TermP com(std::vector<std::string>& env, int depth, bool hole = false) { return gen(false, env, depth, hole); }
    TypeP hole_type = Type::com();

private:
    std::mt19937 rng_;
    int N_;
    int fresh_ = 0;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    TermP var(std::vector<std::string>& env) { return mk::id(env[pick((int)env.size())]); }

    TermP gen(bool is_exp, std::vector<std::string>& env, int depth, bool hole) {
        if (hole && type_eq(hole_type, is_exp ? Type::exp() : Type::com()) && (depth <= 0 || pick(3) == 0))
            return mk::id("[-]");
        if (depth <= 0 && !hole) {
            if (is_exp) return env.empty() || pick(2) ? mk::num(pick(N_ + 1)) : mk::deref(var(env));
            return env.empty() || pick(2) ? mk::unit() : mk::assign(var(env), mk::num(pick(N_ + 1)));
        }
        int d = depth - 1;
        // which child carries the hole is decided per production
        int choice = pick(is_exp ? 6 : 7);
        auto split = [&](int k) { return hole ? pick(k) : -1; };
        if (is_exp) {
            switch (choice) {
            case 0:
                if (!hole) return mk::num(pick(N_ + 1));
                [[fallthrough]];
            case 1: {
                int h = split(2);
                return mk::bin(pick(2) ? BinOp::Add : BinOp::Sub, gen(true, env, d, h == 0), gen(true, env, d, h == 1));
            }
            case 2: {
                int h = split(3);
                return mk::ite(gen(true, env, d, h == 0), gen(true, env, d, h == 1), gen(true, env, d, h == 2));
            }
            case 3: {
                int h = split(2);
                return mk::seq(gen(false, env, d, h == 0), gen(true, env, d, h == 1));
            }
            case 4: {
                std::string y = "v" + std::to_string(fresh_++);
                env.push_back(y);
                TermP body = gen(true, env, d, hole);
                env.pop_back();
                return mk::new_(y, body);
            }
            default:
                if (!hole && !env.empty()) return mk::deref(var(env));
                return gen(true, env, d, hole);
            }
        }
        switch (choice) {
        case 0:
            if (!hole) return mk::unit();
            [[fallthrough]];
        case 1: {
            int h = split(2);
            return mk::seq(gen(false, env, d, h == 0), gen(false, env, d, h == 1));
        }
        case 2: {
            int h = split(3);
            return mk::ite(gen(true, env, d, h == 0), gen(false, env, d, h == 1), gen(false, env, d, h == 2));
        }
        case 3: {
            int h = split(2);
            return mk::while_(gen(true, env, d, h == 0), gen(false, env, d, h == 1));
        }
        case 4: {
            std::string y = "v" + std::to_string(fresh_++);
            env.push_back(y);
            TermP body = gen(false, env, d, hole);
            env.pop_back();
            return mk::new_(y, body);
        }
        case 5:
            if (!env.empty()) {
                if (!hole) return mk::assign(var(env), gen(true, env, d, false));
                return mk::assign(var(env), gen(true, env, d, true));
            }
            return gen(false, env, d, hole);
        default:
            if (!hole && pick(4) == 0) return mk::omega(Type::com());
            return gen(false, env, d, hole);
        }
    }
};

}
