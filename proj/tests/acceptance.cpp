// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "fixtures.hpp"

#include "ia/oracle.hpp"
#include "ia/translate.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ia;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

// ------------------------------------------------------------ 1

Outcome playcomp() {
    auto sa = fx::arena("|- var->exp", 3);
    auto ta = fx::arena("f:var->exp |- exp", 3);
    Outcome o;
    std::ostringstream d;
    for (auto [sf, tf, answer] : {std::tuple{"playcomp_s.play", "playcomp_t.play", "2"},
                                  {"playcomp_s2.play", "playcomp_t2.play", "3"}}) {
        SPlay s = parse_splay(fx::read_data(sf), sa), t = parse_splay(fx::read_data(tf), ta);
        SPlay c = compose(s, t);
        std::string got;
        for (const auto& m : c.moves) got += (got.empty() ? "" : " ") + c.arena->name(m.move) + store::to_string(m.store);
        bool exact = c.size() == 2 && c.arena->name(c.moves[0].move) == "*" && c.moves[0].store.empty() &&
                     c.arena->name(c.moves[1].move) == answer && c.moves[1].just == 0 && c.moves[1].store.empty();
        o.ok = o.ok && exact && !validate_splay(s, 3) && !validate_splay(t, 3);
        d << (d.tellp() ? "; " : "") << sf << ";" << tf << " = " << got;
    }
    o.detail = d.str();
    return o;
}

// ------------------------------------------------------------ 2

Outcome intro_plays() {
    const char* seq = "f:(com->exp)->(com->exp) |- com->exp";
    SPlay p1 = fx::load_play("intro_play1.play", seq, 2);
    auto v1 = validate_splay(p1, 2);
    SPlay p2 = fx::load_play("intro_play2.play", seq, 2);
    std::size_t valid = 0, innocent = 0;
    for_each_decoration(p2, 2, 2, [&](const SPlay& d) {
        ++valid;
        if (!check_innocent(d)) ++innocent;
    });
    Outcome o;
    o.ok = !v1 && !check_innocent(p1) && innocent == 0;
    o.detail = std::string("first play ") + (v1 ? "rejected: " + to_string(*v1) : "valid") + "; second play: " +
               std::to_string(valid) + " decorations pass the S-play conditions, " + std::to_string(innocent) +
               " of them innocent";
    return o;
}

// ------------------------------------------------------------ 3

Outcome suite() {
    Outcome o;
    int right = 0, n = 0;
    for (const auto& c : fx::equivalence_suite()) {
        ++n;
        EquivResult r = decide_equiv(parse_judgment(c.first), parse_judgment(c.second), 2);
        if (r.equivalent == c.equivalent) ++right;
        else o.detail += " wrong: " + c.first + " vs " + c.second + ";";
    }
    o.ok = right == n && n >= 10;
    o.detail = std::to_string(right) + "/" + std::to_string(n) + " verdicts as expected" + o.detail;
    return o;
}

// ------------------------------------------------------------ 4

Outcome oracle() {
    Outcome o;
    int found = 0, ineq = 0, clean = 0, eq = 0;
    std::size_t examined = 0;
    for (const auto& c : fx::equivalence_suite()) {
        Judgment a = parse_judgment(c.first), b = parse_judgment(c.second);
        OracleConfig cfg;
        cfg.max_size = c.equivalent ? 11 : 15;
        DistinguishResult r = distinguish(a, b, cfg);
        examined += r.examined;
        if (c.equivalent) {
            ++eq;
            if (!r.witness) ++clean;
            else o.detail += " spurious witness for " + c.first + ": " + r.witness->context.to_string() + ";";
            continue;
        }
        ++ineq;
        if (!r.witness) {
            o.detail += " no witness for " + c.first + ";";
            continue;
        }
        // replay with a generous budget
        const ContextTemplate& k = r.witness->context;
        std::uint64_t fuel = std::max<std::uint64_t>(100000, 20 * r.witness->cost);
        Run x = run_closed(k.fill(elaborate(a.ctx, a.term)), fuel, 2);
        Run y = run_closed(k.fill(elaborate(b.ctx, b.term)), fuel, 2);
        if (x.converged != y.converged && x.converged == r.witness->first_converges) ++found;
        else o.detail += " witness does not replay for " + c.first + ";";
    }
    o.ok = found == ineq && clean == eq;
    o.detail = std::to_string(found) + "/" + std::to_string(ineq) + " inequivalent pairs separated within size 15, " +
               std::to_string(clean) + "/" + std::to_string(eq) + " equivalent pairs unseparated within size 11, " +
               std::to_string(examined) + " contexts" + o.detail;
    return o;
}

// ------------------------------------------------------------ 5

std::set<Word> brute(const Nfa& a, const std::vector<Word>& words) {
    std::set<Word> out;
    for (const Word& w : words)
        if (fx::simulate(a, w)) out.insert(w);
    return out;
}

// w in a with the symbols of `kill` read as silent moves
bool member_erased(const Nfa& a, const std::set<int>& kill, const Word& w) {
    Nfa c;
    for (int s = 0; s < a.size(); ++s) c.add_state(a.accepting(s));
    c.set_start(a.start());
    for (int s = 0; s < a.size(); ++s)
        for (const auto& e : a.edges(s)) c.add_edge(s, kill.count(e.sym) ? kEps : e.sym, e.to);
    return fx::simulate(c, w);
}

bool member_subst(const Nfa& a, const std::map<int, Nfa>& rules, const Word& w) {
    std::size_t n = w.size();
    std::vector<std::set<int>> reach(n + 1);
    reach[0].insert(a.start());
    auto piece = [&](int sym, std::size_t i, std::size_t j) {
        auto it = rules.find(sym);
        if (it == rules.end()) return j == i + 1 && w[i] == sym;
        return fx::simulate(it->second, Word(w.begin() + i, w.begin() + j));
    };
    for (std::size_t i = 0; i <= n; ++i) {
        for (bool grew = true; grew;) {
            grew = false;
            for (int q : std::set<int>(reach[i]))
                for (const auto& e : a.edges(q))
                    for (std::size_t j = i; j <= n; ++j)
                        if ((e.sym == kEps ? j == i : piece(e.sym, i, j)) && reach[j].insert(e.to).second && j == i)
                            grew = true;
        }
    }
    for (int q : reach[n])
        if (a.accepting(q)) return true;
    return false;
}

bool member_shuffle(const Nfa& a, const Nfa& b, const Word& w) {
    for (unsigned mask = 0; mask < (1u << w.size()); ++mask) {
        Word u, v;
        for (std::size_t i = 0; i < w.size(); ++i) (mask >> i & 1 ? u : v).push_back(w[i]);
        if (fx::simulate(a, u) && fx::simulate(b, v)) return true;
    }
    return false;
}

Nfa mutate(std::mt19937& rng, Nfa a, const std::vector<int>& al) {
    std::uniform_int_distribution<int> st(0, a.size() - 1), sy(0, (int)al.size() - 1);
    if (rng() % 2) a.add_edge(st(rng), al[sy(rng)], st(rng));
    else {
        int s = st(rng);
        a.set_accept(s, !a.accepting(s));
    }
    return a;
}

Outcome automata() {
    std::mt19937 rng(2024);
    auto al = fx::letters(3);
    auto words8 = fx::all_words(al, 8), words6 = fx::all_words(al, 6);
    int agree = 0, pairs = 0, equal_pairs = 0;
    std::string bad;
    for (int i = 0; i < 1000; ++i) {
        std::vector<int> alpha(al.begin(), al.begin() + 1 + i % 3);
        Nfa a = fx::random_nfa(rng, 5, alpha);
        Nfa b;
        switch (i % 4) {
        case 0: b = fx::random_nfa(rng, 5, alpha); break;
        case 1: b = lang::minimize(a); break;
        case 2: b = mutate(rng, a, alpha); break;
        default: b = lang::unite(a, fx::random_nfa(rng, 2, alpha)); break;
        }
        ++pairs;
        std::set<Word> la = lang::enumerate_up_to(a, 8), lb = lang::enumerate_up_to(b, 8);
        bool same = la == lb;
        bool ok = lang::equivalent(a, b) == same && la == brute(a, words8) && lb == brute(b, words8);
        equal_pairs += same;
        if (ok) ++agree;
        else if (bad.empty()) bad = " first disagreement at pair " + std::to_string(i);
    }
    int ops = 0, ops_ok = 0;
    for (int i = 0; i < 60; ++i) {
        Nfa a = fx::random_nfa(rng, 3, al), b = fx::random_nfa(rng, 3, al);
        Nfa sh = lang::shuffle(a, b);
        std::set<int> kill{al[i % 3]};
        Nfa er = lang::erase(a, kill);
        std::map<int, Nfa> rules{{al[0], fx::random_nfa(rng, 2, al)}, {al[1], b}};
        Nfa su = lang::subst(a, rules);
        bool ok = true;
        for (const Word& w : words6) {
            ok = ok && lang::member(sh, w) == member_shuffle(a, b, w);
            ok = ok && lang::member(er, w) == member_erased(a, kill, w);
            ok = ok && lang::member(su, w) == member_subst(a, rules, w);
        }
        ++ops;
        ops_ok += ok;
        if (!ok && bad.empty()) bad = " operator disagreement at sample " + std::to_string(i);
    }
    Outcome o;
    o.ok = agree == pairs && ops_ok == ops;
    o.detail = std::to_string(agree) + "/" + std::to_string(pairs) + " pairs agree (" + std::to_string(equal_pairs) +
               " equal up to length 8), shuffle/erase/subst exact on " + std::to_string(ops_ok) + "/" +
               std::to_string(ops) + " samples" + bad;
    return o;
}

// ------------------------------------------------------------ 6

std::string answer_of(const SPlay& s) { return s.arena->name(s.moves.back().move); }

Outcome theorems() {
    Outcome o;
    std::size_t plays = 0, derived_ok = 0, composed = 0, composed_ok = 0;
    int triples = 0, assoc_ok = 0;
    std::string bad;
    auto note = [&](const std::string& m) {
        if (bad.empty()) bad = " " + m;
    };
    for (const char* seq : {"f:var->com |- com", "f:var->exp |- exp"}) {
        for (int N = 1; N <= 2; ++N) {
            auto ta = fx::arena(seq, N);
            auto sa = fx::arena(std::string("|- ") + (std::string(seq).find("exp |") != std::string::npos ? "var->exp" : "var->com"), N);
            auto ua = fx::arena(std::string(seq).find("exp |") != std::string::npos ? "x:exp |- exp" : "x:com |- com", N);
            fx::CellCorpus gen(ta, N, 12);
            gen.run();
            for (const SPlay& t : gen.plays) {
                ++plays;
                auto v = validate_splay(t, N);
                auto d = derived_checks(t);
                if (!v && !d) ++derived_ok;
                else note("corpus play fails " + to_string(v ? *v : *d));
                if (!gen.complete(t)) continue;
                SPlay s = fx::opponent_of(t, sa);
                ++composed;
                try {
                    SPlay st = compose(s, t);
                    auto cv = validate_splay(st, N);
                    if (!cv) ++composed_ok;
                    else note("composite invalid: " + to_string(*cv));
                    // every complete play ending in an answer k gives one generated triple
                    if (composed % 7 != 0) continue;
                    ++triples;
                    std::string k = answer_of(t);
                    SPlay u = fx::unary_play(ua, k, k == "*" ? "*" : std::to_string((std::stoi(k) + 1) % (N + 1)));
                    SPlay l = compose(st, u), r = compose(s, compose(t, u));
                    if (same_play(l, r)) ++assoc_ok;
                    else note("associativity fails");
                } catch (const IncompatibleError& e) {
                    note(std::string("compose failed: ") + e.what());
                }
            }
        }
    }
    // the fixed triples
    auto sa = fx::arena("|- var->exp", 3), ta = fx::arena("f:var->exp |- exp", 3), ua = fx::arena("x:exp |- exp", 3);
    for (auto [sf, tf, k] : {std::tuple{"playcomp_s.play", "playcomp_t.play", "2"},
                             {"playcomp_s2.play", "playcomp_t2.play", "3"}})
        for (int out = 0; out <= 3; ++out) {
            ++triples;
            SPlay s = parse_splay(fx::read_data(sf), sa), t = parse_splay(fx::read_data(tf), ta);
            SPlay u = fx::unary_play(ua, k, std::to_string(out));
            try {
                SPlay l = compose(compose(s, t), u), r = compose(s, compose(t, u));
                if (same_play(l, r) && l.size() == 2 && l.arena->name(l.moves[1].move) == std::to_string(out)) ++assoc_ok;
                else note("associativity fails on " + std::string(sf));
            } catch (const IncompatibleError& e) {
                note(std::string("compose failed: ") + e.what());
            }
        }
    o.ok = plays >= 500 && derived_ok == plays && composed_ok == composed && composed > 0 && assoc_ok == triples;
    o.detail = std::to_string(derived_ok) + "/" + std::to_string(plays) + " corpus plays pass derived checks, " +
               std::to_string(composed_ok) + "/" + std::to_string(composed) + " composites valid, associativity on " +
               std::to_string(assoc_ok) + "/" + std::to_string(triples) + " triples" + bad;
    return o;
}

// ------------------------------------------------------------ 7

Outcome conservativity() {
    fx::ProgramGen gen(77, 2);
    const std::uint64_t fuel = 100000;
    int programs = 0, agree = 0, rechecked = 0, converging = 0;
    std::string bad;
    for (int i = 0; i < 240; ++i) {
        bool is_exp = i % 2;
        gen.hole_type = is_exp ? Type::exp() : Type::com();
        std::vector<std::string> env;
        TermP c = i % 3 ? gen.com(env, 4, true) : gen.exp(env, 4, true);
        std::vector<std::string> xs{"x"};
        TermP m = is_exp ? gen.exp(xs, 3) : gen.com(xs, 3);
        TermP with_new = substitute_closed(c, "[-]", mk::new_("x", m));
        TermP with_ref = substitute_closed(c, "[-]", mk::let("x", Type::var(), mk::ref(), m));
        ++programs;
        auto run = [](const TermP& p, std::uint64_t f) { return eval({}, p, f, 2); };
        EvalResult a = run(with_new, fuel), b = run(with_ref, fuel);
        if (a.converged != b.converged) {
            ++rechecked;
            a = run(with_new, 10 * fuel);
            b = run(with_ref, 10 * fuel);
        }
        bool same = a.converged == b.converged && (!a.converged || to_string(a.value) == to_string(b.value));
        converging += a.converged;
        if (same) ++agree;
        else if (bad.empty()) bad = " first disagreement: " + to_string(with_new);
    }
    Outcome o;
    o.ok = programs >= 200 && agree == programs;
    o.detail = std::to_string(agree) + "/" + std::to_string(programs) + " programs agree (" + std::to_string(converging) +
               " converge, " + std::to_string(rechecked) + " rechecked at 10x fuel)" + bad;
    return o;
}

}

int main() {
    std::vector<Criterion> criteria = {
        {1, "composition fixtures", 1, playcomp},
        {2, "introduction plays", 10, intro_plays},
        {3, "equivalence suite", 60, suite},
        {4, "oracle consistency", 300, oracle},
        {5, "automata engine", 60, automata},
        {6, "S-play theorem suite", 120, theorems},
        {7, "interpreter conservativity", 120, conservativity},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = secs <= c.budget_s;
        bool pass = o.ok && in_time;
        failed += !pass;
        char t[64];
        std::snprintf(t, sizeof t, "%.2fs of %.0fs", secs, c.budget_s);
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << o.detail << " ["
                  << t << (in_time ? "" : ", over budget") << "]" << std::endl;
    }
    return failed ? 1 : 0;
}
