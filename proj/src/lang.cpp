#include "ia/lang.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ia {

namespace {
struct SymbolTable {
    std::mutex mu;
    std::map<Symbol, int> ids;
    std::deque<Symbol> syms;
};
SymbolTable& table() {
    static SymbolTable t;
    return t;
}
}

int intern(const Symbol& s) {
    SymbolTable& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.ids.find(s);
    if (it != t.ids.end()) return it->second;
    int id = (int)t.syms.size();
    t.syms.push_back(s);
    t.ids.emplace(s, id);
    return id;
}

int intern(const std::string& move, Mark mark) { return intern(Symbol{move, mark}); }

const Symbol& symbol(int id) {
    SymbolTable& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    return t.syms.at(id);
}

std::string symbol_name(int id) {
    if (id == kEps) return "eps";
    const Symbol& s = symbol(id);
    switch (s.mark) {
    case Mark::None: return s.move;
    case Mark::Circle: return s.move + "^o";
    case Mark::Bullet: return s.move + "^b";
    }
    return s.move;
}

int parse_symbol(const std::string& text) {
    if (text.size() > 2 && text[text.size() - 2] == '^') {
        char m = text.back();
        std::string base = text.substr(0, text.size() - 2);
        if (m == 'o') return intern(base, Mark::Circle);
        if (m == 'b') return intern(base, Mark::Bullet);
    }
    return intern(text, Mark::None);
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += symbol_name(w[i]);
    }
    return s;
}

int Nfa::add_state(bool accepting) {
    edges_.emplace_back();
    accept_.push_back(accepting);
    return (int)edges_.size() - 1;
}

void Nfa::add_edge(int from, int sym, int to) {
    edges_[from].push_back({sym, to});
    if (sym != kEps) alphabet_.insert(sym);
}

std::size_t Nfa::num_edges() const {
    std::size_t n = 0;
    for (auto& e : edges_) n += e.size();
    return n;
}

namespace lang {

namespace {

using StateSet = std::vector<int>;

/// Copies `b` into `a`, returning the offset of b's states.
int embed(Nfa& a, const Nfa& b) {
    int off = a.size();
    for (int s = 0; s < b.size(); ++s) a.add_state(b.accepting(s));
    for (int s = 0; s < b.size(); ++s)
        for (auto& e : b.edges(s)) a.add_edge(s + off, e.sym, e.to + off);
    for (int x : b.alphabet()) a.add_symbol(x);
    return off;
}

void close(const Nfa& a, StateSet& set) {
    std::vector<int> stack(set.begin(), set.end());
    std::vector<char> seen(a.size(), 0);
    for (int s : set) seen[s] = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (auto& e : a.edges(s))
            if (e.sym == kEps && !seen[e.to]) {
                seen[e.to] = 1;
                set.push_back(e.to);
                stack.push_back(e.to);
            }
    }
    std::sort(set.begin(), set.end());
}

StateSet step(const Nfa& a, const StateSet& from, int sym) {
    StateSet out;
    for (int s : from)
        for (auto& e : a.edges(s))
            if (e.sym == sym) out.push_back(e.to);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    close(a, out);
    return out;
}

bool any_accepting(const Nfa& a, const StateSet& s) {
    for (int x : s)
        if (a.accepting(x)) return true;
    return false;
}

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) h = h * 1000003u ^ (std::size_t)x;
        return h;
    }
};

}

Nfa empty() {
    Nfa n;
    n.add_state(false);
    return n;
}

Nfa epsilon() {
    Nfa n;
    n.add_state(true);
    return n;
}

Nfa lit(const Word& w) {
    Nfa n;
    int cur = n.add_state(w.empty());
    for (std::size_t i = 0; i < w.size(); ++i) {
        int nx = n.add_state(i + 1 == w.size());
        n.add_edge(cur, w[i], nx);
        cur = nx;
    }
    return n;
}

Nfa sym(int s) { return lit({s}); }

Nfa any_of(const std::set<int>& syms) {
    Nfa n;
    n.add_state(false);
    int f = n.add_state(true);
    for (int s : syms) n.add_edge(0, s, f);
    return n;
}

Nfa unite(const Nfa& a, const Nfa& b) {
    Nfa n;
    int s = n.add_state(false);
    int oa = embed(n, a), ob = embed(n, b);
    n.add_edge(s, kEps, a.start() + oa);
    n.add_edge(s, kEps, b.start() + ob);
    return n;
}

Nfa unite(const std::vector<Nfa>& parts) {
    Nfa n;
    int s = n.add_state(false);
    for (auto& p : parts) {
        int o = embed(n, p);
        n.add_edge(s, kEps, p.start() + o);
    }
    return n;
}

Nfa concat(const Nfa& a, const Nfa& b) {
    Nfa n;
    int oa = embed(n, a);
    int ob = embed(n, b);
    n.set_start(a.start() + oa);
    for (int s = 0; s < a.size(); ++s)
        if (a.accepting(s)) {
            n.set_accept(s + oa, false);
            n.add_edge(s + oa, kEps, b.start() + ob);
        }
    return n;
}

Nfa concat(const std::vector<Nfa>& parts) {
    if (parts.empty()) return epsilon();
    Nfa n = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) n = concat(n, parts[i]);
    return n;
}

Nfa star(const Nfa& a) {
    Nfa n;
    int s = n.add_state(true);
    int o = embed(n, a);
    n.add_edge(s, kEps, a.start() + o);
    for (int x = 0; x < a.size(); ++x)
        if (a.accepting(x)) n.add_edge(x + o, kEps, s);
    return n;
}

Nfa intersect(const Nfa& a0, const Nfa& b0) {
    Nfa a = remove_eps(a0), b = remove_eps(b0);
    Nfa n;
    std::unordered_map<long long, int> id;
    std::vector<std::pair<int, int>> work;
    auto get = [&](int p, int q) {
        long long key = (long long)p * b.size() + q;
        auto it = id.find(key);
        if (it != id.end()) return it->second;
        int s = n.add_state(a.accepting(p) && b.accepting(q));
        id.emplace(key, s);
        work.emplace_back(p, q);
        return s;
    };
    n.set_start(get(a.start(), b.start()));
    std::unordered_map<int, std::vector<int>> by_sym;
    while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        int from = id[(long long)p * b.size() + q];
        by_sym.clear();
        for (auto& e : b.edges(q)) by_sym[e.sym].push_back(e.to);
        for (auto& e : a.edges(p)) {
            auto it = by_sym.find(e.sym);
            if (it == by_sym.end()) continue;
            for (int q2 : it->second) {
                int to = get(e.to, q2);
                n.add_edge(from, e.sym, to);
            }
        }
    }
    for (int x : a.alphabet()) n.add_symbol(x);
    for (int x : b.alphabet()) n.add_symbol(x);
    return trim(n);
}

Nfa complement(const Nfa& a, const std::set<int>& alphabet) {
    for (int x : used_symbols(a))
        if (!alphabet.count(x)) throw std::invalid_argument("complement: alphabet does not cover the automaton");
    Nfa d = determinize(a);
    Nfa n;
    for (int s = 0; s < d.size(); ++s) n.add_state(!d.accepting(s));
    int sink = n.add_state(true);
    n.set_start(d.start());
    for (int s = 0; s < d.size(); ++s) {
        std::set<int> seen;
        for (auto& e : d.edges(s)) {
            n.add_edge(s, e.sym, e.to);
            seen.insert(e.sym);
        }
        for (int x : alphabet)
            if (!seen.count(x)) n.add_edge(s, x, sink);
    }
    for (int x : alphabet) {
        n.add_edge(sink, x, sink);
        n.add_symbol(x);
    }
    return n;
}

Nfa shuffle(const Nfa& a0, const Nfa& b0) {
    Nfa a = remove_eps(a0), b = remove_eps(b0);
    Nfa n;
    std::unordered_map<long long, int> id;
    std::vector<std::pair<int, int>> work;
    auto get = [&](int p, int q) {
        long long key = (long long)p * b.size() + q;
        auto it = id.find(key);
        if (it != id.end()) return it->second;
        int s = n.add_state(a.accepting(p) && b.accepting(q));
        id.emplace(key, s);
        work.emplace_back(p, q);
        return s;
    };
    n.set_start(get(a.start(), b.start()));
    while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        int from = id[(long long)p * b.size() + q];
        for (auto& e : a.edges(p)) n.add_edge(from, e.sym, get(e.to, q));
        for (auto& e : b.edges(q)) n.add_edge(from, e.sym, get(p, e.to));
    }
    for (int x : a.alphabet()) n.add_symbol(x);
    for (int x : b.alphabet()) n.add_symbol(x);
    return trim(n);
}

Nfa rename(const Nfa& a, const std::map<int, int>& f) {
    std::map<int, int> inverse;
    for (int x : used_symbols(a)) {
        auto it = f.find(x);
        int y = it == f.end() ? x : it->second;
        auto [pos, fresh] = inverse.emplace(y, x);
        if (!fresh && pos->second != x)
            throw std::invalid_argument("rename: not injective on " + symbol_name(x) + " and " + symbol_name(pos->second));
    }
    Nfa n;
    for (int s = 0; s < a.size(); ++s) n.add_state(a.accepting(s));
    n.set_start(a.start());
    for (int s = 0; s < a.size(); ++s)
        for (auto& e : a.edges(s)) {
            int y = e.sym;
            if (y != kEps) {
                auto it = f.find(y);
                if (it != f.end()) y = it->second;
            }
            n.add_edge(s, y, e.to);
        }
    return n;
}

Nfa erase(const Nfa& a, const std::set<int>& kill) {
    Nfa n;
    for (int s = 0; s < a.size(); ++s) n.add_state(a.accepting(s));
    n.set_start(a.start());
    for (int s = 0; s < a.size(); ++s)
        for (auto& e : a.edges(s)) n.add_edge(s, kill.count(e.sym) ? kEps : e.sym, e.to);
    return n;
}

Nfa subst(const Nfa& a, const std::map<int, Nfa>& rules) {
    Nfa n;
    for (int s = 0; s < a.size(); ++s) n.add_state(a.accepting(s));
    n.set_start(a.start());
    std::map<int, Nfa> tidied;
    for (auto& [k, v] : rules) tidied.emplace(k, tidy(v));
    for (int s = 0; s < a.size(); ++s)
        for (auto& e : a.edges(s)) {
            auto it = tidied.find(e.sym);
            if (e.sym == kEps || it == tidied.end()) {
                n.add_edge(s, e.sym, e.to);
                continue;
            }
            const Nfa& r = it->second;
            int o = embed(n, r);
            n.add_edge(s, kEps, r.start() + o);
            for (int x = 0; x < r.size(); ++x)
                if (r.accepting(x)) {
                    n.set_accept(x + o, false);
                    n.add_edge(x + o, kEps, e.to);
                }
        }
    return n;
}

Nfa right_quotient(const Nfa& a0, int s) {
    Nfa a = remove_eps(a0);
    Nfa n;
    for (int x = 0; x < a.size(); ++x) n.add_state(false);
    n.set_start(a.start());
    for (int x = 0; x < a.size(); ++x) {
        for (auto& e : a.edges(x)) {
            n.add_edge(x, e.sym, e.to);
            if (e.sym == s && a.accepting(e.to)) n.set_accept(x);
        }
    }
    return trim(n);
}

Nfa remove_eps(const Nfa& a) {
    bool has_eps = false;
    for (int s = 0; s < a.size() && !has_eps; ++s)
        for (auto& e : a.edges(s))
            if (e.sym == kEps) {
                has_eps = true;
                break;
            }
    if (!has_eps) return a;
    Nfa n;
    for (int s = 0; s < a.size(); ++s) n.add_state(false);
    n.set_start(a.start());
    for (int s = 0; s < a.size(); ++s) {
        StateSet c{s};
        close(a, c);
        std::set<std::pair<int, int>> added;
        for (int q : c) {
            if (a.accepting(q)) n.set_accept(s);
            for (auto& e : a.edges(q))
                if (e.sym != kEps && added.emplace(e.sym, e.to).second) n.add_edge(s, e.sym, e.to);
        }
    }
    for (int x : a.alphabet()) n.add_symbol(x);
    return trim(n);
}

Nfa trim(const Nfa& a) {
    int n0 = a.size();
    std::vector<char> fwd(n0, 0), bwd(n0, 0);
    std::vector<int> stack{a.start()};
    fwd[a.start()] = 1;
    std::vector<std::vector<int>> rev(n0);
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (auto& e : a.edges(s)) {
            rev[e.to].push_back(s);
            if (!fwd[e.to]) {
                fwd[e.to] = 1;
                stack.push_back(e.to);
            }
        }
    }
    for (int s = 0; s < n0; ++s)
        if (fwd[s] && a.accepting(s)) {
            bwd[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (int p : rev[s])
            if (!bwd[p]) {
                bwd[p] = 1;
                stack.push_back(p);
            }
    }
    std::vector<int> id(n0, -1);
    Nfa n;
    id[a.start()] = n.add_state(a.accepting(a.start()) && bwd[a.start()]);
    n.set_start(0);
    for (int s = 0; s < n0; ++s)
        if (fwd[s] && bwd[s] && id[s] < 0) id[s] = n.add_state(a.accepting(s));
    for (int s = 0; s < n0; ++s) {
        if (id[s] < 0 || !bwd[s]) continue;
        std::set<std::pair<int, int>> seen;
        for (auto& e : a.edges(s))
            if (id[e.to] >= 0 && bwd[e.to] && seen.emplace(e.sym, e.to).second) n.add_edge(id[s], e.sym, id[e.to]);
    }
    for (int x : a.alphabet()) n.add_symbol(x);
    return n;
}

Nfa tidy(const Nfa& a) { return trim(remove_eps(a)); }

Nfa determinize(const Nfa& a) {
    Nfa n;
    std::unordered_map<StateSet, int, VecHash> id;
    std::vector<StateSet> sets;
    StateSet s0{a.start()};
    close(a, s0);
    id.emplace(s0, n.add_state(any_accepting(a, s0)));
    sets.push_back(s0);
    n.set_start(0);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::map<int, StateSet> succ;
        for (int s : sets[i])
            for (auto& e : a.edges(s))
                if (e.sym != kEps) succ[e.sym].push_back(e.to);
        for (auto& [x, raw] : succ) {
            StateSet t = raw;
            std::sort(t.begin(), t.end());
            t.erase(std::unique(t.begin(), t.end()), t.end());
            close(a, t);
            auto it = id.find(t);
            int to;
            if (it == id.end()) {
                to = n.add_state(any_accepting(a, t));
                id.emplace(t, to);
                sets.push_back(t);
            } else {
                to = it->second;
            }
            n.add_edge((int)i, x, to);
        }
    }
    for (int x : a.alphabet()) n.add_symbol(x);
    return n;
}

Nfa minimize(const Nfa& a) {
    Nfa d = trim(determinize(a));
    int n0 = d.size();
    std::vector<int> syms(d.alphabet().begin(), d.alphabet().end());
    std::unordered_map<int, int> sym_index;
    for (std::size_t i = 0; i < syms.size(); ++i) sym_index[syms[i]] = (int)i;
    std::vector<std::vector<int>> delta(n0, std::vector<int>(syms.size(), -1));
    for (int s = 0; s < n0; ++s)
        for (auto& e : d.edges(s)) delta[s][sym_index[e.sym]] = e.to;
    std::vector<int> cls(n0);
    for (int s = 0; s < n0; ++s) cls[s] = d.accepting(s) ? 1 : 0;
    int count = 0;
    for (;;) {
        std::map<std::vector<int>, int> sig;
        std::vector<int> next(n0);
        for (int s = 0; s < n0; ++s) {
            std::vector<int> key;
            key.reserve(syms.size() + 1);
            key.push_back(cls[s]);
            for (int t : delta[s]) key.push_back(t < 0 ? -1 : cls[t]);
            auto it = sig.emplace(key, (int)sig.size()).first;
            next[s] = it->second;
        }
        int c = (int)sig.size();
        cls.swap(next);
        if (c == count) break;
        count = c;
    }
    Nfa m;
    for (int c = 0; c < count; ++c) m.add_state(false);
    std::vector<char> done(count, 0);
    for (int s = 0; s < n0; ++s) {
        if (d.accepting(s)) m.set_accept(cls[s]);
        if (done[cls[s]]) continue;
        done[cls[s]] = 1;
        for (std::size_t i = 0; i < syms.size(); ++i)
            if (delta[s][i] >= 0) m.add_edge(cls[s], syms[i], cls[delta[s][i]]);
    }
    m.set_start(cls[d.start()]);
    for (int x : d.alphabet()) m.add_symbol(x);
    return trim(m);
}

bool member(const Nfa& a, const Word& w) {
    StateSet cur{a.start()};
    close(a, cur);
    for (int x : w) {
        cur = step(a, cur, x);
        if (cur.empty()) return false;
    }
    return any_accepting(a, cur);
}

bool is_empty(const Nfa& a) {
    Nfa t = trim(a);
    for (int s = 0; s < t.size(); ++s)
        if (t.accepting(s)) return false;
    return true;
}

bool is_deterministic(const Nfa& a) {
    for (int s = 0; s < a.size(); ++s) {
        std::set<int> seen;
        for (auto& e : a.edges(s))
            if (e.sym == kEps || !seen.insert(e.sym).second) return false;
    }
    return true;
}

std::optional<Word> difference_witness(const Nfa& a, const Nfa& b) {
    struct Node {
        StateSet x, y;
        int parent;
        int sym;
    };
    std::vector<Node> nodes;
    std::map<std::pair<StateSet, StateSet>, int> seen;
    StateSet x0{a.start()}, y0{b.start()};
    close(a, x0);
    close(b, y0);
    nodes.push_back({x0, y0, -1, kEps});
    seen.emplace(std::make_pair(x0, y0), 0);
    std::set<int> alpha = used_symbols(a);
    for (int s : used_symbols(b)) alpha.insert(s);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (any_accepting(a, nodes[i].x) != any_accepting(b, nodes[i].y)) {
            Word w;
            for (int k = (int)i; nodes[k].parent >= 0; k = nodes[k].parent) w.push_back(nodes[k].sym);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (int s : alpha) {
            StateSet x = step(a, nodes[i].x, s), y = step(b, nodes[i].y, s);
            if (x.empty() && y.empty()) continue;
            auto key = std::make_pair(x, y);
            if (seen.count(key)) continue;
            seen.emplace(key, (int)nodes.size());
            nodes.push_back({std::move(x), std::move(y), (int)i, s});
        }
    }
    return std::nullopt;
}

bool equivalent(const Nfa& a, const Nfa& b) { return !difference_witness(a, b).has_value(); }

std::set<Word> enumerate_up_to(const Nfa& a, int k) {
    std::set<Word> out;
    std::vector<int> alpha;
    for (int s : used_symbols(a)) alpha.push_back(s);
    Word w;
    std::function<void(const StateSet&)> go = [&](const StateSet& cur) {
        if (any_accepting(a, cur)) out.insert(w);
        if ((int)w.size() == k) return;
        for (int s : alpha) {
            StateSet nx = step(a, cur, s);
            if (nx.empty()) continue;
            w.push_back(s);
            go(nx);
            w.pop_back();
        }
    };
    StateSet s0{a.start()};
    close(a, s0);
    go(s0);
    return out;
}

std::set<int> used_symbols(const Nfa& a) {
    std::set<int> out;
    for (int s = 0; s < a.size(); ++s)
        for (auto& e : a.edges(s))
            if (e.sym != kEps) out.insert(e.sym);
    return out;
}

std::string to_text(const Nfa& a) {
    std::ostringstream os;
    os << "states " << a.size() << "\n";
    os << "start " << a.start() << "\n";
    os << "accept";
    for (int s = 0; s < a.size(); ++s)
        if (a.accepting(s)) os << " " << s;
    os << "\n";
    for (int s = 0; s < a.size(); ++s)
        for (auto& e : a.edges(s)) os << "trans " << s << " " << symbol_name(e.sym) << " " << e.to << "\n";
    return os.str();
}

Nfa from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    Nfa n;
    int start = 0;
    std::vector<int> acc;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "states") {
            int k;
            ls >> k;
            for (int i = 0; i < k; ++i) n.add_state(false);
        } else if (kw == "start") {
            ls >> start;
        } else if (kw == "accept") {
            int s;
            while (ls >> s) acc.push_back(s);
        } else if (kw == "trans") {
            int p, q;
            std::string sym;
            if (!(ls >> p >> sym >> q)) throw std::invalid_argument("bad trans line: " + line);
            if (p < 0 || q < 0 || p >= n.size() || q >= n.size()) throw std::invalid_argument("state out of range: " + line);
            n.add_edge(p, sym == "eps" ? kEps : parse_symbol(sym), q);
        } else {
            throw std::invalid_argument("unknown automaton directive: " + kw);
        }
    }
    if (n.size() == 0) throw std::invalid_argument("automaton without states");
    for (int s : acc) {
        if (s < 0 || s >= n.size()) throw std::invalid_argument("accepting state out of range");
        n.set_accept(s);
    }
    n.set_start(start);
    return n;
}

std::string to_dot(const Nfa& a, const std::string& name) {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n  rankdir=LR;\n  init [shape=point];\n";
    for (int s = 0; s < a.size(); ++s)
        os << "  s" << s << " [shape=" << (a.accepting(s) ? "doublecircle" : "circle") << ", label=\"" << s << "\"];\n";
    os << "  init -> s" << a.start() << ";\n";
    for (int s = 0; s < a.size(); ++s)
        for (auto& e : a.edges(s))
            os << "  s" << s << " -> s" << e.to << " [label=\"" << symbol_name(e.sym) << "\"];\n";
    os << "}\n";
    return os.str();
}

}

}
