#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ia {

enum class Mark { None, Circle, Bullet };

/// Alphabet letter: a move name plus an optional pointer mark.
struct Symbol {
    std::string move;
    Mark mark = Mark::None;
    auto operator<=>(const Symbol&) const = default;
};

/// Symbols are interned process-wide so automata built anywhere share ids.
int intern(const Symbol& s);
int intern(const std::string& move, Mark mark = Mark::None);
const Symbol& symbol(int id);
std::string symbol_name(int id);
/// Parses the printed form (`move`, `move^o`, `move^b`).
int parse_symbol(const std::string& text);

using Word = std::vector<int>;
std::string word_to_string(const Word& w);

constexpr int kEps = -1;

class Nfa {
public:
    struct Edge {
        int sym;
        int to;
    };

    int add_state(bool accepting = false);
    void add_edge(int from, int sym, int to);
    void set_accept(int s, bool on = true) { accept_[s] = on; }
    void set_start(int s) { start_ = s; }
    void add_symbol(int sym) { alphabet_.insert(sym); }

    int size() const { return (int)edges_.size(); }
    int start() const { return start_; }
    bool accepting(int s) const { return accept_[s]; }
    const std::vector<Edge>& edges(int s) const { return edges_[s]; }
    const std::set<int>& alphabet() const { return alphabet_; }
    std::size_t num_edges() const;

private:
    std::vector<std::vector<Edge>> edges_;
    std::vector<bool> accept_;
    std::set<int> alphabet_;
    int start_ = 0;
};

namespace lang {

Nfa empty();
Nfa epsilon();
Nfa lit(const Word& w);
Nfa sym(int s);
/// Sum of single letters.
Nfa any_of(const std::set<int>& syms);

Nfa unite(const Nfa& a, const Nfa& b);
Nfa unite(const std::vector<Nfa>& parts);
Nfa concat(const Nfa& a, const Nfa& b);
Nfa concat(const std::vector<Nfa>& parts);
Nfa star(const Nfa& a);
Nfa intersect(const Nfa& a, const Nfa& b);
Nfa complement(const Nfa& a, const std::set<int>& alphabet);
Nfa shuffle(const Nfa& a, const Nfa& b);
Nfa rename(const Nfa& a, const std::map<int, int>& f);
Nfa erase(const Nfa& a, const std::set<int>& kill);
Nfa subst(const Nfa& a, const std::map<int, Nfa>& rules);
/// Words w such that w·s is accepted.
Nfa right_quotient(const Nfa& a, int s);

Nfa remove_eps(const Nfa& a);
Nfa trim(const Nfa& a);
Nfa determinize(const Nfa& a);
Nfa minimize(const Nfa& a);
/// remove_eps + trim, cheap enough to run after every construction.
Nfa tidy(const Nfa& a);

bool member(const Nfa& a, const Word& w);
bool is_empty(const Nfa& a);
bool is_deterministic(const Nfa& a);
/// Shortest word in the symmetric difference, or nullopt when the languages agree.
std::optional<Word> difference_witness(const Nfa& a, const Nfa& b);
bool equivalent(const Nfa& a, const Nfa& b);
std::set<Word> enumerate_up_to(const Nfa& a, int k);
/// Symbols occurring on live transitions.
std::set<int> used_symbols(const Nfa& a);

std::string to_text(const Nfa& a);
Nfa from_text(const std::string& text);
std::string to_dot(const Nfa& a, const std::string& name = "nfa");

}

}
