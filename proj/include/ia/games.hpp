#pragma once

#include "ia/syntax.hpp"

#include <string>
#include <vector>

namespace ia {

enum class Player { O, P };
enum class Kind { Q, A };

struct Label {
    Player player;
    Kind kind;
    bool operator==(const Label&) const = default;
};

std::string to_string(Label l);

/// Moves are numbered so that the initial ones come first.
struct Arena {
    std::vector<std::string> names;
    std::vector<Label> labels;
    int num_initial = 0;
    std::vector<std::vector<int>> enables;  ///< m |- m'

    int size() const { return (int)names.size(); }
    bool is_initial(int m) const { return m < num_initial; }
    int find(const std::string& name) const;
    int add(std::string name, Label l);
    void enable(int m, int n);
    bool enabled_by(int m, int n) const;  ///< m |- n
};

Arena unit_arena();
Arena int_arena(int N);
Arena arrow(const Arena& a, const Arena& b);
Arena tensor(const Arena& a, const Arena& b);
/// n-ary tensor; non-initial moves get `prefix.` and initial tuples print as (p1,...,pn).
Arena tensor(const std::vector<std::pair<std::string, Arena>>& parts);
Arena denote_type(const TypeP& ty, int N);

enum class Side { Left, Right };

/// A -> B. Left moves are numbered first.
struct Prearena {
    Arena left, right;
    Arena game;  ///< the combined move graph with prearena labels
    std::vector<Side> side;
    std::vector<int> local;

    int size() const { return game.size(); }
    const std::string& name(int m) const { return game.names[m]; }
    Label label(int m) const { return game.labels[m]; }
    bool is_initial(int m) const { return side[m] == Side::Left && left.is_initial(local[m]); }
    bool enabled_by(int m, int n) const { return game.enabled_by(m, n); }
    int of(Side s, int local_index) const { return s == Side::Left ? local_index : left.size() + local_index; }
    /// All moves printed as `name`; also accepts `L:name` and `R:name`.
    std::vector<int> lookup(const std::string& name) const;
};

Prearena prearena(const Arena& a, const Arena& b);
Prearena prearena_of_judgment(const Context& ctx, const TypeP& ty, int N);

std::string to_dot(const Arena& a, const std::string& title = "arena");
std::string to_dot(const Prearena& p, const std::string& title = "prearena");

}
