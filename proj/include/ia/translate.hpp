#pragma once

#include "ia/lang.hpp"
#include "ia/syntax.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ia {

struct TranslateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One initial move of the judgment's prearena and the plays that follow it.
struct Component {
    std::vector<int> values;  ///< per context entry: the integer for exp, -1 otherwise
    std::string initial;      ///< printed initial move
    Nfa lang;
};

struct ComponentLang {
    Context ctx;
    TermP term;
    TypeP type;
    int N = 2;
    std::vector<Component> components;
};

/// Words are spinal complete plays without their initial move; context moves are
/// `x.<move>`, result moves use the arena names of the type.
ComponentLang translate(const Context& ctx, const TermP& canonical, const TypeP& ty, int N);

/// Reads return the last value written (initially 0), interleaved freely with `ambient`.
Nfa cell_discipline(const std::string& x, int N, const std::set<int>& ambient);

/// For a base result type: (component index, final answer) -> plays with that answer stripped.
std::map<std::pair<int, std::string>, Nfa> split_components(const ComponentLang& l);

struct EquivResult {
    bool equivalent = true;
    int component = -1;         ///< index of the initial move with a difference
    std::string initial;        ///< its printed name
    Word witness;               ///< shortest word accepted by exactly one side
    bool witness_in_first = false;
    std::string witness_text() const;
};

/// Both judgments must share context and type verbatim and lie in IA2+.
EquivResult decide_equiv(const Judgment& a, const Judgment& b, int N);

}
