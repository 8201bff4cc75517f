#pragma once

#include "ia/games.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ia {

using Name = int;
using Store = std::vector<std::pair<Name, std::int64_t>>;

namespace store {
std::vector<Name> dom(const Store& s);
bool has(const Store& s, Name a);
std::int64_t at(const Store& s, Name a);
Store restrict(const Store& s, const Store& t);  ///< s \ t
Store update(const Store& s, const Store& t);    ///< s[t]
/// s[u]: each name takes its value at its last occurrence in the store sequence `u`.
Store update_from_seq(const Store& s, const std::vector<const Store*>& u);
std::optional<Store> append(const Store& s, const Store& t);
enum class Rel { Subseq, Prefix, Suffix };
bool rel(const Store& s, const Store& t, Rel kind);
/// s0[s2] \ (s1 \ s2) + (s2 \ s1); throws std::logic_error if the final append is undefined.
Store nice(const Store& s0, const Store& s1, const Store& s2);
std::string to_string(const Store& s);
}

struct SMove {
    int move;       ///< index into the prearena
    Store store;
    int just = -1;  ///< index of the justifier, -1 for the initial move
    bool operator==(const SMove&) const = default;
};

struct SPlay {
    std::shared_ptr<const Prearena> arena;
    std::vector<SMove> moves;

    std::size_t size() const { return moves.size(); }
    Label label(std::size_t i) const { return arena->label(moves[i].move); }
    bool is_p(std::size_t i) const { return label(i).player == Player::P; }
    bool is_q(std::size_t i) const { return label(i).kind == Kind::Q; }
    SPlay prefix(std::size_t n) const;
};

bool same_play(const SPlay& a, const SPlay& b);

/// Indices of the P-view / O-view of the prefix ending at `upto` (inclusive).
std::vector<int> pview_indices(const SPlay& s, int upto);
std::vector<int> oview_indices(const SPlay& s, int upto);
/// The views as S-sequences with justifiers re-anchored (dangling ones become -1).
SPlay pview(const SPlay& s);
SPlay oview(const SPlay& s);

struct Violation {
    std::string condition;
    int position;  ///< 0-based index of the offending move
    std::string detail;
};

std::string to_string(const Violation& v);

/// Justified-sequence and play conditions on the erasure.
std::optional<Violation> check_play(const SPlay& s);
/// Play conditions followed by Init, Just-P, Just-O, Prev-PQ, Val-O. `N` >= 0 bounds store values.
std::optional<Violation> validate_splay(const SPlay& s, int N = -1);
/// Checks only conditions involving the last move, assuming the prefix was valid.
std::optional<Violation> validate_last(const SPlay& s, int N = -1);
/// Prev-PA, Block form (on every prefix) and Close.
std::optional<Violation> derived_checks(const SPlay& s);

/// Two P-moves after S-views that agree up to renaming must agree as well.
std::optional<Violation> check_innocent(const SPlay& s);

bool is_closed_in(const SPlay& s, int upto, Name a);
bool is_complete(const SPlay& s);
/// Each spine question after the first comes right after the previous spine answer.
bool is_spinal(const SPlay& s, const std::vector<int>& spine);

/// Calls `f` on every store decoration of `erasure` that is a valid S-play, with at most
/// `max_names` names (canonical by first introduction) and values in 0..N.
/// Returns the number of decorations visited.
std::size_t for_each_decoration(const SPlay& erasure, int max_names, int N, const std::function<void(const SPlay&)>& f);

/// Renames names in order of first introduction, starting from `base`.
SPlay canonical_names(const SPlay& s, Name base = 0);
std::vector<Name> names_of(const SPlay& s);

struct InteractionMove {
    enum Origin { A, B, C } origin;
    int s_index = -1, t_index = -1;
    Store store;
    int just = -1;
};

struct Interaction {
    std::vector<InteractionMove> moves;
};

struct IncompatibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Interaction interact(const SPlay& s, const SPlay& t);
/// (s || t) restricted to A and C, over prearena(s.left, t.right).
SPlay compose(const SPlay& s, const SPlay& t);
SPlay compose(const SPlay& s, const SPlay& t, std::shared_ptr<const Prearena> ac);

/// Line format: `<idx> <move> j=<idx>|init {a=v,...}`; names are arbitrary tokens.
SPlay parse_splay(const std::string& text, std::shared_ptr<const Prearena> arena);
std::string to_text(const SPlay& s);

}
