#pragma once

#include "ia/syntax.hpp"

namespace ia {

struct CanonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grammar membership for canonical forms. Free identifiers are typed by `ctx`.
bool is_canonical(const Context& ctx, const TermP& t);
/// Same, treating free identifiers as base-typed.
bool is_canonical(const TermP& t);

/// Converts a well-typed IAloop term to canonical form with the same type and meaning.
/// Throws CanonError on fix, ref or locations.
TermP canonicalize(const Context& ctx, const TermP& t);

}
