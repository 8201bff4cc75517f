#pragma once

#include "ia/syntax.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace ia {

/// A closed term of type com with one occurrence of the hole `[-]`. When the hole
/// context is non-empty the hole sits directly under `fn x1 => ... fn xn => [-]`.
struct ContextTemplate {
    TermP term;
    Context hole_ctx;
    TypeP hole_ty;
    std::size_t size = 0;  ///< AST nodes; the hole with its binders counts as one

    TermP fill(const TermP& m) const;
    std::string to_string() const;
};

struct OracleConfig {
    int max_size = 15;
    std::uint64_t fuel = 10000;
    int N = 2;
    Fragment fragment = Fragment::IAloop;
};

/// Calls `f` on every template up to `max_size` in size order; stops early when `f`
/// returns false. Returns the number of templates visited.
std::size_t enumerate_contexts(const Context& hole_ctx, const TypeP& hole_ty, const OracleConfig& cfg,
                               const std::function<bool(const ContextTemplate&)>& f);

struct Distinction {
    ContextTemplate context;
    bool first_converges = false;
    std::uint64_t cost = 0;  ///< fuel used by the converging side
};

struct DistinguishResult {
    std::optional<Distinction> witness;
    std::size_t examined = 0;
};

/// Outcome of running one filled template: converged (with cost) or out of fuel.
struct Run {
    bool converged = false;
    std::uint64_t used = 0;
};
Run run_closed(const TermP& program, std::uint64_t fuel, int N);

/// Decides one template. A side counts as divergent only if it exhausts at least
/// ten times the fuel the other side needed to converge.
std::optional<Distinction> try_context(const ContextTemplate& c, const TermP& m1, const TermP& m2,
                                       const OracleConfig& cfg);

/// First template in enumeration order that separates the two terms.
DistinguishResult distinguish(const Judgment& m1, const Judgment& m2, const OracleConfig& cfg);

}
