#pragma once

#include "ia/syntax.hpp"

#include <cstdint>
#include <map>

namespace ia {

using Heap = std::map<std::int64_t, std::int64_t>;

struct EvalResult {
    bool converged = false;
    Heap heap;
    TermP value;
    std::uint64_t used = 0;  ///< fuel consumed
};

struct StuckError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Big-step evaluation with one unit of fuel per rule application.
/// `N` >= 1 makes arithmetic wrap modulo N+1; N < 0 leaves integers unbounded.
EvalResult eval(const Heap& heap, const TermP& t, std::uint64_t fuel, int N = -1);

/// Integer operation shared with the automata translation; wraps modulo N+1 when N >= 1.
std::int64_t arith(BinOp op, std::int64_t i, std::int64_t j, int N);

enum class Convergence { Yes, Unknown };
Convergence converges(const TermP& t, std::uint64_t fuel, int N = -1);

}
