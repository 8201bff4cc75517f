#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ia {

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct Type {
    enum Kind { Com, Exp, Var, Arrow };
    Kind kind;
    TypeP param;
    TypeP result;

    static TypeP com();
    static TypeP exp();
    static TypeP var();
    static TypeP arrow(TypeP a, TypeP b);

    bool is_base() const { return kind == Com || kind == Exp; }
};

bool type_eq(const TypeP& a, const TypeP& b);
std::string to_string(const TypeP& t);
int type_order(const TypeP& t);
std::size_t type_size(const TypeP& t);

enum class BinOp { Add, Sub, Mul };

struct Term;
using TermP = std::shared_ptr<const Term>;

enum class Tag {
    Unit, Int, Ident, Bin, If, Deref, Assign, MkVar, App,
    Lambda, Fix, New, Ref, While, Let, Loc
};

/// Immutable AST node. `name` holds the bound or referenced identifier;
/// `ty` is the binder type for Lambda and Let (null on a Let until elaborated).
/// Let with name "_" is sequencing.
struct Term {
    Tag tag;
    std::int64_t num = 0;
    std::string name;
    BinOp op = BinOp::Add;
    TypeP ty;
    TermP a, b, c;
};

namespace mk {
TermP unit();
TermP num(std::int64_t i);
TermP id(std::string x);
TermP bin(BinOp op, TermP l, TermP r);
TermP ite(TermP c, TermP t, TermP e);
TermP deref(TermP m);
TermP assign(TermP m, TermP n);
TermP mkvar(TermP rd, TermP wr);
TermP app(TermP f, TermP x);
TermP lam(std::string x, TypeP ty, TermP body);
TermP fix(TermP m);
TermP new_(std::string x, TermP body);
TermP ref();
TermP while_(TermP g, TermP body);
TermP let(std::string x, TypeP ty, TermP bound, TermP body);
TermP seq(TermP m, TermP n);
TermP loc(std::int64_t id);
TermP omega(const TypeP& ty);
}

using Context = std::vector<std::pair<std::string, TypeP>>;

TypeP lookup(const Context& ctx, const std::string& x);
Context extend(Context ctx, const std::string& x, TypeP ty);

struct SyntaxError : std::runtime_error {
    int line, col;
    SyntaxError(const std::string& msg, int l, int c);
};

struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Judgment {
    Context ctx;
    TermP term;
    TypeP type;
};

Judgment parse_judgment(const std::string& src);
TermP parse_term(const std::string& src);
/// `x1:T1, ..., xn:Tn |- T`, naming a prearena without a term.
std::pair<Context, TypeP> parse_sequent(const std::string& src);
TypeP parse_type(const std::string& src);

std::string to_string(const TermP& t);
std::string to_string(const Context& ctx);
std::string to_string(const Judgment& j);

TypeP typecheck(const Context& ctx, const TermP& t);
/// Fills in missing Let binder types. Throws TypeError on ill-typed input.
TermP elaborate(const Context& ctx, const TermP& t);

bool is_value(const TermP& t);
std::set<std::string> free_vars(const TermP& t);
TermP substitute(const TermP& t, const std::string& x, const TermP& v);
/// Substitution of a closed term; skips the capture check.
TermP substitute_closed(const TermP& t, const std::string& x, const TermP& v);
bool alpha_eq(const TermP& a, const TermP& b);
std::size_t term_size(const TermP& t);

/// Source of names `$0`, `$1`, ... that cannot clash with surface identifiers.
class Fresh {
public:
    std::string next();
private:
    int k_ = 0;
};

enum class Fragment { PCFplus, IAcbv, RML, FullL, IAloop, IA2plus };
std::string to_string(Fragment f);
std::set<Fragment> classify_fragment(const Context& ctx, const TermP& t, int N = 2);
bool in_ia2plus_context_grammar(const TypeP& t);
bool in_ia2plus_result_grammar(const TypeP& t);

}
