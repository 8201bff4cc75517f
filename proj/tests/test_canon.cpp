#include "fixtures.hpp"

#include "ia/canon.hpp"
#include "ia/translate.hpp"

#include <gtest/gtest.h>

using namespace ia;

namespace {

TermP canon_of(const std::string& src, Judgment* out = nullptr) {
    Judgment j = parse_judgment(src);
    j.term = elaborate(j.ctx, j.term);
    TermP c = canonicalize(j.ctx, j.term);
    EXPECT_TRUE(is_canonical(j.ctx, c)) << src << "\n  => " << to_string(c);
    EXPECT_TRUE(type_eq(typecheck(j.ctx, c), j.type)) << src;
    if (out) *out = j;
    return c;
}

bool same_language(const Judgment& j, const TermP& c) {
    return decide_equiv(j, Judgment{j.ctx, c, j.type}, 2).equivalent;
}

}

TEST(IsCanonical, Grammar) {
    EXPECT_TRUE(is_canonical(mk::num(3)));
    EXPECT_FALSE(is_canonical(parse_term("!mkvar(fn u:com => 1, fn v:exp => skip)")));
    Context z{{"z", parse_type("(com->exp)->(com->exp)")}};
    EXPECT_TRUE(is_canonical(z, parse_term("let x = z (fn y:com => 1) in let r = skip in let s = x r in s")));
    // x () applies a function identifier directly, outside the let form
    EXPECT_FALSE(is_canonical(z, parse_term("let x = z (fn y:com => 1) in x ()")));
    EXPECT_FALSE(is_canonical({{"x", Type::var()}}, parse_term("x")));
    EXPECT_FALSE(is_canonical(parse_term("1 + 2")));
    EXPECT_TRUE(is_canonical(parse_term("let a = 1 in let b = 2 in a + b")));
}

TEST(Canonicalize, VarIdentifierBecomesMkvar) {
    TermP c = canon_of("x:var |- x : var");
    ASSERT_EQ(c->tag, Tag::MkVar);
    EXPECT_EQ(c->a->tag, Tag::Lambda);
    EXPECT_EQ(c->a->ty->kind, Type::Com);
    EXPECT_EQ(c->a->a->tag, Tag::Deref);
    EXPECT_EQ(c->b->ty->kind, Type::Exp);
    EXPECT_EQ(c->b->a->tag, Tag::Assign);
}

TEST(Canonicalize, BinOpLetBindsOperands) {
    TermP c = canon_of("|- 3 + 4 : exp");
    ASSERT_EQ(c->tag, Tag::Let);
    EXPECT_EQ(c->a->num, 3);
    ASSERT_EQ(c->b->tag, Tag::Let);
    EXPECT_EQ(c->b->a->num, 4);
    EXPECT_EQ(c->b->b->tag, Tag::Bin);
}

TEST(Canonicalize, IfApplicationDistributes) {
    TermP c = canon_of("|- (if 1 then fn y:com => 1 else fn y:com => 2) () : exp");
    // let b = 1 in if b then ... else ...
    ASSERT_EQ(c->tag, Tag::Let);
    EXPECT_EQ(c->b->tag, Tag::If);
    EXPECT_EQ(eval({}, c, 1000, 2).value->num, 1);
}

TEST(Canonicalize, LetCommutes) {
    Judgment j;
    TermP c = canon_of("f:com->exp |- let y = (let x = f () in x + 1) in y + y : exp", &j);
    EXPECT_TRUE(same_language(j, c));
}

TEST(Canonicalize, Examples) {
    for (const char* src : {
             "|- new x in (x := 1; !x) : exp",
             "f:com->com->com |- let g1 = f () in let g2 = f () in g1 () : com",
             "f:(com->exp)->com |- f (fn y:com => 1) : com",
             "|- (fn g:exp->exp => g (g 1)) (fn n:exp => n + 1) : exp",
             "|- new x in let v = mkvar(fn u:com => !x + 1, fn v:exp => x := v) in (v := 2; !v) : exp",
             "|- new x in (while !x - 2 do x := !x + 1); !x : exp",
             "x:var, f:var->com |- f x : com",
             "f:(com->exp)->(com->exp) |- fn y:com => f (fn u:com => 1) y : com->exp",
             "f:exp->exp->exp |- let g = f 1 in g 2 + g 0 : exp",
         }) {
        Judgment j;
        TermP c = canon_of(src, &j);
        if (j.ctx.empty()) {
            EvalResult a = eval({}, j.term, 100000, 2), b = eval({}, c, 1000000, 2);
            ASSERT_EQ(a.converged, b.converged) << src;
            if (a.converged) EXPECT_EQ(to_string(a.value), to_string(b.value)) << src;
        }
    }
}

TEST(Canonicalize, RejectsOutsideIAloop) {
    EXPECT_THROW(canonicalize({}, parse_term("let x = ref in !x")), CanonError);
    EXPECT_THROW(canonicalize({}, parse_term("(fix (fn f:exp->exp => fn n:exp => n)) 1")), CanonError);
}

TEST(Canonicalize, RandomProgramsKeepMeaning) {
    fx::ProgramGen gen(21, 2);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> env;
        TermP t = i % 2 ? gen.exp(env, 5) : gen.com(env, 5);
        TermP c = canonicalize({}, t);
        ASSERT_TRUE(is_canonical(c)) << to_string(t) << "\n  => " << to_string(c);
        ASSERT_TRUE(type_eq(typecheck({}, c), typecheck({}, t)));
        EvalResult a = eval({}, t, 20000, 2);
        EvalResult b = eval({}, c, 200000, 2);
        if (a.converged) {
            ASSERT_TRUE(b.converged) << to_string(t);
            EXPECT_EQ(to_string(a.value), to_string(b.value)) << to_string(t);
            ++checked;
        } else {
            // slow convergence of the source would show up at ten times the budget
            if (!eval({}, t, 200000, 2).converged) EXPECT_FALSE(b.converged) << to_string(t);
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(Canonicalize, StaysInIA2) {
    for (const auto& c : fx::equivalence_suite())
        for (const auto& src : {c.first, c.second}) {
            Judgment j = parse_judgment(src);
            TermP t = canonicalize(j.ctx, elaborate(j.ctx, j.term));
            EXPECT_TRUE(classify_fragment(j.ctx, t, 9).count(Fragment::IA2plus)) << src;
        }
}
