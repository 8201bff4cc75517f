#include "fixtures.hpp"

#include "ia/oracle.hpp"

#include <gtest/gtest.h>

using namespace ia;

namespace {

std::vector<ContextTemplate> all(const Context& ctx, const TypeP& ty, int max_size) {
    OracleConfig cfg;
    cfg.max_size = max_size;
    std::vector<ContextTemplate> out;
    enumerate_contexts(ctx, ty, cfg, [&](const ContextTemplate& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

}

TEST(Enumerate, HoleAloneFirst) {
    auto cs = all({}, Type::com(), 3);
    ASSERT_FALSE(cs.empty());
    EXPECT_EQ(cs[0].size, 1u);
    EXPECT_EQ(cs[0].to_string(), "[-]");
}

TEST(Enumerate, SizeOrderedClosedAndTyped) {
    auto holes = std::vector<std::pair<Context, TypeP>>{
        {{}, Type::exp()}, {{{"f", parse_type("com->exp")}}, Type::exp()}, {{{"x", Type::var()}}, Type::com()}};
    for (const auto& [ctx, ty] : holes) {
        std::size_t last = 0;
        for (const auto& c : all(ctx, ty, 8)) {
            EXPECT_GE(c.size, last);
            last = c.size;
            // filling with a term of the right type gives a closed program
            TermP m = ty->kind == Type::Exp ? mk::num(1) : mk::unit();
            TermP filled = c.fill(m);
            EXPECT_TRUE(free_vars(filled).empty()) << c.to_string();
            EXPECT_TRUE(type_eq(typecheck({}, filled), Type::com())) << c.to_string();
        }
    }
}

TEST(Enumerate, FunctionHoleIsApplied) {
    bool found = false;
    for (const auto& c : all({}, parse_type("com->com"), 3)) found = found || c.to_string() == "[-] skip";
    EXPECT_TRUE(found);
}

TEST(Enumerate, StopsEarly) {
    OracleConfig cfg;
    std::size_t seen = enumerate_contexts({}, Type::com(), cfg, [](const ContextTemplate&) { return false; });
    EXPECT_EQ(seen, 1u);
}

TEST(Enumerate, Deterministic) {
    auto a = all({}, Type::exp(), 7), b = all({}, Type::exp(), 7);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].to_string(), b[i].to_string());
}

TEST(Distinguish, Constants) {
    OracleConfig cfg;
    cfg.max_size = 8;
    auto r = distinguish(parse_judgment("|- 1 : exp"), parse_judgment("|- 2 : exp"), cfg);
    ASSERT_TRUE(r.witness);
    EXPECT_LE(r.witness->context.size, 8u);
    // replaying the witness reproduces the split
    ia::Run a = run_closed(r.witness->context.fill(mk::num(1)), 100000, 2);
    ia::Run b = run_closed(r.witness->context.fill(mk::num(2)), 100000, 2);
    EXPECT_NE(a.converged, b.converged);
    EXPECT_EQ(a.converged, r.witness->first_converges);
}

TEST(Distinguish, EqualTermsHaveNoWitness) {
    OracleConfig cfg;
    cfg.max_size = 9;
    auto r = distinguish(parse_judgment("|- skip : com"), parse_judgment("|- skip; skip : com"), cfg);
    EXPECT_FALSE(r.witness);
    EXPECT_GT(r.examined, 100u);
}

TEST(Distinguish, OpenTermsThroughLambda) {
    OracleConfig cfg;
    cfg.max_size = 11;
    auto r = distinguish(parse_judgment("x:var |- x := !x : com"), parse_judgment("x:var |- skip : com"), cfg);
    ASSERT_TRUE(r.witness);
    EXPECT_NE(r.witness->context.to_string().find("mkvar"), std::string::npos);
}

TEST(Distinguish, MismatchedJudgments) {
    OracleConfig cfg;
    EXPECT_THROW(distinguish(parse_judgment("|- 1 : exp"), parse_judgment("|- skip : com"), cfg), std::invalid_argument);
    EXPECT_THROW(distinguish(parse_judgment("x:exp |- x : exp"), parse_judgment("y:exp |- y : exp"), cfg),
                 std::invalid_argument);
}

TEST(TryContext, TenfoldRule) {
    // a slow but convergent side is not mistaken for divergence
    OracleConfig cfg;
    cfg.fuel = 50;
    ContextTemplate c{mk::id("[-]"), {}, Type::com(), 1};
    TermP slow = parse_term("new x in while 2 - !x do x := !x + 1");
    EXPECT_FALSE(try_context(c, slow, mk::unit(), cfg));
    EXPECT_TRUE(try_context(c, mk::omega(Type::com()), mk::unit(), cfg));
}
