#include <gtest/gtest.h>

#include <random>

#include "superfg/model.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

const char* kBase = R"(grading 2 1
field
equation = -(1/2)*(X - X^-1)
let h = (1/2)*s^-1
potential U_p = h*[[0, 0, i*X], [0, 0, -i*X^-1], [-X^-1, X, 0]]
potential U_m = [[i*Dm1, 0, -i*s], [0, -i*Dm1, i*s], [-s, s, 0]]
normal N1 = diag(1, -1, 0)
)";

SuperFraction parse(const std::string& text) { return parse_scalar(text, model().spec->catalog(), model().spec.get()); }

template <class F>
LocatedError located(F&& f) {
    try {
        f();
    } catch (const LocatedError& e) {
        return e;
    }
    ADD_FAILURE() << "no located error";
    return LocatedError(ErrorKind::ConfigError, 0, 0, "");
}

} // namespace

TEST(Model, ScalarCanonicalForm) {
    const Model& m = model();
    EXPECT_EQ(parse("(1/2)*s^-1*i*X"), m.f((I * Coeff::rational(1, 2)) * (m.si * m.X)));
    EXPECT_EQ(parse("s^-1*s"), m.f(m.k(1)));
    EXPECT_TRUE(parse("th_p^2").is_zero());
    EXPECT_EQ(parse("th_m*th_p"), m.f(-(m.tp * m.tm)));
    EXPECT_EQ(parse("-X^2"), m.f(-(m.X * m.X)));
    EXPECT_EQ(parse("2^3 - 8"), m.z());
    EXPECT_EQ(parse("1/(X + X^-1)") * parse("X + X^-1"), m.f(m.k(1)));
}

TEST(Model, DerivationCalls) {
    const Model& m = model();
    EXPECT_EQ(parse("D_p(phi)"), m.f(m.P1));
    EXPECT_EQ(parse("Dx_p(phi)"), m.f(I * m.P2));
    EXPECT_EQ(parse("Dth_m(phi)"), m.f(m.M1 - m.tm * m.M2));
    EXPECT_EQ(parse("D_p(D_m(phi))"), m.f(Coeff::rational(-1, 2) * (m.X - m.Xi)));
    EXPECT_EQ(parse("Dlam(s^3)"), m.f(Coeff::rational(3, 2) * m.s));
    EXPECT_EQ(parse("D_p(X)"), m.f(I * (m.X * m.P1)));
    // J = D + 2iθDx on phi
    EXPECT_EQ(parse("(D_p + 2*i*th_p*Dx_p)(phi)"), m.f(m.P1 - Coeff(2) * (m.tp * m.P2)));
}

TEST(Model, NonInvertibleExponentPointsAtToken) {
    auto e = located([] { parse("1 + Dp1^-1"); });
    EXPECT_EQ(e.kind(), ErrorKind::NotInvertible);
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.col(), 5);
    auto z = located([] { parse("X/th_p"); });
    EXPECT_EQ(z.kind(), ErrorKind::NotInvertible);
}

TEST(Model, SyntaxErrorsCarryPosition) {
    std::string text = std::string(kBase) + "let q = (X +\n  * s)\n";
    auto e = located([&] { parse_model(text); });
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    EXPECT_EQ(e.line(), 9);
    EXPECT_EQ(e.col(), 3);

    auto u = located([] { parse("X*nosuch"); });
    EXPECT_EQ(u.kind(), ErrorKind::UnknownGenerator);
    EXPECT_EQ(u.col(), 3);

    try {
        parse_model(std::string(kBase) + "bogus 1\n");
        FAIL();
    } catch (const SyntaxError& s) {
        EXPECT_EQ(s.line(), 8);
        EXPECT_FALSE(s.expected().empty());
    }
    EXPECT_THROW(parse("@"), SyntaxError);
}

TEST(Model, TypeErrors) {
    auto mixed = located([] { parse_model(std::string(kBase) + "let q = X + diag(1, 1, 1)\n"); });
    EXPECT_EQ(mixed.kind(), ErrorKind::ParityError);
    EXPECT_EQ(mixed.line(), 8);
    auto dim = located([] { parse_model(std::string(kBase) + "let q = [[1, 0], [0, 1]]\n"); });
    EXPECT_EQ(dim.kind(), ErrorKind::DimensionMismatch);
    auto pot = located([] {
        parse_model("field\nequation = X\npotential U_p = diag(1, 1, 1)\n");
    });
    EXPECT_EQ(pot.kind(), ErrorKind::ParityError);
    auto early = located([] { parse_model("field\nlet q = D_p(X)\n"); });
    EXPECT_EQ(early.kind(), ErrorKind::ConfigError);
}

TEST(Model, ModelFileStructure) {
    std::string text = std::string(kBase) + R"(
check V_p = Dx_p(U_p)   # not a real check, only parsed
scenario ST {
  sector bosonic
  deformation sym_tafel 1
  normal N1
  expect g12 = -1/4
  soft expect H = 0
  expect K undefined b
  zeros g 11 22
}
scenario TX {
  sector bosonic
  deformation symmetry Dx_p
  minus_branch Dx_m
  normal N1
  expect A_p = th_m*U_p
}
)";
    ModelFile mf = parse_model(text);
    const Model& m = model();
    ASSERT_EQ(mf.scenarios.size(), 2u);
    EXPECT_EQ(mf.m, 2);
    EXPECT_EQ(mf.Uplus, ssge().Uplus);
    EXPECT_EQ(mf.Uminus, ssge().Uminus);
    EXPECT_EQ(mf.normals.at("N1"), m.diag({m.k(1), m.k(-1), m.k(0)}));
    ASSERT_EQ(mf.checks.size(), 1u);
    const ScenarioDef& st = mf.scenario("ST");
    EXPECT_EQ(st.kind, DeformationKind::SymTafel);
    ASSERT_EQ(st.fixtures.size(), 3u);
    EXPECT_EQ(st.fixtures[0].quantity, "g12");
    EXPECT_TRUE(st.fixtures[1].soft);
    EXPECT_EQ(st.fixtures[2].kind, Fixture::Kind::Undefined);
    EXPECT_EQ(st.fixtures[2].undefined_which, "b");
    ASSERT_EQ(st.zeros.size(), 1u);
    EXPECT_EQ(st.zeros[0].zeros, (std::vector<std::pair<int, int>>{{1, 1}, {2, 2}}));
    const ScenarioDef& tx = mf.scenario("TX");
    EXPECT_EQ(tx.Q.kind, DerivKind::DxPlus);
    ASSERT_TRUE(tx.Q_minus.has_value());
    // odd scalar times matrix is the graded action
    EXPECT_EQ(tx.fixtures[0].matrix, scalar_star(m.f(m.tm), ssge().Uplus));
    try {
        mf.scenario("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownScenario);
    }
}

TEST(Model, ScenarioValidation) {
    auto no_normal = located([] { parse_model(std::string(kBase) + "scenario A {\n deformation sym_tafel 1\n}\n"); });
    EXPECT_EQ(no_normal.kind(), ErrorKind::ConfigError);
    auto bad_normal = located([] {
        parse_model(std::string(kBase) + "scenario A {\n deformation sym_tafel 1\n normal N9\n}\n");
    });
    EXPECT_EQ(bad_normal.line(), 10);
    auto bad_q = located([] {
        parse_model(std::string(kBase) + "scenario A {\n normal N1\n expect g55 = 1\n}\n");
    });
    EXPECT_EQ(bad_q.kind(), ErrorKind::SyntaxError);
}

TEST(Model, PrintParseRoundTrip) {
    std::mt19937_64 rng(2024);
    RandomExprOptions o;
    o.terms = 5;
    o.max_power = 3;
    for (int k = 0; k < 200; ++k) {
        SuperExpr e = random_field_expr(*model().spec, rng, o);
        if (k % 3 == 0) e = I * e + model().k(Coeff::rational(k, 7));
        SuperFraction back = parse(e.to_string());
        ASSERT_EQ(back, SuperFraction(e)) << e.to_string();
        ASSERT_EQ(back.to_string(), e.to_string());
    }
}
