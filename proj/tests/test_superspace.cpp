#include <gtest/gtest.h>

#include "superfg/superspace.hpp"

using namespace superfg;
using K = DerivKind;

namespace {

// D+ D- phi = i sin(phi) = (X - X^-1)/2
const JetSpec& spec() {
    static JetSpec sp = [] {
        FieldCatalog fc = make_field_catalog();
        SuperExpr X = SuperExpr::generator(fc.catalog, "X");
        SuperExpr rhs = Coeff::rational(1, 2) * (X - SuperExpr::generator(fc.catalog, "X", -1));
        return JetSpec(fc, rhs);
    }();
    return sp;
}
SuperExpr g(const char* n, int k = 1) { return SuperExpr::generator(spec().catalog(), n, k); }
const Coeff I = Coeff::imag_unit();

} // namespace

TEST(Superspace, CoordinateDerivatives) {
    EXPECT_EQ(apply_derivation(K::Dplus, g("th_p"), spec()), spec().one());
    EXPECT_TRUE(apply_derivation(K::Dplus, g("th_m"), spec()).is_zero());
    EXPECT_TRUE(apply_derivation(K::Dplus, g("s"), spec()).is_zero());
    EXPECT_EQ(apply_derivation(K::Dminus, g("X", -1), spec()), -I * (g("X", -1) * g("Dm1")));
}

TEST(Superspace, FieldEquation) {
    EXPECT_EQ(apply_derivation(K::Dplus, g("Dm1"), spec()).to_string(), "-(1/2)*X^-1 + (1/2)*X");
    EXPECT_EQ(apply_derivation(K::Dminus, g("Dp1"), spec()), -spec().rhs());
}

TEST(Superspace, DxOfPhase) {
    SuperExpr twice = apply_derivation(K::Dplus, apply_derivation(K::Dplus, g("X"), spec()), spec());
    EXPECT_EQ(apply_derivation(K::DxPlus, g("X"), spec()), I * twice);
    EXPECT_EQ(apply_derivation(K::DxPlus, g("X"), spec()), -(g("X") * g("Dp2")));
}

TEST(Superspace, Dlambda) {
    EXPECT_EQ(apply_derivation(K::Dlambda, g("s", -1), spec()), Coeff::rational(-1, 2) * g("s", -3));
    EXPECT_EQ(apply_derivation(K::Dlambda, g("s", 2), spec()), spec().one());
    EXPECT_TRUE(apply_derivation(K::Dlambda, g("X"), spec()).is_zero());
}

TEST(Superspace, Words) {
    EXPECT_EQ(reduce_to_jets({K::Dplus}, spec()), g("Dp1"));
    EXPECT_EQ(reduce_to_jets({K::Dplus, K::Dminus}, spec()), spec().rhs());
    SuperExpr cosp = Coeff::rational(1, 2) * (g("X") + g("X", -1));
    SuperExpr v = reduce_to_jets({K::Dplus, K::Dplus, K::Dminus}, spec());
    EXPECT_EQ(v, I * (cosp * g("Dp1")));
    // the other route D-(D+ D+ phi): D- passes two odd symbols
    EXPECT_EQ(v, reduce_to_jets({K::Dminus, K::Dplus, K::Dplus}, spec()));
}

TEST(Superspace, AnticommutatorExamples) {
    for (const char* n : {"th_p", "X", "Dp2", "Dm3"}) {
        SuperExpr e = g(n);
        EXPECT_TRUE((apply_derivation(K::Dplus, apply_derivation(K::Dminus, e, spec()), spec()) +
                     apply_derivation(K::Dminus, apply_derivation(K::Dplus, e, spec()), spec()))
                        .is_zero())
            << n;
    }
    SuperExpr lhs = apply_derivation(K::Dplus, apply_derivation(K::Dplus, g("Dm2"), spec()), spec());
    EXPECT_EQ(lhs, -I * apply_derivation(K::DxPlus, g("Dm2"), spec()));
}

TEST(Superspace, OperatorIdentitySuite) {
    for (const auto& r : check_operator_identities(spec(), 200, 42)) {
        EXPECT_TRUE(r.passed) << r.name << " on " << r.counterexample << " residual " << r.residual;
        EXPECT_EQ(r.checked, 200);
    }
}

TEST(Superspace, Confluence) {
    IdentityResult r = check_confluence(spec(), 4);
    EXPECT_TRUE(r.passed) << r.counterexample << " " << r.residual;
    EXPECT_EQ(r.checked, 2 + 4 + 8 + 16);
}

TEST(Superspace, ParityFlips) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        SuperExpr e = random_field_expr(spec(), rng).part(Parity::Odd);
        SuperExpr d = apply_derivation(K::Dminus, e, spec());
        EXPECT_TRUE(d.has_parity(Parity::Even));
    }
}

TEST(Superspace, TraceCountsEquationUses) {
    RewriteTrace tr;
    reduce_to_jets({K::Dplus, K::Dminus}, spec(), &tr);
    EXPECT_EQ(tr.equation_uses, 1);
    RewriteTrace none;
    reduce_to_jets({K::Dplus, K::Dplus}, spec(), &none);
    EXPECT_EQ(none.equation_uses, 0);
    EXPECT_EQ(none.highest_jet, 2);
}

TEST(Superspace, Overflow) {
    EXPECT_THROW(apply_derivation(K::Dplus, g("Dp12"), spec()), Error);
    try {
        apply_derivation(K::Dplus, g("Dp12"), spec());
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::JetOrderOverflow);
    }
    FieldCatalog fc = make_field_catalog();
    EXPECT_THROW(JetSpec(fc, SuperExpr(fc.catalog), 13), Error);
}

TEST(Superspace, ComboParity) {
    DerivationOp odd = DerivationOp::combo({{spec().one(), K::Dplus}});
    EXPECT_THROW(apply_derivation(odd, spec().one() + g("th_p"), spec()), Error);
    DerivationOp mixed = DerivationOp::combo({{spec().one(), K::Dplus}, {spec().one(), K::DxPlus}});
    EXPECT_THROW(mixed.parity(), Error);
    DerivationOp J = DerivationOp::combo({{spec().one(), K::Dplus}, {Coeff(0, 2) * g("th_p"), K::DxPlus}});
    EXPECT_EQ(J.parity(), Parity::Odd);
    // J+ X = i X Dp1 + 2i th_p (-X Dp2)
    EXPECT_EQ(apply_derivation(J, g("X"), spec()),
              I * (g("X") * g("Dp1")) - Coeff(0, 2) * (g("th_p") * g("X") * g("Dp2")));
}

TEST(Superspace, FractionQuotientRule) {
    SuperFraction f(g("th_p"), spec().one() + g("Dp2"));
    SuperFraction d = apply_derivation(DerivationOp::basic(K::Dplus), f, spec());
    // D+(th/d) = 1/d + th*Dp3/d^2, the sign coming from moving D+ past th
    SuperExpr den = spec().one() + g("Dp2");
    SuperFraction expect(den + g("th_p") * g("Dp3"), den * den);
    EXPECT_TRUE(frac_equal(d, expect)) << d.to_string();
}
