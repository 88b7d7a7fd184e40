#include <gtest/gtest.h>

#include "support.hpp"

using namespace testing_support;

TEST(Integrability, ZeroPotentials) {
    const Model& m = model();
    SuperMatrix Z(m.spec->catalog(), 2, 1);
    EXPECT_TRUE(build_v_from_u(true, Z, *m.spec).is_zero());
    EXPECT_TRUE(build_w_from_uv(true, Z, Z, *m.spec).is_zero());
    EXPECT_TRUE(zcc_fermionic(Z, Z, *m.spec).is_zero());
    SuperMatrix one = SuperMatrix::identity(m.spec->catalog(), 2, 1);
    SuperMatrix w = build_w_from_uv(false, Z, one, *m.spec);
    EXPECT_EQ(w, scalar_star(SuperFraction(I * m.tm), one));
}

TEST(Integrability, ConstantOddKappa) {
    const Model& m = model();
    SuperExpr O = m.k(0), one = m.k(1);
    SuperMatrix kappa = m.mat({{O, O, one}, {O, O, one}, {one, one, O}});
    EXPECT_EQ(build_v_from_u(true, kappa, *m.spec), SuperFraction(m.k(-I)) * (kappa * kappa));
    EXPECT_EQ(zcc_fermionic(kappa, kappa, *m.spec), SuperFraction(m.k(-2)) * (kappa * kappa));
}

TEST(Integrability, ConstantVs) {
    const Model& m = model();
    SuperExpr O = m.k(0), one = m.k(1);
    SuperMatrix C1 = m.mat({{one, O, O}, {O, O, O}, {O, O, O}});
    SuperMatrix C2 = m.mat({{O, one, O}, {O, O, O}, {O, O, O}});
    EXPECT_EQ(zcc_x(C1, C2, *m.spec), commutator(C2, C1));
    EXPECT_FALSE(commutator(C2, C1).is_zero());
}

TEST(Integrability, ThetaExpansionOfConstants) {
    const Model& m = model();
    SuperExpr O = m.k(0), one = m.k(1);
    SuperMatrix C1 = m.mat({{one, O, O}, {O, O, O}, {O, O, O}});
    SuperMatrix C2 = m.mat({{O, one, O}, {O, O, O}, {O, O, O}});
    SuperFraction i(m.k(I));
    SuperMatrix Wp = i * scalar_star(SuperFraction(m.tp), C1), Wm = i * scalar_star(SuperFraction(m.tm), C2);
    ThetaComponents c = theta_components(zcc_theta(Wp, Wm, *m.spec), *m.spec);
    EXPECT_TRUE(c.scalar.is_zero());
    EXPECT_TRUE(c.plus.is_zero());
    EXPECT_TRUE(c.minus.is_zero());
    EXPECT_EQ(c.both, commutator(C1, C2));
}

TEST(Integrability, SsgeVDisplays) {
    const Model& m = model();
    const SpectralTriple& t = ssge();
    SuperExpr l = m.si * m.si, e2 = m.X * m.X, em2 = m.Xi * m.Xi, q = Coeff::rational(1, 4) * l;
    SuperExpr h = Coeff::rational(1, 2) * m.si;
    SuperMatrix Vp = m.mat({{-q, q * e2, -I * (h * m.P1 * m.X)},
                            {q * em2, -q, -I * (h * m.P1 * m.Xi)},
                            {h * m.P1 * m.Xi, h * m.P1 * m.X, Coeff::rational(-1, 2) * l}});
    EXPECT_EQ(t.Vplus, Vp) << t.Vplus.to_string();
    SuperExpr lam = m.s * m.s, dxm = I * m.M2;
    SuperMatrix Vm = m.mat({{I * dxm + lam, -lam, -I * (m.s * m.M1)},
                            {-lam, -I * dxm + lam, -I * (m.s * m.M1)},
                            {-(m.s * m.M1), -(m.s * m.M1), Coeff(2) * lam}});
    EXPECT_EQ(t.Vminus, Vm) << t.Vminus.to_string();
    EXPECT_EQ(supertrace(t.Uplus), SuperFraction(m.k(0)));
    EXPECT_EQ(t.Vplus(2, 2), SuperFraction(Coeff::rational(-1, 2) * l));
}

TEST(Integrability, SsgeCompatibility) {
    const Model& m = model();
    const SpectralTriple& t = ssge();
    RewriteTrace tr;
    EXPECT_TRUE(zcc_fermionic(t.Uplus, t.Uminus, *m.spec, &tr).is_zero());
    EXPECT_GT(tr.equation_uses, 0);
    EXPECT_TRUE(zcc_x(t.Vplus, t.Vminus, *m.spec).is_zero());
    ZccThetaDecomposition d = decompose_zcc_theta(t);
    EXPECT_TRUE(d.total.is_zero());
    EXPECT_TRUE(d.omega.is_zero());
    EXPECT_TRUE(d.mixed_plus.is_zero());
    EXPECT_TRUE(d.mixed_minus.is_zero());
    EXPECT_TRUE(d.x_part.is_zero());
    EXPECT_TRUE(d.assembly_residual.is_zero());
    LaxResidual lr = lax_residual(t, d.omega);
    EXPECT_TRUE(lr.plus.is_zero());
    EXPECT_TRUE(lr.minus.is_zero());
}

TEST(Integrability, LaxWithConstantOmega) {
    const Model& m = model();
    SuperMatrix Z(m.spec->catalog(), 2, 1);
    SpectralTriple t = build_triple(m.spec, Z, Z);
    SuperMatrix C = SuperMatrix::diag(m.spec->catalog(), 2, 1, {m.f(m.k(2)), m.f(m.k(1)), m.f(m.k(3))});
    LaxResidual lr = lax_residual(t, C);
    EXPECT_TRUE(lr.plus.is_zero());
    EXPECT_TRUE(lr.minus.is_zero());
}

TEST(Integrability, PipelineCoherenceOffShell) {
    const Model& m = model();
    std::mt19937_64 rng(17);
    RandomExprOptions opt;
    opt.terms = 2;
    opt.max_jet = 2;
    opt.max_factors = 2;
    for (int trial = 0; trial < 3; ++trial) {
        SuperMatrix Up = random_odd_matrix(*m.spec, 2, 1, rng, opt);
        SuperMatrix Um = random_odd_matrix(*m.spec, 2, 1, rng, opt);
        SpectralTriple t = build_triple(m.spec, Up, Um);
        ZccThetaDecomposition d = decompose_zcc_theta(t);
        EXPECT_TRUE(d.assembly_residual.is_zero());
        EXPECT_EQ(d.x_part, -zcc_x(t.Vplus, t.Vminus, *m.spec));
        EXPECT_TRUE(omega_long_identity_residual(Up, Um, *m.spec).is_zero());
    }
}

TEST(Integrability, ThetaFreePotentialsSplitExactly) {
    const Model& m = model();
    std::mt19937_64 rng(23);
    RandomExprOptions opt;
    opt.terms = 2;
    opt.max_jet = 2;
    opt.max_factors = 2;
    opt.use_theta = false;
    SuperMatrix Up = random_odd_matrix(*m.spec, 2, 1, rng, opt);
    SuperMatrix Um = random_odd_matrix(*m.spec, 2, 1, rng, opt);
    SpectralTriple t = build_triple(m.spec, Up, Um);
    ZccThetaDecomposition d = decompose_zcc_theta(t);
    ThetaComponents c = theta_components(d.total, *m.spec);
    EXPECT_EQ(c.scalar, d.omega);
    EXPECT_EQ(c.plus, d.mixed_plus);
    EXPECT_EQ(c.minus, d.mixed_minus);
    EXPECT_EQ(c.both, d.x_part);
}
