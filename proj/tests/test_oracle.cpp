#include <gtest/gtest.h>

#include "superfg/oracle.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

size_t gen(const char* n) { return model().spec->catalog()->index(n); }

Assignment full(uint64_t seed, int units = 14) {
    return sample_assignment(model().spec->catalog(), units, seed);
}

RandomExprOptions small() {
    RandomExprOptions o;
    o.terms = 3;
    o.max_jet = 2;
    o.max_factors = 3;
    return o;
}

} // namespace

TEST(Oracle, AssignmentDeterminism) {
    EXPECT_EQ(full(7).to_string(), full(7).to_string());
    EXPECT_NE(full(7).to_string(), full(8).to_string());
}

TEST(Oracle, AnticommutingUnits) {
    Assignment a = full(3);
    const GrassmannNumber &p = a.value(gen("th_p")), &q = a.value(gen("th_m"));
    EXPECT_LE((p * q + q * p).max_abs(), 1e-15);
    EXPECT_LE((p * p).max_abs(), 1e-15);
    EXPECT_GT((p * q).max_abs(), 0.1);
}

TEST(Oracle, InversesAndNilpotents) {
    const Model& m = model();
    Assignment a = full(5);
    GrassmannNumber one(a.units, 1);
    EXPECT_LE((eval_numeric(m.X, a) * eval_numeric(m.Xi, a) - one).max_abs(), 1e-12);
    cplx sv = a.value(gen("s")).body();
    EXPECT_LE(std::abs(eval_numeric(m.si * m.si, a).body() - 1.0 / (sv * sv)), 1e-12);
    SuperExpr n = m.tp * m.tm;
    EXPECT_LE((eval_numeric(m.k(1) + n, a) * eval_numeric(m.k(1) - n, a) - one).max_abs(), 1e-12);
    GrassmannNumber x = eval_numeric(m.k(2) + m.tp * m.P1 + n, a);
    EXPECT_LE((x * x.inverse() - one).max_abs(), 1e-12);
    GrassmannNumber y = eval_numeric(m.k(2) + n, a);
    EXPECT_LE((eval_numeric(SuperFraction(m.k(1), m.k(2) + n), a) - y.inverse()).max_abs(), 1e-12);
    EXPECT_THROW(GrassmannNumber::unit(4, 1).inverse(), Error);
}

TEST(Oracle, InsufficientUnits) {
    try {
        sample_assignment(model().spec->catalog(), 8, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientUnits);
    }
    GeneratorSet used = generators_used(model().tp * model().M1);
    Assignment a = sample_assignment(model().spec->catalog(), 2, 1, used);
    EXPECT_THROW(a.value(gen("Dp1")), Error);
}

TEST(Oracle, Equality) {
    const Model& m = model();
    SuperExpr cs = Coeff::rational(1, 2) * (m.X + m.Xi) * ((-I * Coeff::rational(1, 2)) * (m.X - m.Xi));
    SuperExpr rhs = (-I * Coeff::rational(1, 4)) * (m.X * m.X - m.Xi * m.Xi);
    EXPECT_TRUE(oracle_equal(m.f(cs), m.f(rhs), 5, 1e-12).equal);
    OracleVerdict v = oracle_equal(m.f(m.tp), m.f(m.tm), 5, 1e-9);
    EXPECT_FALSE(v.equal);
    EXPECT_NE(v.witness.find("th_p"), std::string::npos);
    EXPECT_TRUE(oracle_equal(m.f(rhs), m.f(rhs), 3, 0.0).equal);
}

TEST(Oracle, SoundnessOnSymbolicZeros) {
    const JetSpec& spec = *model().spec;
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        SuperExpr a = random_field_expr(spec, rng, small()), b = random_field_expr(spec, rng, small());
        // graded Leibniz of D+ on a product, which the engine reduces to zero
        SuperExpr pa = a.part(Parity::Odd);
        SuperExpr z = apply_derivation(DerivKind::Dplus, pa * b, spec) -
                      apply_derivation(DerivKind::Dplus, pa, spec) * b + pa * apply_derivation(DerivKind::Dplus, b, spec);
        ASSERT_TRUE(z.is_zero());
        // and the unreduced product evaluated both ways
        GeneratorSet used = generators_used(a);
        merge_into(used, generators_used(b));
        Assignment asg = sample_assignment(spec.catalog(), 8, 100 + t, used);
        GrassmannNumber lhs = eval_numeric(a * b, asg), rhs = eval_numeric(a, asg) * eval_numeric(b, asg);
        EXPECT_LE((lhs - rhs).max_abs(), 1e-12);
    }
}

TEST(Oracle, CompletenessOnNonzero) {
    const JetSpec& spec = *model().spec;
    std::mt19937_64 rng(12);
    int tested = 0;
    while (tested < 50) {
        SuperExpr e = random_field_expr(spec, rng, small());
        if (e.is_zero()) continue;
        ++tested;
        EXPECT_FALSE(oracle_equal(SuperFraction(e), model().z(), 5, 1e-12).equal) << e.to_string();
    }
}

TEST(Oracle, SymbolicBerezinianAndInverseAgree) {
    const Model& m = model();
    std::mt19937_64 rng(21);
    RandomExprOptions o = small();
    o.use_theta = true;
    for (int t = 0; t < 5; ++t) {
        SuperMatrix A = SuperMatrix::identity(m.spec->catalog(), 2, 1);
        SuperMatrix R = random_odd_matrix(*m.spec, 2, 1, rng, o);
        // odd times odd is even; adding a scalar body keeps it invertible
        SuperMatrix E = A + scalar_star(m.f(m.P1), R) + scalar_star(m.f(m.tp), R);
        Assignment asg = sample_assignment(m.spec->catalog(), 12, 300 + t, generators_used(E));
        NumMatrix ne = eval_numeric(E, asg);
        EXPECT_LE((eval_numeric(berezinian(E), asg) - num_berezinian(ne)).max_abs(), 1e-9);
        EXPECT_LE((eval_numeric(mat_inverse(E), asg) - num_inverse(ne)).max_abs(), 1e-9);
    }
}

TEST(Oracle, BerezinianMultiplicativeAndKillingInvariant) {
    std::mt19937_64 rng(31);
    const int units = 8;
    for (int t = 0; t < 25; ++t) {
        NumMatrix a = random_num_supermatrix(2, 1, units, false, rng);
        NumMatrix b = random_num_supermatrix(2, 1, units, false, rng);
        GrassmannNumber lhs = num_berezinian(num_mul(a, b)), rhs = num_berezinian(a) * num_berezinian(b);
        EXPECT_LE((lhs - rhs).max_abs(), 1e-9 * std::max(1.0, rhs.max_abs()));
        NumMatrix x = random_num_supermatrix(2, 1, units, t % 2 == 1, rng);
        NumMatrix y = random_num_supermatrix(2, 1, units, false, rng);
        NumMatrix gi = num_inverse(a);
        NumMatrix xc = num_mul(num_mul(a, x), gi), yc = num_mul(num_mul(a, y), gi);
        bool odd = t % 2 == 1;
        EXPECT_LE((num_killing(xc, yc, odd) - num_killing(x, y, odd)).max_abs(), 1e-9);
    }
}

TEST(Oracle, LambdaFiniteDifference) {
    const SpectralTriple& t = ssge();
    const JetSpec& spec = *t.spec;
    size_t s = gen("s");
    SuperMatrix dl = mat_derive(DerivKind::Dlambda, t.Uplus, spec);
    Assignment a = sample_assignment(spec.catalog(), 8, 41, generators_used(t.Uplus));
    cplx sv = a.value(s).body();
    const double h = 1e-4;
    NumMatrix up = eval_numeric(t.Uplus, a.with_value(s, GrassmannNumber(a.units, sv + h)));
    NumMatrix um = eval_numeric(t.Uplus, a.with_value(s, GrassmannNumber(a.units, sv - h)));
    NumMatrix exact = eval_numeric(dl, a);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            GrassmannNumber fd = (up(i, j) - um(i, j)) * (1.0 / (2 * h));
            GrassmannNumber ch = exact(i, j) * (2.0 * sv); // d/ds = 2s d/dλ
            EXPECT_LE((fd - ch).max_abs(), 1e-5 * std::max(1.0, ch.max_abs()));
        }
}
