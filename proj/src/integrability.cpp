#include "superfg/integrability.hpp"

namespace superfg {

SuperMatrix mat_derive(const DerivationOp& op, const SuperMatrix& m, const JetSpec& spec, RewriteTrace* trace) {
    Parity p = op.parity();
    SuperMatrix r = m.map([&](const SuperFraction& e) {
        if (e.is_zero()) return SuperFraction(spec.catalog());
        return apply_derivation(op, e, spec, trace);
    });
    return r.twisted(p == Parity::Odd);
}

SuperMatrix mat_derive(DerivKind k, const SuperMatrix& m, const JetSpec& spec, RewriteTrace* trace) {
    return mat_derive(DerivationOp::basic(k), m, spec, trace);
}

namespace {

const Coeff I = Coeff::imag_unit();

SuperFraction scal(const JetSpec& spec, const Coeff& c) { return SuperFraction(SuperExpr::constant(spec.catalog(), c)); }

void require(const SuperMatrix& m, Parity p, const char* what) {
    if (!m.fits(p))
        throw Error(ErrorKind::ParityError, std::string(what) + " must be " + parity_name(p) + ", got " +
                                                parity_name(m.parity()));
}

DerivKind D(bool plus) { return plus ? DerivKind::Dplus : DerivKind::Dminus; }
DerivKind Dx(bool plus) { return plus ? DerivKind::DxPlus : DerivKind::DxMinus; }
DerivKind Dth(bool plus) { return plus ? DerivKind::DthetaPlus : DerivKind::DthetaMinus; }

} // namespace

SuperMatrix build_v_from_u(bool plus, const SuperMatrix& U, const JetSpec& spec) {
    require(U, Parity::Odd, plus ? "U+" : "U-");
    return scal(spec, I) * (mat_derive(D(plus), U, spec) - U * U);
}

SuperMatrix build_w_from_uv(bool plus, const SuperMatrix& U, const SuperMatrix& V, const JetSpec& spec) {
    require(U, Parity::Odd, plus ? "U+" : "U-");
    require(V, Parity::Even, plus ? "V+" : "V-");
    return U + scal(spec, I) * scalar_star(SuperFraction(spec.theta(plus)), V);
}

SpectralTriple build_triple(JetSpecPtr spec, SuperMatrix Uplus, SuperMatrix Uminus) {
    SpectralTriple t;
    t.spec = spec;
    t.Vplus = build_v_from_u(true, Uplus, *spec);
    t.Vminus = build_v_from_u(false, Uminus, *spec);
    t.Wplus = build_w_from_uv(true, Uplus, t.Vplus, *spec);
    t.Wminus = build_w_from_uv(false, Uminus, t.Vminus, *spec);
    t.Uplus = std::move(Uplus);
    t.Uminus = std::move(Uminus);
    return t;
}

SuperMatrix zcc_fermionic(const SuperMatrix& Up, const SuperMatrix& Um, const JetSpec& spec, RewriteTrace* trace) {
    require(Up, Parity::Odd, "U+");
    require(Um, Parity::Odd, "U-");
    return mat_derive(DerivKind::Dplus, Um, spec, trace) + mat_derive(DerivKind::Dminus, Up, spec, trace) -
           anticommutator(Up, Um);
}

SuperMatrix zcc_x(const SuperMatrix& Vp, const SuperMatrix& Vm, const JetSpec& spec, RewriteTrace* trace) {
    require(Vp, Parity::Even, "V+");
    require(Vm, Parity::Even, "V-");
    return mat_derive(DerivKind::DxPlus, Vm, spec, trace) - mat_derive(DerivKind::DxMinus, Vp, spec, trace) +
           commutator(Vm, Vp);
}

SuperMatrix zcc_theta(const SuperMatrix& Wp, const SuperMatrix& Wm, const JetSpec& spec, RewriteTrace* trace) {
    require(Wp, Parity::Odd, "W+");
    require(Wm, Parity::Odd, "W-");
    return mat_derive(DerivKind::DthetaPlus, Wm, spec, trace) +
           mat_derive(DerivKind::DthetaMinus, Wp, spec, trace) - anticommutator(Wp, Wm);
}

ZccThetaDecomposition decompose_zcc_theta(const SpectralTriple& t) {
    const JetSpec& spec = *t.spec;
    ZccThetaDecomposition d;
    d.total = zcc_theta(t.Wplus, t.Wminus, spec);
    d.omega = zcc_fermionic(t.Uplus, t.Uminus, spec);
    d.mixed_plus = mat_derive(DerivKind::DxPlus, t.Uminus, spec) - mat_derive(DerivKind::Dminus, t.Vplus, spec) +
                   commutator(t.Uminus, t.Vplus);
    d.mixed_minus = mat_derive(DerivKind::DxMinus, t.Uplus, spec) - mat_derive(DerivKind::Dplus, t.Vminus, spec) +
                    commutator(t.Uplus, t.Vminus);
    d.x_part = mat_derive(DerivKind::DxMinus, t.Vplus, spec) - mat_derive(DerivKind::DxPlus, t.Vminus, spec) +
               commutator(t.Vplus, t.Vminus);
    SuperFraction tp = t.theta(true), tm = t.theta(false), i = scal(spec, I);
    SuperMatrix sum = d.omega + i * scalar_star(tp, d.mixed_plus) + i * scalar_star(tm, d.mixed_minus) +
                      (tp * tm) * d.x_part;
    d.assembly_residual = d.total - sum;
    return d;
}

ThetaComponents theta_components(const SuperMatrix& m, const JetSpec& spec) {
    const CatalogPtr& cat = spec.catalog();
    const size_t gp = spec.layout().theta_plus, gm = spec.layout().theta_minus;
    ThetaComponents out{SuperMatrix(cat, m.m(), m.n()), SuperMatrix(cat, m.m(), m.n()),
                        SuperMatrix(cat, m.m(), m.n()), SuperMatrix(cat, m.m(), m.n())};
    const SuperExpr tp = spec.theta(true), tm = spec.theta(false);
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) {
            const SuperFraction& f = m(i, j);
            const SuperExpr& den = f.den();
            if (!den.strip_left(gp).is_zero() || !den.strip_left(gm).is_zero())
                throw Error(ErrorKind::StructuralFailure, "theta split needs theta-free denominators");
            const SuperExpr& e = f.num();
            SuperExpr c = e.strip_left(gp);   // e = a + th_p c
            SuperExpr a = e - tp * c;
            SuperExpr c3 = c.strip_left(gm);  // c = c1 + th_m c3
            SuperExpr c1 = c - tm * c3;
            SuperExpr a2 = a.strip_left(gm);  // a = a0 + th_m a2
            SuperExpr a0 = a - tm * a2;
            // th_p c1 = i th_p E_ii x  =>  x = -i E_ii c1
            Coeff sgn = Coeff(-m.grade_sign(i)) * I;
            auto frac = [&](const SuperExpr& num) {
                return f.is_polynomial() ? SuperFraction(num) : SuperFraction(num, den);
            };
            out.scalar.at(i, j) = frac(a0);
            out.plus.at(i, j) = frac(sgn * c1);
            out.minus.at(i, j) = frac(sgn * a2);
            out.both.at(i, j) = frac(c3);
        }
    return out;
}

LaxResidual lax_residual(const SpectralTriple& t, const SuperMatrix& omega) {
    const JetSpec& spec = *t.spec;
    return {mat_derive(DerivKind::Dplus, omega, spec) + graded_bracket(omega, t.Uplus),
            mat_derive(DerivKind::Dminus, omega, spec) + graded_bracket(omega, t.Uminus)};
}

SuperMatrix omega_long_identity_residual(const SuperMatrix& Up, const SuperMatrix& Um, const JetSpec& spec) {
    SuperMatrix W = zcc_fermionic(Up, Um, spec);
    SuperMatrix DpW = mat_derive(DerivKind::Dplus, W, spec), DmW = mat_derive(DerivKind::Dminus, W, spec);
    SuperMatrix lhs = mat_derive(DerivKind::Dplus, DmW, spec) + anticommutator(DpW, Um) - anticommutator(DmW, Up) +
                      commutator(mat_derive(DerivKind::Dminus, Up, spec), W) + Um * W * Up - Up * W * Um +
                      W * Up * Um - Um * Up * W;
    SuperMatrix Vp = build_v_from_u(true, Up, spec), Vm = build_v_from_u(false, Um, spec);
    return lhs - zcc_x(Vp, Vm, spec);
}

SuperMatrix random_odd_matrix(const JetSpec& spec, int m, int n, std::mt19937_64& rng, const RandomExprOptions& opt) {
    SuperMatrix r(spec.catalog(), m, n);
    for (int i = 0; i < r.size(); ++i)
        for (int j = 0; j < r.size(); ++j) {
            Parity want = r.lower(i) == r.lower(j) ? Parity::Odd : Parity::Even;
            r.at(i, j) = SuperFraction(random_field_expr(spec, rng, opt).part(want));
        }
    return r;
}

} // namespace superfg
