#include "superfg/immersion.hpp"

#include <map>
#include <optional>

namespace superfg {

const char* sector_name(Sector s) { return s == Sector::Bosonic ? "bosonic" : "fermionic"; }

namespace {

const Coeff I = Coeff::imag_unit();

SuperFraction scal(const JetSpec& spec, const Coeff& c) { return SuperFraction(SuperExpr::constant(spec.catalog(), c)); }

DerivKind D(bool plus) { return plus ? DerivKind::Dplus : DerivKind::Dminus; }
DerivKind Dx(bool plus) { return plus ? DerivKind::DxPlus : DerivKind::DxMinus; }
DerivKind Dth(bool plus) { return plus ? DerivKind::DthetaPlus : DerivKind::DthetaMinus; }

void require(const SuperMatrix& m, Parity p, const std::string& what) {
    if (!m.fits(p))
        throw Error(ErrorKind::ParityError, what + " must be " + parity_name(p) + ", got " + parity_name(m.parity()));
}

std::vector<std::pair<SuperExpr, DerivKind>> as_terms(const DerivationOp& op, const JetSpec& spec) {
    if (op.kind != DerivKind::Combo) return {{spec.one(), op.kind}};
    return op.terms;
}

// {T,K} or [T,K] for basic kinds, as coeff*kind; nullopt when it vanishes.
std::optional<std::pair<Coeff, DerivKind>> basic_bracket(DerivKind T, DerivKind K) {
    using DK = DerivKind;
    if (deriv_parity(T) != Parity::Odd || deriv_parity(K) != Parity::Odd) return std::nullopt;
    bool pt = is_plus(T), pk = is_plus(K);
    if (pt != pk) return std::nullopt;
    bool tD = T == DK::Dplus || T == DK::Dminus, kD = K == DK::Dplus || K == DK::Dminus;
    DK x = pt ? DK::DxPlus : DK::DxMinus;
    if (tD && kD) return std::make_pair(Coeff(0, -2), x); // {D,D} = 2D² = -2i Dx
    if (tD != kD) return std::make_pair(Coeff(0, -1), x); // {D, Dθ} = -i Dx
    return std::nullopt;                                  // {Dθ, Dθ} = 0
}

const SuperMatrix& potential(const SpectralTriple& t, DerivKind k) {
    switch (k) {
    case DerivKind::Dplus: return t.Uplus;
    case DerivKind::Dminus: return t.Uminus;
    case DerivKind::DxPlus: return t.Vplus;
    case DerivKind::DxMinus: return t.Vminus;
    case DerivKind::DthetaPlus: return t.Wplus;
    case DerivKind::DthetaMinus: return t.Wminus;
    default: break;
    }
    throw Error(ErrorKind::ConfigError, std::string("no potential for ") + deriv_name(k));
}

// (Σ c_k K_k)Ψ Ψ⁻¹ = Σ c_k ⋆ P(K_k)
SuperMatrix resolve_on_psi(const DerivationOp& op, const SpectralTriple& t) {
    SuperMatrix r(t.spec->catalog(), t.Uplus.m(), t.Uplus.n());
    for (const auto& [c, k] : as_terms(op, *t.spec)) r += scalar_star(SuperFraction(c), potential(t, k));
    return r;
}

} // namespace

void DeformationMatrices::check_parity() const {
    const char* names[] = {"A+", "A-", "B+", "B-", "C+", "C-"};
    const SuperMatrix* ms[] = {&Aplus, &Aminus, &Bplus, &Bminus, &Cplus, &Cminus};
    for (int k = 0; k < 6; ++k)
        require(*ms[k], k / 2 == 1 ? b_parity(sector) : a_parity(sector),
                std::string(sector_name(sector)) + " " + names[k]);
}

DeformationMatrices build_sym_tafel(const SpectralTriple& t, const SuperFraction& beta, Sector sector) {
    Parity want = sector == Sector::Bosonic ? Parity::Even : Parity::Odd;
    if (!beta.has_parity(want))
        throw Error(ErrorKind::ParityError, std::string("Sym-Tafel beta must be ") + parity_name(want) +
                                                " in the " + sector_name(sector) + " sector");
    const JetSpec& spec = *t.spec;
    auto f = [&](const SuperMatrix& P) { return scalar_star(beta, mat_derive(DerivKind::Dlambda, P, spec)); };
    DeformationMatrices d{sector, f(t.Uplus), f(t.Uminus), f(t.Vplus), f(t.Vminus), f(t.Wplus), f(t.Wminus)};
    d.check_parity();
    return d;
}

DeformationMatrices build_gauge(const SpectralTriple& t, const SuperMatrix& S, Sector sector) {
    const JetSpec& spec = *t.spec;
    bool bos = sector == Sector::Bosonic;
    require(S, bos ? Parity::Even : Parity::Odd, std::string(sector_name(sector)) + " gauge S");
    DeformationMatrices d;
    d.sector = sector;
    for (bool plus : {true, false}) {
        SuperMatrix A = bos ? mat_derive(D(plus), S, spec) + commutator(S, t.U(plus))
                            : -mat_derive(D(plus), S, spec) + anticommutator(S, t.U(plus));
        SuperMatrix B = mat_derive(Dx(plus), S, spec) + commutator(S, t.V(plus));
        SuperMatrix C = bos ? mat_derive(Dth(plus), S, spec) + commutator(S, t.W(plus))
                            : -mat_derive(Dth(plus), S, spec) + anticommutator(S, t.W(plus));
        (plus ? d.Aplus : d.Aminus) = std::move(A);
        (plus ? d.Bplus : d.Bminus) = std::move(B);
        (plus ? d.Cplus : d.Cminus) = std::move(C);
    }
    d.check_parity();
    return d;
}

DerivationOp simplify(const DerivationOp& op) {
    if (op.kind != DerivKind::Combo) return op;
    std::map<int, SuperExpr> acc;
    for (const auto& [c, k] : op.terms) {
        auto it = acc.find(static_cast<int>(k));
        if (it == acc.end()) acc.emplace(static_cast<int>(k), c);
        else it->second += c;
    }
    std::vector<std::pair<SuperExpr, DerivKind>> t;
    for (auto& [k, c] : acc)
        if (!c.is_zero()) t.emplace_back(c, static_cast<DerivKind>(k));
    return DerivationOp::combo(std::move(t));
}

DerivationOp derivation_bracket(DerivKind T, const DerivationOp& Q, const JetSpec& spec) {
    if (T == DerivKind::Combo) throw Error(ErrorKind::ConfigError, "bracket needs a basic derivation on the left");
    std::vector<std::pair<SuperExpr, DerivKind>> out;
    bool todd = deriv_parity(T) == Parity::Odd;
    for (const auto& [c, K] : as_terms(Q, spec)) {
        // [T, cK} = T(c) K + (-1)^{|T||c|} c [T, K}
        SuperExpr tc = apply_derivation(T, c, spec);
        if (!tc.is_zero()) out.emplace_back(tc, K);
        if (auto b = basic_bracket(T, K)) {
            Parity pc = c.parity();
            if (pc == Parity::Heterogeneous)
                throw Error(ErrorKind::ParityError, "bracket with a heterogeneous coefficient");
            Coeff sgn = (todd && pc == Parity::Odd) ? Coeff(-1) : Coeff(1);
            out.emplace_back(sgn * b->first * c, b->second);
        }
    }
    return simplify(DerivationOp::combo(std::move(out)));
}

ScreenResult commutation_screen(const DerivationOp& Q, const JetSpec& spec, int trials, uint64_t seed) {
    ScreenResult r;
    Parity pq = Q.parity();
    std::mt19937_64 rng(seed);
    RandomExprOptions opt;
    opt.max_jet = 3;
    for (int t = 0; t < trials && r.passed; ++t) {
        SuperExpr e0 = random_field_expr(spec, rng, opt);
        for (Parity pe : {Parity::Even, Parity::Odd}) {
            SuperExpr e = e0.part(pe);
            for (bool plus : {true, false}) {
                // [D, Q} e = D(Q e) - (-1)^{|Q|} Q(D e)
                SuperExpr lhs = apply_derivation(D(plus), apply_derivation(Q, e, spec), spec);
                SuperExpr rhs = apply_derivation(Q, apply_derivation(D(plus), e, spec), spec);
                SuperExpr res = pq == Parity::Odd ? lhs + rhs : lhs - rhs;
                if (!res.is_zero() && r.passed) {
                    r.passed = false;
                    r.detail = std::string("[") + (plus ? "D+" : "D-") + ", " + Q.to_string() + "} acting on " +
                               e.to_string() + " gives " + res.to_string();
                }
            }
        }
    }
    return r;
}

DeformationMatrices build_symmetry(const SpectralTriple& t, const DerivationOp& Q, Sector sector, int screen_trials,
                                   uint64_t seed) {
    const JetSpec& spec = *t.spec;
    Parity pq = Q.parity();
    Parity want = sector == Sector::Bosonic ? Parity::Even : Parity::Odd;
    if (pq != want && !Q.is_zero())
        throw Error(ErrorKind::ParityError, std::string("symmetry generator must be ") + parity_name(want) +
                                                " in the " + sector_name(sector) + " sector");
    ScreenResult sc = commutation_screen(Q, spec, screen_trials, seed);
    if (!sc.passed) throw Error(ErrorKind::CommutationScreen, sc.detail);
    DeformationMatrices d;
    d.sector = sector;
    auto term = [&](DerivKind T, const SuperMatrix& P) {
        return mat_derive(Q, P, spec) - resolve_on_psi(derivation_bracket(T, Q, spec), t);
    };
    for (bool plus : {true, false}) {
        (plus ? d.Aplus : d.Aminus) = term(D(plus), t.U(plus));
        (plus ? d.Bplus : d.Bminus) = term(Dx(plus), t.V(plus));
        (plus ? d.Cplus : d.Cminus) = term(Dth(plus), t.W(plus));
    }
    d.check_parity();
    return d;
}

BC derive_bc_from_a(bool plus, const SuperMatrix& A, const SpectralTriple& t, Sector sector) {
    const JetSpec& spec = *t.spec;
    require(A, a_parity(sector), std::string(sector_name(sector)) + (plus ? " A+" : " A-"));
    SuperFraction i = scal(spec, I), th = t.theta(plus);
    BC r;
    if (sector == Sector::Bosonic) {
        r.B = i * (mat_derive(D(plus), A, spec) - anticommutator(t.U(plus), A));
        r.C = A + i * scalar_star(th, r.B);
    } else {
        r.B = scal(spec, -I) * (mat_derive(D(plus), A, spec) + commutator(A, t.U(plus)));
        r.C = A - i * scalar_star(th, r.B);
    }
    return r;
}

DeformationResiduals deformation_residuals(const DeformationMatrices& d, const SpectralTriple& t) {
    const JetSpec& spec = *t.spec;
    using K = DerivKind;
    DeformationResiduals r;
    r.fermionic = mat_derive(K::Dplus, d.Aminus, spec) + mat_derive(K::Dminus, d.Aplus, spec);
    r.x = mat_derive(K::DxPlus, d.Bminus, spec) - mat_derive(K::DxMinus, d.Bplus, spec) +
          commutator(d.Bminus, t.Vplus) + commutator(t.Vminus, d.Bplus);
    r.theta = mat_derive(K::DthetaPlus, d.Cminus, spec) + mat_derive(K::DthetaMinus, d.Cplus, spec);
    if (d.sector == Sector::Bosonic) {
        r.fermionic -= anticommutator(d.Aplus, t.Uminus) + anticommutator(d.Aminus, t.Uplus);
        r.theta -= anticommutator(d.Cplus, t.Wminus) + anticommutator(d.Cminus, t.Wplus);
    } else {
        r.fermionic += commutator(d.Aplus, t.Uminus) + commutator(d.Aminus, t.Uplus);
        r.theta += commutator(d.Cminus, t.Wplus) + commutator(d.Cplus, t.Wminus);
    }
    return r;
}

DeformationMatrices superpose(const std::vector<DeformationMatrices>& parts) {
    if (parts.empty()) throw Error(ErrorKind::ConfigError, "empty superposition");
    DeformationMatrices s = parts.front();
    for (size_t k = 1; k < parts.size(); ++k) {
        const auto& p = parts[k];
        if (p.sector != s.sector) throw Error(ErrorKind::ParityError, "superposition mixes sectors");
        s.Aplus += p.Aplus;
        s.Aminus += p.Aminus;
        s.Bplus += p.Bplus;
        s.Bminus += p.Bminus;
        s.Cplus += p.Cplus;
        s.Cminus += p.Cminus;
    }
    return s;
}

} // namespace superfg
