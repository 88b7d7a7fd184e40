#pragma once

// Bosonic and fermionic deformation matrices (A±, B±, C±) of the immersion
// and their determining equations.

#include <vector>

#include "superfg/integrability.hpp"

namespace superfg {

enum class Sector { Bosonic, Fermionic };
const char* sector_name(Sector s);
// Bosonic sector: A, C odd and B even; fermionic: the reverse.
inline Parity a_parity(Sector s) { return s == Sector::Bosonic ? Parity::Odd : Parity::Even; }
inline Parity b_parity(Sector s) { return flip(a_parity(s)); }

struct DeformationMatrices {
    Sector sector = Sector::Bosonic;
    SuperMatrix Aplus, Aminus, Bplus, Bminus, Cplus, Cminus;

    const SuperMatrix& A(bool plus) const { return plus ? Aplus : Aminus; }
    const SuperMatrix& B(bool plus) const { return plus ? Bplus : Bminus; }
    const SuperMatrix& C(bool plus) const { return plus ? Cplus : Cminus; }
    // Throws ParityError naming the first matrix that breaks the sector pattern.
    void check_parity() const;
};

// A± = β⋆∂λU±, B± = β⋆∂λV±, C± = β⋆∂λW±
DeformationMatrices build_sym_tafel(const SpectralTriple& t, const SuperFraction& beta, Sector sector);

// bosonic:   A = D S + [S,U],  B = Dx S + [S,V], C = Dθ S + [S,W]
// fermionic: A = -D S + {S,U}, B = Dx S + [S,V], C = -Dθ S + {S,W}
DeformationMatrices build_gauge(const SpectralTriple& t, const SuperMatrix& S, Sector sector);

// Graded bracket [T, Q} of a basic derivation with a Combo, as a Combo with
// like terms collected. Dlambda brackets are zero; Combo T is rejected.
DerivationOp derivation_bracket(DerivKind T, const DerivationOp& Q, const JetSpec& spec);
DerivationOp simplify(const DerivationOp& op);

struct ScreenResult {
    bool passed = true;
    std::string detail; // offending direction and expression on failure
};
// Q must graded-commute with D+ and D- on random expressions.
ScreenResult commutation_screen(const DerivationOp& Q, const JetSpec& spec, int trials = 20, uint64_t seed = 1);

// A± = Q(U±) - [D±,Q}ΨΨ⁻¹ and likewise for B (Dx±, V±) and C (Dθ±, W±); the
// bracket terms are resolved through DΨ = UΨ, DxΨ = VΨ, DθΨ = WΨ.
// Throws CommutationScreen when Q fails the screen.
DeformationMatrices build_symmetry(const SpectralTriple& t, const DerivationOp& Q, Sector sector,
                                   int screen_trials = 20, uint64_t seed = 1);

struct BC {
    SuperMatrix B, C;
};
// bosonic:   B = i(D A - {U, A}),  C = A + iθ⋆B
// fermionic: B = -i(D A + [A, U]), C = A - iθ⋆B
BC derive_bc_from_a(bool plus, const SuperMatrix& A, const SpectralTriple& t, Sector sector);

struct DeformationResiduals {
    SuperMatrix fermionic, x, theta; // the three determining equations
    bool passed() const { return fermionic.is_zero() && x.is_zero() && theta.is_zero(); }
};
DeformationResiduals deformation_residuals(const DeformationMatrices& d, const SpectralTriple& t);

// Componentwise sum; all parts must share one sector.
DeformationMatrices superpose(const std::vector<DeformationMatrices>& parts);

} // namespace superfg
