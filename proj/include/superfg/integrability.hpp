#pragma once

// Matrix-level derivations and the compatibility conditions linking the
// fermionic, x± and θ± spectral problems.

#include <memory>

#include "superfg/superspace.hpp"
#include "superfg/supermatrix.hpp"

namespace superfg {

using JetSpecPtr = std::shared_ptr<const JetSpec>;

// An operator of parity p acts on a graded matrix as E^p * (entrywise action).
SuperMatrix mat_derive(const DerivationOp& op, const SuperMatrix& m, const JetSpec& spec,
                       RewriteTrace* trace = nullptr);
SuperMatrix mat_derive(DerivKind k, const SuperMatrix& m, const JetSpec& spec,
                       RewriteTrace* trace = nullptr);

struct SpectralTriple {
    JetSpecPtr spec;
    SuperMatrix Uplus, Uminus, Vplus, Vminus, Wplus, Wminus;

    const SuperMatrix& U(bool plus) const { return plus ? Uplus : Uminus; }
    const SuperMatrix& V(bool plus) const { return plus ? Vplus : Vminus; }
    const SuperMatrix& W(bool plus) const { return plus ? Wplus : Wminus; }
    SuperFraction theta(bool plus) const { return SuperFraction(spec->theta(plus)); }
};

// V± = i(D±U± - U±²)
SuperMatrix build_v_from_u(bool plus, const SuperMatrix& U, const JetSpec& spec);
// W± = U± + iθ±⋆V±
SuperMatrix build_w_from_uv(bool plus, const SuperMatrix& U, const SuperMatrix& V, const JetSpec& spec);
SpectralTriple build_triple(JetSpecPtr spec, SuperMatrix Uplus, SuperMatrix Uminus);

// Ω = D+U- + D-U+ - {U+, U-}
SuperMatrix zcc_fermionic(const SuperMatrix& Up, const SuperMatrix& Um, const JetSpec& spec,
                          RewriteTrace* trace = nullptr);
// Dx+V- - Dx-V+ + [V-, V+]
SuperMatrix zcc_x(const SuperMatrix& Vp, const SuperMatrix& Vm, const JetSpec& spec,
                  RewriteTrace* trace = nullptr);
// Dθ+W- + Dθ-W+ - {W+, W-}
SuperMatrix zcc_theta(const SuperMatrix& Wp, const SuperMatrix& Wm, const JetSpec& spec,
                      RewriteTrace* trace = nullptr);

// zcc_theta(W) = Ω + iθ+⋆mixed_plus + iθ-⋆mixed_minus + θ+θ-·x_part, where
//   mixed_plus  = Dx+U- - D-V+ + [U-, V+]
//   mixed_minus = Dx-U+ - D+V- + [U+, V-]
//   x_part      = Dx-V+ - Dx+V- + [V+, V-]   (= -zcc_x)
struct ZccThetaDecomposition {
    SuperMatrix total, omega, mixed_plus, mixed_minus, x_part;
    SuperMatrix assembly_residual; // total minus the reassembled sum
};
ZccThetaDecomposition decompose_zcc_theta(const SpectralTriple& t);

// Split M = c0 + iθ+⋆c1 + iθ-⋆c2 + θ+θ-·c3 with θ-free c_k (entries must have
// θ-free denominators).
struct ThetaComponents {
    SuperMatrix scalar, plus, minus, both;
};
ThetaComponents theta_components(const SuperMatrix& m, const JetSpec& spec);

struct LaxResidual {
    SuperMatrix plus, minus; // D±Ω + [Ω, U±]
};
LaxResidual lax_residual(const SpectralTriple& t, const SuperMatrix& omega);

// D+D-Ω + {D+Ω,U-} - {D-Ω,U+} + [D-U+,Ω] + U-ΩU+ - U+ΩU- + ΩU+U- - U-U+Ω - zcc_x(V(U)),
// which vanishes identically for any odd U±.
SuperMatrix omega_long_identity_residual(const SuperMatrix& Up, const SuperMatrix& Um, const JetSpec& spec);

// Random odd supermatrix with jet-polynomial entries, for identity testing.
SuperMatrix random_odd_matrix(const JetSpec& spec, int m, int n, std::mt19937_64& rng,
                              const RandomExprOptions& opt = {});

} // namespace superfg
