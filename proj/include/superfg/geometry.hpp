#pragma once

// First and second fundamental forms and curvatures of the immersion,
// computed on dressed tangents: every inner product is conjugation invariant,
// so Ψ never appears.

#include <array>
#include <string>
#include <vector>

#include "superfg/immersion.hpp"

namespace superfg {

// Bosonic: (B+, B-, C+, C-); fermionic: (B+, B-, -C+, -C-).
struct TangentFrame {
    Sector sector = Sector::Bosonic;
    std::array<SuperMatrix, 4> X;

    // Parity of the tangent at 1-based index i.
    Parity parity(int i) const { return i <= 2 ? b_parity(sector) : a_parity(sector); }
    const SuperMatrix& operator[](int i) const { return X.at(i - 1); }
};
TangentFrame make_frame(const DeformationMatrices& d);

// ∇_j X = D_j X - ⟦P_j, X⟧, P = (V+, V-, W+, W-), D = (Dx+, Dx-, Dθ+, Dθ-); j is 1-based.
SuperMatrix dressed_covariant_derivative(int j, const SuperMatrix& X, const SpectralTriple& t);
// ∇± X = D± X - ⟦U±, X⟧
SuperMatrix dressed_fermionic_derivative(bool plus, const SuperMatrix& X, const SpectralTriple& t);

struct FundamentalForm {
    char symbol = 'g';
    Sector sector = Sector::Bosonic;
    std::vector<SuperFraction> c; // row-major 4x4

    FundamentalForm() = default;
    FundamentalForm(char symbol, Sector sector, const CatalogPtr& cat);

    const SuperFraction& operator()(int i, int j) const { return c.at(static_cast<size_t>(4 * (i - 1) + (j - 1))); }
    SuperFraction& at(int i, int j) { return c.at(static_cast<size_t>(4 * (i - 1) + (j - 1))); }
    bool is_zero() const;
    // The coefficients as a (2|2) supermatrix.
    SuperMatrix matrix() const;
    // One "g12 = ..." line per coefficient.
    std::string to_string() const;
    static std::string label(char symbol, int i, int j);
};

// Pattern violations of the form, empty when it has the required structure:
//   g: g_ij = (-1)^{p_i p_j} g_ji and g_ii = 0 for odd tangents
//   b (bosonic): b33 = b44 = 0, b34 = -b43
std::vector<std::string> pattern_violations(const FundamentalForm& f, const TangentFrame& frame);

// g_ij = ⟨X_i, X_j⟩. Throws StructuralFailure if the pattern is broken.
FundamentalForm metric_coefficients(const TangentFrame& frame);

// killing(N0, N0) = 1 and killing(X_i, N0) = 0; the first failing product is named.
struct NormalCheck {
    bool passed = true;
    std::string detail;
};
NormalCheck check_normal(const TangentFrame& frame, const SuperMatrix& N0);

// b_ij = ⟨∇_j X_i, N0⟩. Throws NormalCheckFailed when N0 is not a unit normal.
FundamentalForm second_form_coefficients(const TangentFrame& frame, const SuperMatrix& N0, const SpectralTriple& t);
// Same coefficients with the normal preconditions skipped.
FundamentalForm second_form_unchecked(const TangentFrame& frame, const SuperMatrix& N0, const SpectralTriple& t);

struct ReductionCheck {
    std::string name;
    SuperFraction residual; // coefficient minus its expression through A±
    bool passed() const { return residual.is_zero(); }
};
struct ReductionReport {
    std::vector<ReductionCheck> checks;
    bool passed() const;
};
// Identities expressing the C± (and mixed) coefficients of g through A±, B±.
ReductionReport check_metric_reductions(const DeformationMatrices& d, const FundamentalForm& g,
                                        const SpectralTriple& t);
// Identities expressing b13, b14, b23, b24, b34 through dressed derivatives of A±.
ReductionReport check_second_form_reductions(const DeformationMatrices& d, const FundamentalForm& b,
                                             const SuperMatrix& N0, const SpectralTriple& t);

// H = 1/4 str(b g⁻¹); NotInvertible("g") when g is singular.
SuperFraction mean_curvature(const FundamentalForm& g, const FundamentalForm& b);
// K = sdet(b g⁻¹), bosonic sector only. WrongSector for fermionic forms,
// NotInvertible("g") or NotInvertible("b") for singular forms.
SuperFraction gaussian_curvature(const FundamentalForm& g, const FundamentalForm& b);

} // namespace superfg
