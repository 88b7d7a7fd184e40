#pragma once

// Model files: field declaration, equation, potentials, normals and
// deformation scenarios with their expected values.
//
//   grading 2 1
//   field
//   param k even invertible
//   equation = -(1/2)*(X - X^-1)
//   let h = (1/2)*s^-1
//   let J_p = D_p + 2*i*th_p*Dx_p
//   potential U_p = h*[[0, 0, i*X], [0, 0, -i*X^-1], [-X^-1, X, 0]]
//   normal N1 = diag(1, -1, 0)
//   check V_p = ...
//   scenario NAME {
//     sector bosonic
//     deformation symmetry Dx_p
//     minus_branch Dx_m
//     normal N1
//     expect g12 = ...
//     expect K undefined b
//     soft expect H = ...
//     zeros g 11 22 13 31
//   }
//
// Expressions: + - * / ^ (integer exponents), parentheses, rationals, i,
// generators, let names, [[...]] and diag(...) matrices, derivations D_p,
// D_m, Dx_p, Dx_m, Dth_p, Dth_m, Dlam and their combinations, applied as
// calls, including to the field itself: Dx_p(phi).

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superfg/immersion.hpp"

namespace superfg {

enum class DeformationKind { SymTafel, Symmetry, Gauge };
const char* deformation_kind_name(DeformationKind k);

struct Fixture {
    enum class Kind { Scalar, Matrix, Undefined };
    std::string quantity; // A_p .. C_m, g11 .. b44, H, K
    Kind kind = Kind::Scalar;
    SuperFraction scalar;
    SuperMatrix matrix;
    std::string undefined_which; // "g" or "b"
    bool soft = false;
    int line = 0;
};

struct ZeroPattern {
    char form = 'g';
    std::vector<std::pair<int, int>> zeros;
    int line = 0;
};

struct ScenarioDef {
    std::string name;
    int line = 0;
    Sector sector = Sector::Bosonic;
    DeformationKind kind = DeformationKind::SymTafel;
    SuperFraction beta;
    DerivationOp Q;
    std::optional<DerivationOp> Q_minus;
    SuperMatrix S;
    std::string normal_name;
    SuperMatrix N0;
    std::vector<Fixture> fixtures;
    std::vector<ZeroPattern> zeros;
};

struct ModelCheck {
    std::string name; // U_p, U_m, V_p, V_m, W_p, W_m
    SuperMatrix expected;
    int line = 0;
};

struct ModelFile {
    FieldCatalog fields;
    JetSpecPtr spec;
    int m = 2, n = 1;
    SuperMatrix Uplus, Uminus;
    std::map<std::string, SuperMatrix> normals;
    std::vector<ModelCheck> checks;
    std::vector<ScenarioDef> scenarios;

    const CatalogPtr& catalog() const { return fields.catalog; }
    // Throws UnknownScenario.
    const ScenarioDef& scenario(std::string_view name) const;
};

struct ParseOptions {
    int max_jet_order = 4;
};

// Throws SyntaxError or LocatedError (UnknownGenerator, ParityError, ...)
// carrying the line and column of the offending token.
ModelFile parse_model(std::string_view text, const ParseOptions& opt = {});

// A single scalar expression against an existing catalog; derivation calls
// need `spec`.
SuperFraction parse_scalar(std::string_view text, const CatalogPtr& cat, const JetSpec* spec = nullptr);

} // namespace superfg
