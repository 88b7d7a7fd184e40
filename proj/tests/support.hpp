#pragma once

// Hand-entered SSGE model shared by the layer tests, independent of the
// bundled model file.

#include <memory>
#include <ostream>

#include "superfg/integrability.hpp"

namespace testing_support {

using namespace superfg;

inline const Coeff I = Coeff::imag_unit();

struct Model {
    JetSpecPtr spec;
    SuperExpr X, Xi, s, si, tp, tm, P1, M1, P2, M2;
    SuperFraction f(const SuperExpr& e) const { return SuperFraction(e); }
    SuperFraction z() const { return SuperFraction(spec->catalog()); }
    SuperExpr k(const Coeff& c) const { return SuperExpr::constant(spec->catalog(), c); }
    SuperMatrix mat(std::vector<std::vector<SuperExpr>> r) const {
        std::vector<std::vector<SuperFraction>> q;
        for (auto& row : r) {
            q.emplace_back();
            for (auto& e : row) q.back().emplace_back(e);
        }
        return SuperMatrix::from_rows(spec->catalog(), 2, 1, q);
    }
    SuperMatrix diag(std::vector<SuperExpr> d) const {
        std::vector<SuperFraction> q(d.begin(), d.end());
        return SuperMatrix::diag(spec->catalog(), 2, 1, q);
    }
};

inline const Model& model() {
    static Model m = [] {
        Model m;
        FieldCatalog fc = make_field_catalog();
        auto g = [&](const char* n, int k = 1) { return SuperExpr::generator(fc.catalog, n, k); };
        // sign of the equation matched to the twisted matrix calculus
        SuperExpr rhs = Coeff::rational(-1, 2) * (g("X") - g("X", -1));
        m.spec = std::make_shared<JetSpec>(fc, rhs);
        m.X = g("X"), m.Xi = g("X", -1), m.s = g("s"), m.si = g("s", -1);
        m.tp = g("th_p"), m.tm = g("th_m"), m.P1 = g("Dp1"), m.M1 = g("Dm1"), m.P2 = g("Dp2"), m.M2 = g("Dm2");
        return m;
    }();
    return m;
}

inline const SpectralTriple& ssge() {
    static SpectralTriple t = [] {
        const Model& m = model();
        SuperExpr h = Coeff::rational(1, 2) * m.si, O = m.k(0);
        SuperMatrix Up = m.mat({{O, O, I * (h * m.X)}, {O, O, -I * (h * m.Xi)}, {-(h * m.Xi), h * m.X, O}});
        SuperMatrix Um = m.mat({{I * m.M1, O, -I * m.s}, {O, -I * m.M1, I * m.s}, {-m.s, m.s, O}});
        return build_triple(m.spec, Up, Um);
    }();
    return t;
}

// J+ = D+ + 2iθ+Dx+
inline DerivationOp J_plus() {
    const Model& m = model();
    return DerivationOp::combo({{m.k(1), DerivKind::Dplus}, {Coeff(0, 2) * m.tp, DerivKind::DxPlus}});
}

} // namespace testing_support

namespace superfg {
inline void PrintTo(const SuperFraction& f, std::ostream* os) { *os << f.to_string(); }
inline void PrintTo(const SuperExpr& e, std::ostream* os) { *os << e.to_string(); }
inline void PrintTo(const SuperMatrix& m, std::ostream* os) { *os << m.to_string(); }
} // namespace superfg
