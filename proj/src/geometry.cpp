#include "superfg/geometry.hpp"

namespace superfg {

namespace {

const Coeff I = Coeff::imag_unit();

SuperFraction scal(const CatalogPtr& cat, const Coeff& c) { return SuperFraction(SuperExpr::constant(cat, c)); }

DerivKind direction(int j) {
    static const DerivKind k[] = {DerivKind::DxPlus, DerivKind::DxMinus, DerivKind::DthetaPlus,
                                  DerivKind::DthetaMinus};
    if (j < 1 || j > 4) throw Error(ErrorKind::ConfigError, "direction index must be 1..4");
    return k[j - 1];
}

const SuperMatrix& connection(int j, const SpectralTriple& t) {
    const SuperMatrix* p[] = {&t.Vplus, &t.Vminus, &t.Wplus, &t.Wminus};
    return *p[j - 1];
}

void require_homogeneous(const SuperMatrix& X, const char* what) {
    if (X.parity() == Parity::Heterogeneous) throw Error(ErrorKind::ParityError, std::string(what) + " is heterogeneous");
}

FundamentalForm second_form_raw(const TangentFrame& frame, const SuperMatrix& N0, const SpectralTriple& t) {
    FundamentalForm b('b', frame.sector, t.spec->catalog());
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            b.at(i, j) = killing_form(dressed_covariant_derivative(j, frame[i], t), N0);
    return b;
}

struct Recorder {
    ReductionReport& r;
    const FundamentalForm& f;
    void operator()(int i, int j, const SuperFraction& expected) const {
        r.checks.push_back({FundamentalForm::label(f.symbol, i, j), f(i, j) - expected});
    }
};

} // namespace

TangentFrame make_frame(const DeformationMatrices& d) {
    d.check_parity();
    TangentFrame f;
    f.sector = d.sector;
    if (d.sector == Sector::Bosonic) f.X = {d.Bplus, d.Bminus, d.Cplus, d.Cminus};
    else f.X = {d.Bplus, d.Bminus, -d.Cplus, -d.Cminus};
    return f;
}

SuperMatrix dressed_covariant_derivative(int j, const SuperMatrix& X, const SpectralTriple& t) {
    DerivKind k = direction(j);
    require_homogeneous(X, "covariant derivative argument");
    return mat_derive(k, X, *t.spec) - graded_bracket(connection(j, t), X);
}

SuperMatrix dressed_fermionic_derivative(bool plus, const SuperMatrix& X, const SpectralTriple& t) {
    require_homogeneous(X, "covariant derivative argument");
    return mat_derive(plus ? DerivKind::Dplus : DerivKind::Dminus, X, *t.spec) - graded_bracket(t.U(plus), X);
}

FundamentalForm::FundamentalForm(char symbol, Sector sector, const CatalogPtr& cat)
    : symbol(symbol), sector(sector), c(16, SuperFraction(cat)) {}

bool FundamentalForm::is_zero() const {
    for (const auto& x : c)
        if (!x.is_zero()) return false;
    return true;
}

SuperMatrix FundamentalForm::matrix() const {
    std::vector<std::vector<SuperFraction>> rows(4);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) rows[i - 1].push_back((*this)(i, j));
    return SuperMatrix::from_rows(c.front().catalog(), 2, 2, rows);
}

std::string FundamentalForm::label(char symbol, int i, int j) {
    return std::string(1, symbol) + std::to_string(i) + std::to_string(j);
}

std::string FundamentalForm::to_string() const {
    std::string s;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) s += label(symbol, i, j) + " = " + (*this)(i, j).to_string() + "\n";
    return s;
}

std::vector<std::string> pattern_violations(const FundamentalForm& f, const TangentFrame& frame) {
    std::vector<std::string> out;
    auto lbl = [&](int i, int j) { return FundamentalForm::label(f.symbol, i, j); };
    if (f.symbol == 'g') {
        for (int i = 1; i <= 4; ++i) {
            bool oi = frame.parity(i) == Parity::Odd;
            if (oi && !f(i, i).is_zero()) out.push_back(lbl(i, i) + " must vanish");
            for (int j = i + 1; j <= 4; ++j) {
                bool anti = oi && frame.parity(j) == Parity::Odd;
                SuperFraction r = anti ? f(i, j) + f(j, i) : f(i, j) - f(j, i);
                if (!r.is_zero())
                    out.push_back(lbl(i, j) + (anti ? " must equal -" : " must equal ") + lbl(j, i));
            }
        }
    } else if (f.sector == Sector::Bosonic) {
        if (!f(3, 3).is_zero()) out.push_back(lbl(3, 3) + " must vanish");
        if (!f(4, 4).is_zero()) out.push_back(lbl(4, 4) + " must vanish");
        if (!(f(3, 4) + f(4, 3)).is_zero()) out.push_back(lbl(3, 4) + " must equal -" + lbl(4, 3));
    }
    return out;
}

FundamentalForm metric_coefficients(const TangentFrame& frame) {
    const CatalogPtr& cat = frame.X[0].catalog();
    FundamentalForm g('g', frame.sector, cat);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) g.at(i, j) = killing_form(frame[i], frame[j]);
    auto v = pattern_violations(g, frame);
    if (!v.empty()) throw Error(ErrorKind::StructuralFailure, "metric pattern: " + v.front());
    return g;
}

NormalCheck check_normal(const TangentFrame& frame, const SuperMatrix& N0) {
    NormalCheck r;
    if (!N0.fits(Parity::Even)) return {false, "N0 must be even"};
    SuperFraction nn = killing_form(N0, N0);
    if (nn != scal(N0.catalog(), 1)) return {false, "<N0, N0> = " + nn.to_string() + ", expected 1"};
    for (int i = 1; i <= 4; ++i) {
        SuperFraction p = killing_form(frame[i], N0);
        if (!p.is_zero()) return {false, "<X" + std::to_string(i) + ", N0> = " + p.to_string()};
    }
    return r;
}

FundamentalForm second_form_coefficients(const TangentFrame& frame, const SuperMatrix& N0, const SpectralTriple& t) {
    NormalCheck nc = check_normal(frame, N0);
    if (!nc.passed) throw Error(ErrorKind::NormalCheckFailed, nc.detail);
    return second_form_unchecked(frame, N0, t);
}

FundamentalForm second_form_unchecked(const TangentFrame& frame, const SuperMatrix& N0, const SpectralTriple& t) {
    FundamentalForm b = second_form_raw(frame, N0, t);
    auto v = pattern_violations(b, frame);
    if (!v.empty()) throw Error(ErrorKind::StructuralFailure, "second form pattern: " + v.front());
    return b;
}

bool ReductionReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    return true;
}

ReductionReport check_metric_reductions(const DeformationMatrices& d, const FundamentalForm& g,
                                        const SpectralTriple& t) {
    if (d.sector != g.sector) throw Error(ErrorKind::WrongSector, "metric and deformation sectors differ");
    const CatalogPtr& cat = t.spec->catalog();
    const SuperFraction i = scal(cat, I), two_i = scal(cat, Coeff(0, 2)), tp = t.theta(true), tm = t.theta(false);
    const SuperMatrix &Ap = d.Aplus, &Am = d.Aminus, &Bp = d.Bplus, &Bm = d.Bminus;
    ReductionReport r;
    Recorder rec{r, g};
    if (d.sector == Sector::Bosonic) {
        rec(1, 3, i * killing_form(dressed_fermionic_derivative(true, Ap, t), Ap) + i * tp * g(1, 1));
        rec(1, 4, killing_form(Bp, Am) + i * tm * g(1, 2));
        rec(2, 3, killing_form(Bm, Ap) + i * tp * g(1, 2));
        rec(2, 4, i * killing_form(dressed_fermionic_derivative(false, Am, t), Am) + i * tm * g(2, 2));
        rec(3, 4, killing_form(Ap, Am) + i * tp * g(1, 4) - i * tm * g(2, 3) + tp * tm * g(1, 2));
    } else {
        rec(1, 3, -killing_form(Bp, Ap));
        rec(1, 4, -killing_form(Bp, Am) - i * tm * g(1, 2));
        rec(2, 3, -killing_form(Bm, Ap) + i * tp * g(1, 2));
        rec(2, 4, -killing_form(Bm, Am));
        rec(3, 3, killing_form(Ap, Ap) + two_i * tp * g(1, 3));
        rec(4, 4, killing_form(Am, Am) + two_i * tm * g(2, 4));
        rec(3, 4, killing_form(Ap, Am) + i * tp * g(1, 4) + i * tm * g(2, 3) - tp * tm * g(1, 2));
    }
    return r;
}

ReductionReport check_second_form_reductions(const DeformationMatrices& d, const FundamentalForm& b,
                                             const SuperMatrix& N0, const SpectralTriple& t) {
    if (d.sector != b.sector) throw Error(ErrorKind::WrongSector, "second form and deformation sectors differ");
    const CatalogPtr& cat = t.spec->catalog();
    const SuperFraction i = scal(cat, I), tp = t.theta(true), tm = t.theta(false);
    // F± = ±A± by sector; the tangents are the dressed derivatives of F.
    const SuperMatrix Fp = d.sector == Sector::Bosonic ? d.Aplus : -d.Aplus;
    const SuperMatrix Fm = d.sector == Sector::Bosonic ? d.Aminus : -d.Aminus;
    auto nab = [&](bool plus, const SuperMatrix& X) { return dressed_fermionic_derivative(plus, X, t); };
    auto kf = [&](const SuperMatrix& X) { return killing_form(X, N0); };
    ReductionReport r;
    Recorder rec{r, b};
    rec(1, 3, i * kf(nab(true, nab(true, Fp))) + i * tp * b(1, 1));
    rec(1, 4, i * kf(nab(true, nab(true, Fm))) + i * tm * b(1, 2));
    rec(2, 3, i * kf(nab(true, nab(false, Fm))) + i * tp * b(1, 2));
    rec(2, 4, i * kf(nab(false, nab(false, Fm))) + i * tm * b(2, 2));
    rec(3, 4, kf(nab(false, Fp)) - i * tp * b(1, 4) + i * tm * b(2, 3) - tp * tm * b(1, 2));
    return r;
}

SuperFraction mean_curvature(const FundamentalForm& g, const FundamentalForm& b) {
    SuperMatrix gi;
    try {
        gi = mat_inverse(g.matrix());
    } catch (const NotInvertible& e) {
        throw NotInvertible("g", std::string("g is not invertible: ") + e.what());
    }
    return scal(gi.catalog(), Coeff::rational(1, 4)) * supertrace(b.matrix() * gi);
}

SuperFraction gaussian_curvature(const FundamentalForm& g, const FundamentalForm& b) {
    if (g.sector != Sector::Bosonic || b.sector != Sector::Bosonic)
        throw Error(ErrorKind::WrongSector, "Gaussian curvature needs a bosonic second form");
    SuperMatrix bm = b.matrix(), gi;
    try {
        gi = mat_inverse(g.matrix());
    } catch (const NotInvertible& e) {
        throw NotInvertible("g", std::string("g is not invertible: ") + e.what());
    }
    try {
        mat_inverse(bm);
    } catch (const NotInvertible& e) {
        throw NotInvertible("b", std::string("b is not invertible: ") + e.what());
    }
    return berezinian(bm * gi);
}

} // namespace superfg
