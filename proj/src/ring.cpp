#include "superfg/ring.hpp"

#include <algorithm>
#include <sstream>

namespace superfg {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::CatalogMismatch: return "CatalogMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::ParityError: return "ParityError";
    case ErrorKind::JetOrderOverflow: return "JetOrderOverflow";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::WrongSector: return "WrongSector";
    case ErrorKind::NormalCheckFailed: return "NormalCheckFailed";
    case ErrorKind::StructuralFailure: return "StructuralFailure";
    case ErrorKind::CommutationScreen: return "CommutationScreen";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::InsufficientUnits: return "InsufficientUnits";
    case ErrorKind::ZeroBodyDivision: return "ZeroBodyDivision";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Error";
}

const char* parity_name(Parity p) {
    switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "heterogeneous";
    }
}

// ---- Coeff ----

Coeff Coeff::rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return Coeff(q, 0);
}

Coeff& Coeff::operator+=(const Coeff& o) {
    re += o.re;
    im += o.im;
    return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

Coeff& Coeff::operator*=(const Coeff& o) {
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Coeff Coeff::inverse() const {
    if (is_zero()) throw NotInvertible("coefficient", "division by zero coefficient");
    mpq_class n = re * re + im * im;
    return Coeff(mpq_class(re / n), mpq_class(-im / n));
}

namespace {

std::string rat_str(const mpq_class& q, bool paren) {
    if (q.get_den() == 1) return q.get_num().get_str();
    std::string s = q.get_num().get_str() + "/" + q.get_den().get_str();
    return paren ? "(" + s + ")" : s;
}

// Imaginary part k as "i", "k*i", "(a/b)*i"; k assumed positive unless inner.
std::string imag_str(const mpq_class& k, bool paren) {
    if (k == 1) return "i";
    return rat_str(k, paren) + "*i";
}

} // namespace

std::string Coeff::to_string() const {
    if (sgn(im) == 0) return rat_str(re, true);
    if (sgn(re) == 0) {
        if (sgn(im) < 0) return "-" + imag_str(mpq_class(-im), true);
        return imag_str(im, true);
    }
    std::string s = "(" + rat_str(re, false);
    if (sgn(im) < 0)
        s += " - " + imag_str(mpq_class(-im), false);
    else
        s += " + " + imag_str(im, false);
    return s + ")";
}

// ---- catalog ----

GeneratorCatalog::GeneratorCatalog(std::vector<Generator> gens) : gens_(std::move(gens)) {
    odd_rank_.assign(gens_.size(), -1);
    for (size_t i = 0; i < gens_.size(); ++i) {
        const auto& g = gens_[i];
        if (g.name.empty()) throw Error(ErrorKind::ConfigError, "empty generator name");
        if (!by_name_.emplace(g.name, i).second)
            throw Error(ErrorKind::ConfigError, "duplicate generator '" + g.name + "'");
        if (g.odd && g.invertible)
            throw Error(ErrorKind::ParityError, "odd generator '" + g.name + "' cannot be invertible");
        if (g.odd) {
            odd_rank_[i] = static_cast<int>(odd_index_.size());
            odd_index_.push_back(i);
        }
    }
    if (odd_index_.size() > 64)
        throw Error(ErrorKind::ConfigError, "at most 64 odd generators are supported");
}

std::optional<size_t> GeneratorCatalog::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

size_t GeneratorCatalog::index(std::string_view name) const {
    auto i = find(name);
    if (!i) throw Error(ErrorKind::UnknownGenerator, "unknown generator '" + std::string(name) + "'");
    return *i;
}

bool GeneratorCatalog::same_as(const GeneratorCatalog& o) const {
    if (this == &o) return true;
    if (gens_.size() != o.gens_.size()) return false;
    for (size_t i = 0; i < gens_.size(); ++i) {
        const auto &a = gens_[i], &b = o.gens_[i];
        if (a.name != b.name || a.odd != b.odd || a.invertible != b.invertible) return false;
    }
    return true;
}

CatalogPtr make_catalog(std::vector<Generator> gens) {
    return std::make_shared<const GeneratorCatalog>(std::move(gens));
}

// ---- monomials ----

void Monomial::set(const GeneratorCatalog& cat, size_t i, int k) {
    degree_ += k - e_[i];
    e_[i] = k;
    int r = cat.odd_rank(i);
    if (r >= 0) {
        if (k) odd_ |= (uint64_t{1} << r);
        else odd_ &= ~(uint64_t{1} << r);
    }
}

bool Monomial::degree_zero_all() const {
    return std::all_of(e_.begin(), e_.end(), [](int x) { return x == 0; });
}

std::string Monomial::to_string(const GeneratorCatalog& cat) const {
    std::string s;
    for (size_t i = 0; i < e_.size(); ++i) {
        if (!e_[i]) continue;
        if (!s.empty()) s += "*";
        s += cat[i].name;
        if (e_[i] != 1) s += "^" + std::to_string(e_[i]);
    }
    return s;
}

int mono_mul(const Monomial& a, const Monomial& b, Monomial& out) {
    const uint64_t am = a.odd_, bm = b.odd_;
    if (am & bm) return 0;
    // Each odd factor of b moves left past the odd factors of a ranked above it.
    int swaps = 0;
    for (uint64_t m = bm; m; m &= m - 1) {
        int r = __builtin_ctzll(m);
        if (r < 63) swaps += __builtin_popcountll(am >> (r + 1));
    }
    out.e_.resize(a.e_.size());
    for (size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = a.e_[i] + b.e_[i];
    out.odd_ = am | bm;
    out.degree_ = a.degree_ + b.degree_;
    return (swaps & 1) ? -1 : 1;
}

Monomial mono_inverse(const Monomial& a) {
    Monomial r = a;
    for (auto& x : r.e_) x = -x;
    r.degree_ = -a.degree_;
    return r;
}

// ---- SuperExpr ----

SuperExpr SuperExpr::constant(CatalogPtr cat, const Coeff& c) {
    SuperExpr e(cat);
    if (!c.is_zero()) e.terms_.emplace(Monomial(cat->size()), c);
    return e;
}

SuperExpr SuperExpr::generator(CatalogPtr cat, size_t i, int power) {
    const Generator& g = (*cat)[i];
    if (power < 0 && !g.invertible)
        throw Error(ErrorKind::ParityError, "negative power of non-invertible generator '" + g.name + "'");
    SuperExpr e(cat);
    if (g.odd && power > 1) return e;
    Monomial m(cat->size());
    m.set(*cat, i, power);
    e.terms_.emplace(std::move(m), Coeff(1));
    return e;
}

SuperExpr SuperExpr::generator(CatalogPtr cat, std::string_view name, int power) {
    size_t i = cat->index(name);
    return generator(std::move(cat), i, power);
}

SuperExpr SuperExpr::monomial(CatalogPtr cat, const Monomial& m, const Coeff& c) {
    SuperExpr e(std::move(cat));
    if (!c.is_zero()) e.terms_.emplace(m, c);
    return e;
}

bool SuperExpr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

std::optional<Coeff> SuperExpr::constant_value() const {
    if (terms_.empty()) return Coeff(0);
    if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
    return std::nullopt;
}

Parity SuperExpr::parity() const {
    bool ev = false, od = false;
    for (const auto& [m, c] : terms_) (m.parity() == Parity::Odd ? od : ev) = true;
    if (ev && od) return Parity::Heterogeneous;
    return od ? Parity::Odd : Parity::Even;
}

bool SuperExpr::has_parity(Parity p) const {
    for (const auto& [m, c] : terms_)
        if (m.parity() != p) return false;
    return true;
}

SuperExpr SuperExpr::body() const {
    SuperExpr r(cat_);
    for (const auto& [m, c] : terms_)
        if (!m.odd_mask()) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

SuperExpr SuperExpr::part(Parity p) const {
    SuperExpr r(cat_);
    for (const auto& [m, c] : terms_)
        if (m.parity() == p) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

SuperExpr SuperExpr::strip_left(size_t g) const {
    SuperExpr r(cat_);
    int rank = cat_->odd_rank(g);
    if (rank < 0) throw Error(ErrorKind::ParityError, "strip_left needs an odd generator");
    for (const auto& [m, c] : terms_) {
        if (!m.exp(g)) continue;
        Monomial rest = m;
        rest.set(*cat_, g, 0);
        uint64_t below = m.odd_mask() & ((uint64_t{1} << rank) - 1);
        Coeff k = (__builtin_popcountll(below) & 1) ? -c : c;
        r.add_term(rest, k);
    }
    return r;
}

void SuperExpr::check_same(const SuperExpr& o) const {
    if (cat_ && o.cat_ && cat_ != o.cat_ && !cat_->same_as(*o.cat_))
        throw Error(ErrorKind::CatalogMismatch, "expressions over different catalogs");
}

void SuperExpr::add_term(const Monomial& m, const Coeff& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

SuperExpr SuperExpr::operator-() const {
    SuperExpr r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

SuperExpr& SuperExpr::operator+=(const SuperExpr& o) {
    check_same(o);
    if (!cat_) cat_ = o.cat_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

SuperExpr& SuperExpr::operator-=(const SuperExpr& o) {
    check_same(o);
    if (!cat_) cat_ = o.cat_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

SuperExpr& SuperExpr::operator*=(const Coeff& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, x] : terms_) x *= c;
    return *this;
}

SuperExpr operator*(const SuperExpr& a, const SuperExpr& b) {
    a.check_same(b);
    SuperExpr r(a.cat_ ? a.cat_ : b.cat_);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    Monomial m;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            int sg = mono_mul(ma, mb, m);
            if (!sg) continue;
            Coeff c = ca * cb;
            if (sg < 0) c = -c;
            auto it = r.terms_.find(m);
            if (it == r.terms_.end())
                r.terms_.emplace(m, std::move(c));
            else
                it->second += c;
        }
    }
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        it = it->second.is_zero() ? r.terms_.erase(it) : std::next(it);
    return r;
}

bool operator==(const SuperExpr& a, const SuperExpr& b) {
    a.check_same(b);
    return a.terms_ == b.terms_;
}

std::optional<SuperExpr> SuperExpr::try_inverse() const {
    if (!cat_) return std::nullopt;
    const Monomial* bm = nullptr;
    Coeff bc;
    for (const auto& [m, c] : terms_) {
        if (m.odd_mask()) continue;
        if (bm) return std::nullopt; // body has several terms
        bm = &m;
        bc = c;
    }
    if (!bm) return std::nullopt;
    for (size_t i = 0; i < cat_->size(); ++i)
        if (bm->exp(i) && !(*cat_)[i].invertible) return std::nullopt;
    SuperExpr binv = monomial(cat_, mono_inverse(*bm), bc.inverse());
    // e = b(1 + n) with n = b^{-1}(e - b) nilpotent.
    SuperExpr n = binv * (*this - monomial(cat_, *bm, bc));
    SuperExpr acc = constant(cat_, 1), term = constant(cat_, 1);
    for (size_t k = 0; k <= cat_->odd_count() + 1; ++k) {
        term = -(term * n);
        if (term.is_zero()) break;
        acc += term;
    }
    return acc * binv;
}

std::string SuperExpr::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        bool neg = sgn(c.re) < 0 || (sgn(c.re) == 0 && sgn(c.im) < 0);
        // Complex coefficients keep their sign inside the parentheses.
        if (sgn(c.re) != 0 && sgn(c.im) != 0) neg = false;
        Coeff a = neg ? -c : c;
        std::string body;
        if (m.is_one())
            body = a.to_string();
        else if (a.is_one())
            body = m.to_string(*cat_);
        else
            body = a.to_string() + "*" + m.to_string(*cat_);
        if (first)
            s = neg ? "-" + body : body;
        else
            s += (neg ? " - " : " + ") + body;
        first = false;
    }
    return s;
}

int SuperExpr::max_abs_exponent() const {
    int r = 0;
    for (const auto& [m, c] : terms_)
        for (int x : m.exps()) r = std::max(r, x < 0 ? -x : x);
    return r;
}

SuperExpr ring_mul(const SuperExpr& a, const SuperExpr& b) { return a * b; }

Parity expr_parity(const SuperExpr& a) { return a.parity(); }

SuperExpr power(const SuperExpr& a, int k) {
    if (!a.catalog()) return a;
    if (k < 0) {
        auto inv = a.try_inverse();
        if (!inv) throw NotInvertible("power", "negative power of a non-invertible expression");
        return power(*inv, -k);
    }
    SuperExpr r = SuperExpr::constant(a.catalog(), 1), b = a;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

// ---- SuperFraction ----

SuperFraction::SuperFraction(SuperExpr num) : num_(std::move(num)) {
    if (num_.catalog()) den_ = SuperExpr::constant(num_.catalog(), 1);
}

SuperFraction::SuperFraction(SuperExpr num, SuperExpr den)
    : num_(std::move(num)), den_(std::move(den)), den_is_one_(false) {
    if (!num_.catalog()) num_ = SuperExpr(den_.catalog());
    normalize();
}

void SuperFraction::normalize() {
    if (!den_.has_parity(Parity::Even))
        throw NotInvertible("denominator", "denominator must be even, got " + den_.to_string());
    if (den_.body().is_zero())
        throw NotInvertible("denominator", "denominator has zero bosonic shadow: " + den_.to_string());
    if (auto c = den_.constant_value(); c && c->is_one()) {
        den_is_one_ = true;
        return;
    }
    if (auto inv = den_.try_inverse()) {
        num_ = num_ * *inv;
        den_ = SuperExpr::constant(den_.catalog(), 1);
        den_is_one_ = true;
    }
}

SuperFraction SuperFraction::operator-() const {
    SuperFraction r(*this);
    r.num_ = -r.num_;
    return r;
}

SuperFraction& SuperFraction::operator+=(const SuperFraction& o) {
    if (o.num_.is_zero() && num_.catalog()) return *this;
    if (num_.is_zero()) return *this = o;
    if (den_is_one_ && o.den_is_one_) {
        num_ += o.num_;
    } else if (!den_is_one_ && !o.den_is_one_ && den_ == o.den_) {
        num_ += o.num_;
    } else if (o.den_is_one_) {
        num_ += o.num_ * den_;
    } else if (den_is_one_) {
        num_ = num_ * o.den_ + o.num_;
        den_ = o.den_;
        den_is_one_ = false;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    return *this;
}

SuperFraction& SuperFraction::operator-=(const SuperFraction& o) { return *this += -o; }

SuperFraction& SuperFraction::operator*=(const SuperFraction& o) {
    if (num_.is_zero() || o.num_.is_zero()) {
        CatalogPtr cat = num_.catalog() ? num_.catalog() : o.num_.catalog();
        *this = SuperFraction(SuperExpr(cat));
        return *this;
    }
    num_ = num_ * o.num_;
    if (!o.den_is_one_) {
        den_ = den_is_one_ ? o.den_ : den_ * o.den_;
        den_is_one_ = false;
        normalize();
    }
    return *this;
}

bool SuperFraction::invertible() const {
    return num_.catalog() && num_.has_parity(Parity::Even) && !num_.body().is_zero();
}

SuperFraction SuperFraction::inverse() const {
    if (!num_.catalog() || num_.is_zero())
        throw NotInvertible("fraction", "zero is not invertible");
    if (!num_.has_parity(Parity::Even))
        throw NotInvertible("fraction", std::string("numerator is ") + parity_name(num_.parity()) +
                                            ": " + num_.to_string());
    if (num_.body().is_zero())
        throw NotInvertible("fraction", "numerator has zero bosonic shadow: " + num_.to_string());
    return SuperFraction(den_is_one_ ? SuperExpr::constant(num_.catalog(), 1) : den_, num_);
}

SuperFraction operator/(const SuperFraction& a, const SuperFraction& b) { return a * b.inverse(); }

std::string SuperFraction::to_string() const {
    if (den_is_one_) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

SuperExpr cross_residual(const SuperFraction& p, const SuperFraction& q) {
    SuperExpr l = q.is_polynomial() ? p.num() : p.num() * q.den();
    SuperExpr r = p.is_polynomial() ? q.num() : q.num() * p.den();
    return l - r;
}

bool frac_equal(const SuperFraction& p, const SuperFraction& q) { return cross_residual(p, q).is_zero(); }

SuperFraction frac_invert(const SuperFraction& p) { return p.inverse(); }

} // namespace superfg
