#include "superfg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace superfg {

namespace {

cplx to_cplx(const Coeff& c) { return {c.re.get_d(), c.im.get_d()}; }

// Sign of e_a e_b -> ±e_{a|b} for disjoint masks: one swap per pair (i in a, j in b, i > j).
int reorder_sign(uint32_t a, uint32_t b) {
    int swaps = 0;
    for (uint32_t r = b; r; r &= r - 1) {
        int j = __builtin_ctz(r);
        swaps += __builtin_popcount(a >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

cplx random_scalar(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mod(0.5, 1.5), arg(0.0, 2 * std::numbers::pi);
    return std::polar(mod(rng), arg(rng));
}

uint64_t trial_seed(uint64_t seed, int trial) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(trial)};
    uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

constexpr double pivot_eps = 1e-12;

} // namespace

// ---- GrassmannNumber ----

GrassmannNumber::GrassmannNumber(int units, cplx body) : units_(units) {
    if (units < 0 || units > max_units)
        throw Error(ErrorKind::ConfigError, "odd unit count must be in 0.." + std::to_string(max_units));
    c_.assign(size_t{1} << units, cplx(0));
    c_[0] = body;
}

GrassmannNumber GrassmannNumber::unit(int units, int k, cplx scale) {
    GrassmannNumber g(units);
    if (k < 0 || k >= units) throw Error(ErrorKind::InsufficientUnits, "unit index out of range");
    g.c_[size_t{1} << k] = scale;
    return g;
}

void GrassmannNumber::check(const GrassmannNumber& o) const {
    if (units_ != o.units_) throw Error(ErrorKind::ConfigError, "Grassmann numbers over different unit counts");
}

double GrassmannNumber::max_abs() const {
    double m = 0;
    for (const cplx& z : c_) m = std::max(m, std::abs(z));
    return m;
}

double GrassmannNumber::max_abs_parity(bool odd) const {
    double m = 0;
    for (size_t k = 0; k < c_.size(); ++k)
        if ((__builtin_popcountll(k) & 1) == (odd ? 1 : 0)) m = std::max(m, std::abs(c_[k]));
    return m;
}

GrassmannNumber GrassmannNumber::operator-() const {
    GrassmannNumber r(*this);
    for (cplx& z : r.c_) z = -z;
    return r;
}

GrassmannNumber& GrassmannNumber::operator+=(const GrassmannNumber& o) {
    check(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

GrassmannNumber& GrassmannNumber::operator-=(const GrassmannNumber& o) {
    check(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

GrassmannNumber& GrassmannNumber::operator*=(cplx s) {
    for (cplx& z : c_) z *= s;
    return *this;
}

GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b) {
    a.check(b);
    GrassmannNumber r(a.units_);
    std::vector<uint32_t> nb;
    for (uint32_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j] != cplx(0)) nb.push_back(j);
    for (uint32_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == cplx(0)) continue;
        for (uint32_t j : nb) {
            if (i & j) continue;
            r.c_[i | j] += static_cast<double>(reorder_sign(i, j)) * a.c_[i] * b.c_[j];
        }
    }
    return r;
}

GrassmannNumber GrassmannNumber::inverse() const {
    cplx b = body();
    if (b == cplx(0) || !std::isfinite(b.real()) || !std::isfinite(b.imag())) throw Error(ErrorKind::ZeroBodyDivision, "division by an element with zero body");
    // x = b(1 + n), x⁻¹ = b⁻¹ Σ (-n)^k, finite since n is nilpotent
    GrassmannNumber n = *this * (1.0 / b);
    n.c_[0] = 0;
    GrassmannNumber term(units_, 1), sum(units_, 1);
    for (int k = 0; k < units_ && term.max_abs() > 0; ++k) {
        term = term * (-n);
        sum += term;
    }
    return sum * (1.0 / b);
}

GrassmannNumber GrassmannNumber::pow(int k) const {
    GrassmannNumber base = k < 0 ? inverse() : *this, r(units_, 1);
    for (int e = std::abs(k); e > 0; e >>= 1) {
        if (e & 1) r = r * base;
        if (e > 1) base = base * base;
    }
    return r;
}

std::string GrassmannNumber::to_string() const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (std::abs(c_[k]) < 1e-15) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[k].real() << (c_[k].imag() < 0 ? "" : "+") << c_[k].imag() << "i)";
        for (int u = 0; u < units_; ++u)
            if (k >> u & 1) os << "*e" << u;
    }
    return first ? "0" : os.str();
}

// ---- generator sets ----

GeneratorSet generators_used(const SuperExpr& e) {
    GeneratorSet s(e.catalog() ? e.catalog()->size() : 0, false);
    for (const auto& [m, c] : e.terms())
        for (size_t i = 0; i < s.size(); ++i)
            if (m.exp(i)) s[i] = true;
    return s;
}

void merge_into(GeneratorSet& acc, const GeneratorSet& more) {
    if (acc.size() < more.size()) acc.resize(more.size(), false);
    for (size_t i = 0; i < more.size(); ++i)
        if (more[i]) acc[i] = true;
}

GeneratorSet generators_used(const SuperFraction& f) {
    GeneratorSet s = generators_used(f.num());
    merge_into(s, generators_used(f.den()));
    return s;
}

GeneratorSet generators_used(const SuperMatrix& m) {
    GeneratorSet s(m.catalog() ? m.catalog()->size() : 0, false);
    for (const auto& e : m.entries()) merge_into(s, generators_used(e));
    return s;
}

// ---- assignments ----

const GrassmannNumber& Assignment::value(size_t g) const {
    if (g >= values.size() || !assigned[g])
        throw Error(ErrorKind::ConfigError,
                    "generator " + (g < catalog->size() ? (*catalog)[g].name : std::to_string(g)) + " has no value");
    return values[g];
}

Assignment Assignment::with_value(size_t g, GrassmannNumber v) const {
    Assignment a(*this);
    a.values.at(g) = std::move(v);
    a.assigned.at(g) = true;
    return a;
}

std::string Assignment::to_string() const {
    std::string s = "seed " + std::to_string(seed) + ":";
    for (size_t g = 0; g < values.size(); ++g)
        if (assigned[g]) s += " " + (*catalog)[g].name + "=" + values[g].to_string();
    return s;
}

Assignment sample_assignment(const CatalogPtr& cat, int units, uint64_t seed, const GeneratorSet& odd_used) {
    Assignment a;
    a.catalog = cat;
    a.units = units;
    a.seed = seed;
    a.values.assign(cat->size(), GrassmannNumber(units));
    a.assigned.assign(cat->size(), false);
    std::mt19937_64 rng(seed);
    int next = 0;
    for (size_t g = 0; g < cat->size(); ++g) {
        cplx z = random_scalar(rng); // drawn for every generator so values do not shift with odd_used
        if (!(*cat)[g].odd) {
            a.values[g] = GrassmannNumber(units, z);
            a.assigned[g] = true;
            continue;
        }
        if (!odd_used.empty() && !(g < odd_used.size() && odd_used[g])) continue;
        if (next >= units)
            throw Error(ErrorKind::InsufficientUnits, "more odd generators in use than the " + std::to_string(units) +
                                                          " numeric units");
        a.values[g] = GrassmannNumber::unit(units, next++, z);
        a.assigned[g] = true;
    }
    return a;
}

GrassmannNumber eval_numeric(const SuperExpr& e, const Assignment& a) {
    GrassmannNumber sum(a.units);
    for (const auto& [m, c] : e.terms()) {
        GrassmannNumber t(a.units, to_cplx(c));
        for (size_t i = 0; i < m.exps().size(); ++i) {
            int k = m.exp(i);
            if (k) t = t * a.value(i).pow(k);
        }
        sum += t;
    }
    return sum;
}

GrassmannNumber eval_numeric(const SuperFraction& f, const Assignment& a) {
    GrassmannNumber n = eval_numeric(f.num(), a);
    if (f.is_polynomial()) return n;
    return n * eval_numeric(f.den(), a).inverse();
}

// ---- numeric matrices ----

NumMatrix::NumMatrix(int m, int n, int units) : m(m), n(n), a(static_cast<size_t>((m + n) * (m + n)), GrassmannNumber(units)) {}

NumMatrix NumMatrix::identity(int m, int n, int units) {
    NumMatrix r(m, n, units);
    for (int i = 0; i < m + n; ++i) r.at(i, i) = GrassmannNumber(units, 1);
    return r;
}

NumMatrix NumMatrix::operator-(const NumMatrix& o) const {
    NumMatrix r(*this);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] -= o.a[k];
    return r;
}

double NumMatrix::max_abs() const {
    double m = 0;
    for (const auto& x : a) m = std::max(m, x.max_abs());
    return m;
}

NumMatrix eval_numeric(const SuperMatrix& m, const Assignment& a) {
    NumMatrix r(m.m(), m.n(), a.units);
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r.at(i, j) = eval_numeric(m(i, j), a);
    return r;
}

NumMatrix num_mul(const NumMatrix& x, const NumMatrix& y) {
    if (x.m != y.m || x.n != y.n) throw Error(ErrorKind::DimensionMismatch, "numeric product of different shapes");
    NumMatrix r(x.m, x.n, x.units());
    const int N = x.size();
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            if (x(i, k).max_abs() == 0) continue;
            for (int j = 0; j < N; ++j) r.at(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

NumMatrix num_inverse(const NumMatrix& x) {
    const int N = x.size();
    NumMatrix w(x), inv = NumMatrix::identity(x.m, x.n, x.units());
    for (int c = 0; c < N; ++c) {
        // Largest body in the column's block; the scale is relative because
        // sampled rational entries can be tiny yet perfectly invertible.
        int end = c >= x.m ? N : x.m, p = c;
        double scale = 0;
        for (int r = c; r < end; ++r) {
            if (std::abs(w(r, c).body()) > std::abs(w(p, c).body())) p = r;
            for (int k = 0; k < N; ++k) scale = std::max(scale, std::abs(w(r, k).body()));
        }
        if (scale == 0 || std::abs(w(p, c).body()) <= pivot_eps * scale) throw Error(ErrorKind::ZeroBodyDivision, "numeric matrix has no invertible pivot");
        if (p != c)
            for (int k = 0; k < N; ++k) {
                std::swap(w.at(p, k), w.at(c, k));
                std::swap(inv.at(p, k), inv.at(c, k));
            }
        GrassmannNumber pi = w(c, c).inverse();
        for (int k = 0; k < N; ++k) {
            w.at(c, k) = pi * w(c, k);
            inv.at(c, k) = pi * inv(c, k);
        }
        for (int r = 0; r < N; ++r) {
            if (r == c || w(r, c).max_abs() == 0) continue;
            GrassmannNumber f = w(r, c);
            for (int k = 0; k < N; ++k) {
                w.at(r, k) -= f * w(c, k);
                inv.at(r, k) -= f * inv(c, k);
            }
        }
    }
    return inv;
}

GrassmannNumber num_trace(const NumMatrix& x) {
    GrassmannNumber t(x.units());
    for (int i = 0; i < x.size(); ++i) t += x(i, i);
    return t;
}

GrassmannNumber num_supertrace(const NumMatrix& x) {
    GrassmannNumber t(x.units());
    for (int i = 0; i < x.size(); ++i) {
        if (i < x.m) t += x(i, i);
        else t -= x(i, i);
    }
    return t;
}

GrassmannNumber num_killing(const NumMatrix& x, const NumMatrix& y, bool odd_product) {
    NumMatrix p = num_mul(x, y);
    return (odd_product ? num_trace(p) : num_supertrace(p)) * 0.5;
}

namespace {
// Laplace expansion; the entries are even, so they commute and no pivoting
// (hence no division) is needed.
GrassmannNumber even_det(const std::vector<std::vector<GrassmannNumber>>& a, int units) {
    const size_t n = a.size();
    if (n == 1) return a[0][0];
    GrassmannNumber det(units);
    for (size_t c = 0; c < n; ++c) {
        std::vector<std::vector<GrassmannNumber>> minor;
        for (size_t r = 1; r < n; ++r) {
            minor.emplace_back();
            for (size_t k = 0; k < n; ++k)
                if (k != c) minor.back().push_back(a[r][k]);
        }
        GrassmannNumber t = a[0][c] * even_det(minor, units);
        if (c & 1) det -= t;
        else det += t;
    }
    return det;
}
} // namespace

GrassmannNumber num_berezinian(const NumMatrix& x) {
    const int m = x.m, n = x.n, U = x.units();
    std::vector<std::vector<GrassmannNumber>> Dm(n, std::vector<GrassmannNumber>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Dm[i][j] = x(m + i, m + j);
    NumMatrix D(n, 0, U);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D.at(i, j) = Dm[i][j];
    NumMatrix Di = n ? num_inverse(D) : D;
    std::vector<std::vector<GrassmannNumber>> S(m, std::vector<GrassmannNumber>(m, GrassmannNumber(U)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            GrassmannNumber v = x(i, j);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) v -= x(i, m + k) * Di(k, l) * x(m + l, j);
            S[i][j] = v;
        }
    GrassmannNumber detS = m ? even_det(S, U) : GrassmannNumber(U, 1);
    GrassmannNumber detD = n ? even_det(Dm, U) : GrassmannNumber(U, 1);
    return detS * detD.inverse();
}

NumMatrix random_num_supermatrix(int m, int n, int units, bool odd, std::mt19937_64& rng) {
    if (units < 2) throw Error(ErrorKind::InsufficientUnits, "random supermatrices need at least two units");
    NumMatrix r(m, n, units);
    std::uniform_int_distribution<int> pick(0, units - 1);
    for (int i = 0; i < m + n; ++i)
        for (int j = 0; j < m + n; ++j) {
            bool slot_odd = ((i >= m) != (j >= m)) != odd;
            GrassmannNumber v(units);
            if (slot_odd) {
                for (int t = 0; t < 2; ++t) v += GrassmannNumber::unit(units, pick(rng), random_scalar(rng));
            } else {
                v = GrassmannNumber(units, random_scalar(rng));
                int a = pick(rng), b = pick(rng);
                if (a != b) v += GrassmannNumber::unit(units, a, random_scalar(rng)) * GrassmannNumber::unit(units, b);
            }
            r.at(i, j) = v;
        }
    return r;
}

// ---- equality ----

namespace {
template <class T>
OracleVerdict compare(const T& a, const T& b, const CatalogPtr& cat, int trials, double tol, int units,
                      uint64_t seed) {
    GeneratorSet used = generators_used(a);
    merge_into(used, generators_used(b));
    OracleVerdict v;
    v.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Assignment asg = sample_assignment(cat, units, trial_seed(seed, t), used);
        double d = (eval_numeric(a, asg) - eval_numeric(b, asg)).max_abs();
        if (d > v.max_diff || (t == 0 && v.witness.empty())) {
            v.max_diff = std::max(v.max_diff, d);
            v.witness = asg.to_string();
        }
    }
    v.equal = v.max_diff <= tol;
    return v;
}
} // namespace

OracleVerdict oracle_equal(const SuperFraction& a, const SuperFraction& b, int trials, double tol, int units,
                           uint64_t seed) {
    return compare(a, b, a.catalog(), trials, tol, units, seed);
}

OracleVerdict oracle_equal(const SuperMatrix& a, const SuperMatrix& b, int trials, double tol, int units,
                           uint64_t seed) {
    return compare(a, b, a.catalog(), trials, tol, units, seed);
}

} // namespace superfg
