#include "superfg/supermatrix.hpp"

namespace superfg {

SuperMatrix::SuperMatrix(CatalogPtr cat, int m, int n) : cat_(std::move(cat)), m_(m), n_(n) {
    if (m < 0 || n < 0 || m + n == 0) throw Error(ErrorKind::DimensionMismatch, "empty supermatrix shape");
    a_.assign(static_cast<size_t>(size()) * size(), SuperFraction(cat_));
}

SuperMatrix SuperMatrix::identity(CatalogPtr cat, int m, int n) {
    SuperMatrix r(cat, m, n);
    for (int i = 0; i < r.size(); ++i) r.at(i, i) = SuperFraction(SuperExpr::constant(cat, 1));
    return r;
}

SuperMatrix SuperMatrix::diag(CatalogPtr cat, int m, int n, const std::vector<SuperFraction>& d) {
    SuperMatrix r(cat, m, n);
    if (static_cast<int>(d.size()) != r.size())
        throw Error(ErrorKind::DimensionMismatch, "diag: wrong number of entries");
    for (int i = 0; i < r.size(); ++i) r.at(i, i) = d[i];
    return r;
}

SuperMatrix SuperMatrix::from_rows(CatalogPtr cat, int m, int n,
                                   const std::vector<std::vector<SuperFraction>>& rows) {
    SuperMatrix r(cat, m, n);
    if (static_cast<int>(rows.size()) != r.size())
        throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(rows.size()) +
                                                      " rows, expected " + std::to_string(r.size()));
    for (int i = 0; i < r.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != r.size())
            throw Error(ErrorKind::DimensionMismatch, "row " + std::to_string(i + 1) + " has wrong length");
        for (int j = 0; j < r.size(); ++j) r.at(i, j) = rows[i][j];
    }
    return r;
}

void SuperMatrix::check_shape(const SuperMatrix& o, const char* what) const {
    if (!same_shape(o))
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": shapes (" + std::to_string(m_) + "|" + std::to_string(n_) +
                        ") and (" + std::to_string(o.m_) + "|" + std::to_string(o.n_) + ")");
}

bool SuperMatrix::fits(Parity p) const {
    if (p == Parity::Heterogeneous) return false;
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j) {
            bool off = lower(i) != lower(j);
            Parity want = off ? flip(p) : p;
            if (!(*this)(i, j).has_parity(want)) return false;
        }
    return true;
}

Parity SuperMatrix::parity() const {
    if (fits(Parity::Even)) return Parity::Even;
    if (fits(Parity::Odd)) return Parity::Odd;
    return Parity::Heterogeneous;
}

bool SuperMatrix::is_zero() const {
    for (const auto& e : a_)
        if (!e.is_zero()) return false;
    return true;
}

SuperMatrix SuperMatrix::operator-() const {
    SuperMatrix r(*this);
    for (auto& e : r.a_) e = -e;
    return r;
}

SuperMatrix& SuperMatrix::operator+=(const SuperMatrix& o) {
    check_shape(o, "add");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

SuperMatrix& SuperMatrix::operator-=(const SuperMatrix& o) {
    check_shape(o, "subtract");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
    a.check_shape(b, "multiply");
    SuperMatrix r(a.cat_, a.m_, a.n_);
    const int N = a.size();
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            const SuperFraction& x = a(i, k);
            if (x.is_zero()) continue;
            for (int j = 0; j < N; ++j)
                if (!b(k, j).is_zero()) r.at(i, j) += x * b(k, j);
        }
    return r;
}

SuperMatrix operator*(const SuperFraction& c, const SuperMatrix& a) {
    SuperMatrix r(a);
    for (auto& e : r.a_) e = c * e;
    return r;
}

bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
    if (!a.same_shape(b)) return false;
    for (size_t k = 0; k < a.a_.size(); ++k)
        if (a.a_[k] != b.a_[k]) return false;
    return true;
}

SuperMatrix SuperMatrix::map(const std::function<SuperFraction(const SuperFraction&)>& f) const {
    SuperMatrix r(*this);
    for (auto& e : r.a_) e = f(e);
    return r;
}

SuperMatrix SuperMatrix::twisted(bool flag) const {
    if (!flag) return *this;
    SuperMatrix r(*this);
    for (int i = m_; i < size(); ++i)
        for (int j = 0; j < size(); ++j) r.at(i, j) = -r(i, j);
    return r;
}

std::string SuperMatrix::to_string() const {
    std::string s = "[";
    for (int i = 0; i < size(); ++i) {
        s += i ? ", [" : "[";
        for (int j = 0; j < size(); ++j) {
            if (j) s += ", ";
            s += (*this)(i, j).to_string();
        }
        s += "]";
    }
    return s + "]";
}

SuperMatrix mat_mul(const SuperMatrix& a, const SuperMatrix& b) { return a * b; }

SuperMatrix scalar_star(const SuperFraction& c, const SuperMatrix& a) {
    Parity p = c.parity();
    if (p == Parity::Heterogeneous)
        throw Error(ErrorKind::ParityError, "scalar action needs a homogeneous scalar: " + c.to_string());
    return (c * a).twisted(p == Parity::Odd);
}

namespace {
Parity homogeneous(const SuperMatrix& a, const char* what) {
    Parity p = a.parity();
    if (p == Parity::Heterogeneous)
        throw Error(ErrorKind::ParityError, std::string(what) + ": heterogeneous supermatrix");
    return p;
}
} // namespace

SuperMatrix commutator(const SuperMatrix& a, const SuperMatrix& b) { return a * b - b * a; }
SuperMatrix anticommutator(const SuperMatrix& a, const SuperMatrix& b) { return a * b + b * a; }

SuperMatrix graded_bracket(const SuperMatrix& a, const SuperMatrix& b) {
    bool both_odd = homogeneous(a, "bracket") == Parity::Odd && homogeneous(b, "bracket") == Parity::Odd;
    return both_odd ? anticommutator(a, b) : commutator(a, b);
}

SuperFraction plain_trace(const SuperMatrix& a) {
    SuperFraction t(a.catalog());
    for (int i = 0; i < a.size(); ++i) t += a(i, i);
    return t;
}

SuperFraction supertrace(const SuperMatrix& a) {
    SuperFraction t(a.catalog());
    for (int i = 0; i < a.size(); ++i) t += a.lower(i) ? -a(i, i) : a(i, i);
    return t;
}

SuperFraction killing_form(const SuperMatrix& a, const SuperMatrix& b) {
    Parity d = add_parity(homogeneous(a, "killing form"), homogeneous(b, "killing form"));
    SuperMatrix p = a * b;
    SuperFraction half(SuperExpr::constant(a.catalog(), Coeff::rational(1, 2)));
    return half * (d == Parity::Even ? supertrace(p) : plain_trace(p));
}

SuperFraction even_determinant(const std::vector<std::vector<SuperFraction>>& a) {
    const size_t n = a.size();
    if (n == 0) throw Error(ErrorKind::DimensionMismatch, "determinant of empty matrix");
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    // Laplace expansion on the first row; sizes here stay small.
    SuperFraction det(a[0][0].catalog());
    for (size_t c = 0; c < n; ++c) {
        if (a[0][c].is_zero()) continue;
        std::vector<std::vector<SuperFraction>> minor;
        for (size_t r = 1; r < n; ++r) {
            std::vector<SuperFraction> row;
            for (size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(a[r][k]);
            minor.push_back(std::move(row));
        }
        SuperFraction term = a[0][c] * even_determinant(minor);
        det += (c % 2) ? -term : term;
    }
    return det;
}

namespace {
std::vector<std::vector<SuperFraction>> block(const SuperMatrix& a, int r0, int c0, int rows, int cols) {
    std::vector<std::vector<SuperFraction>> b(rows, std::vector<SuperFraction>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) b[i][j] = a(r0 + i, c0 + j);
    return b;
}

// Gauss-Jordan on an ordinary matrix of even entries; throws NotInvertible.
std::vector<std::vector<SuperFraction>> even_inverse(std::vector<std::vector<SuperFraction>> a,
                                                     const CatalogPtr& cat, const std::string& which) {
    const size_t n = a.size();
    std::vector<std::vector<SuperFraction>> inv(n, std::vector<SuperFraction>(n, SuperFraction(cat)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = SuperFraction(SuperExpr::constant(cat, 1));
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && !a[p][c].invertible()) ++p;
        if (p == n) throw NotInvertible(which, "no invertible pivot in column " + std::to_string(c + 1));
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        SuperFraction pi = a[c][c].inverse();
        for (size_t k = 0; k < n; ++k) {
            a[c][k] = pi * a[c][k];
            inv[c][k] = pi * inv[c][k];
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c].is_zero()) continue;
            SuperFraction f = a[r][c];
            for (size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

std::vector<std::vector<SuperFraction>> mul(const std::vector<std::vector<SuperFraction>>& a,
                                            const std::vector<std::vector<SuperFraction>>& b,
                                            const CatalogPtr& cat) {
    size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    std::vector<std::vector<SuperFraction>> out(r, std::vector<SuperFraction>(c, SuperFraction(cat)));
    for (size_t i = 0; i < r; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < c; ++j) out[i][j] += a[i][l] * b[l][j];
    return out;
}
} // namespace

SuperFraction berezinian(const SuperMatrix& a) {
    if (homogeneous(a, "berezinian") != Parity::Even)
        throw Error(ErrorKind::ParityError, "berezinian needs an even supermatrix");
    const CatalogPtr& cat = a.catalog();
    const int m = a.m(), n = a.n();
    if (n == 0) return even_determinant(block(a, 0, 0, m, m));
    auto A = block(a, 0, 0, m, m), B = block(a, 0, m, m, n), C = block(a, m, 0, n, m), D = block(a, m, m, n, n);
    auto Dinv = even_inverse(D, cat, "lower block");
    SuperFraction detDinv = even_determinant(Dinv);
    if (m == 0) return detDinv;
    auto BDC = mul(mul(B, Dinv, cat), C, cat);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A[i][j] -= BDC[i][j];
    return even_determinant(A) * detDinv;
}

SuperMatrix mat_inverse(const SuperMatrix& a) {
    if (homogeneous(a, "inverse") != Parity::Even)
        throw NotInvertible("matrix", "only even supermatrices are inverted");
    const int N = a.size();
    const CatalogPtr& cat = a.catalog();
    SuperMatrix w(a), inv = SuperMatrix::identity(cat, a.m(), a.n());
    for (int c = 0; c < N; ++c) {
        // Pivot rows stay inside the column's block so the grading is kept.
        int end = a.lower(c) ? N : a.m();
        int p = c;
        while (p < end && !w(p, c).invertible()) ++p;
        if (p == end) throw NotInvertible("matrix", "no invertible pivot in column " + std::to_string(c + 1));
        if (p != c)
            for (int k = 0; k < N; ++k) {
                std::swap(w.at(p, k), w.at(c, k));
                std::swap(inv.at(p, k), inv.at(c, k));
            }
        SuperFraction pi = w(c, c).inverse();
        for (int k = 0; k < N; ++k) {
            w.at(c, k) = pi * w(c, k);
            inv.at(c, k) = pi * inv(c, k);
        }
        for (int r = 0; r < N; ++r) {
            if (r == c || w(r, c).is_zero()) continue;
            SuperFraction f = w(r, c);
            for (int k = 0; k < N; ++k) {
                w.at(r, k) -= f * w(c, k);
                inv.at(r, k) -= f * inv(c, k);
            }
        }
    }
    return inv;
}

} // namespace superfg
