#pragma once

// (m|n)-graded square matrices over SuperFractions.

#include <functional>
#include <string>
#include <vector>

#include "superfg/ring.hpp"

namespace superfg {

class SuperMatrix {
public:
    SuperMatrix() = default;
    SuperMatrix(CatalogPtr cat, int m, int n); // zero

    static SuperMatrix identity(CatalogPtr cat, int m, int n);
    static SuperMatrix diag(CatalogPtr cat, int m, int n, const std::vector<SuperFraction>& d);
    static SuperMatrix from_rows(CatalogPtr cat, int m, int n,
                                 const std::vector<std::vector<SuperFraction>>& rows);

    const CatalogPtr& catalog() const { return cat_; }
    int m() const { return m_; }
    int n() const { return n_; }
    int size() const { return m_ + n_; }
    bool same_shape(const SuperMatrix& o) const { return m_ == o.m_ && n_ == o.n_; }
    // Position i lies in the lower (odd-indexed) block.
    bool lower(int i) const { return i >= m_; }
    // Grading sign E_ii.
    int grade_sign(int i) const { return lower(i) ? -1 : 1; }

    const SuperFraction& operator()(int i, int j) const { return a_[idx(i, j)]; }
    SuperFraction& at(int i, int j) { return a_[idx(i, j)]; }
    const std::vector<SuperFraction>& entries() const { return a_; }

    // Whether the entries follow the even (resp. odd) block pattern.
    bool fits(Parity p) const;
    // Even when it fits both (the zero matrix); Heterogeneous when neither.
    Parity parity() const;
    bool is_zero() const;

    SuperMatrix operator-() const;
    SuperMatrix& operator+=(const SuperMatrix& o);
    SuperMatrix& operator-=(const SuperMatrix& o);
    friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) { return a += b; }
    friend SuperMatrix operator-(SuperMatrix a, const SuperMatrix& b) { return a -= b; }
    friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b);
    // Plain entrywise left scaling c*M_ij.
    friend SuperMatrix operator*(const SuperFraction& c, const SuperMatrix& a);
    friend bool operator==(const SuperMatrix& a, const SuperMatrix& b);
    friend bool operator!=(const SuperMatrix& a, const SuperMatrix& b) { return !(a == b); }

    SuperMatrix map(const std::function<SuperFraction(const SuperFraction&)>& f) const;
    // E^{flag} * M: rows of the lower block negated when flag is set.
    SuperMatrix twisted(bool flag) const;

    std::string to_string() const;

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * size() + j; }
    void check_shape(const SuperMatrix& o, const char* what) const;
    CatalogPtr cat_;
    int m_ = 0, n_ = 0;
    std::vector<SuperFraction> a_;
};

SuperMatrix mat_mul(const SuperMatrix& a, const SuperMatrix& b);
// Homogeneous scalar c acting as c * E^{|c|} * M, the action of an odd product
// c*Id on a graded matrix.
SuperMatrix scalar_star(const SuperFraction& c, const SuperMatrix& a);
// MN - (-1)^{|M||N|} NM.
SuperMatrix graded_bracket(const SuperMatrix& a, const SuperMatrix& b);
SuperMatrix commutator(const SuperMatrix& a, const SuperMatrix& b);
SuperMatrix anticommutator(const SuperMatrix& a, const SuperMatrix& b);
SuperFraction supertrace(const SuperMatrix& a);
SuperFraction plain_trace(const SuperMatrix& a);
// 1/2 tr(E^{d+1} M N), d = |M| + |N|.
SuperFraction killing_form(const SuperMatrix& a, const SuperMatrix& b);
SuperFraction berezinian(const SuperMatrix& a);
SuperMatrix mat_inverse(const SuperMatrix& a);
// Determinant of a matrix whose entries are all even (commuting).
SuperFraction even_determinant(const std::vector<std::vector<SuperFraction>>& a);

} // namespace superfg
