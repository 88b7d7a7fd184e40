#pragma once

// Numeric evaluation in a finite exterior algebra over complex doubles, used
// to cross-check the symbolic engine on random assignments.

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "superfg/ring.hpp"
#include "superfg/supermatrix.hpp"

namespace superfg {

using cplx = std::complex<double>;

// Element of the exterior algebra on `units` odd generators e_0..e_{N-1};
// coefficient k belongs to the product of the units in bitmask k, taken in
// increasing order.
class GrassmannNumber {
public:
    static constexpr int max_units = 20;

    GrassmannNumber() = default;
    explicit GrassmannNumber(int units, cplx body = 0);
    static GrassmannNumber unit(int units, int k, cplx scale = 1);

    int units() const { return units_; }
    cplx body() const { return c_.empty() ? cplx(0) : c_[0]; }
    cplx coeff(uint32_t mask) const { return c_.at(mask); }
    cplx& coeff_ref(uint32_t mask) { return c_.at(mask); }
    double max_abs() const;
    // Largest coefficient on odd (resp. even) unit products.
    double max_abs_parity(bool odd) const;

    GrassmannNumber operator-() const;
    GrassmannNumber& operator+=(const GrassmannNumber& o);
    GrassmannNumber& operator-=(const GrassmannNumber& o);
    GrassmannNumber& operator*=(cplx s);
    friend GrassmannNumber operator+(GrassmannNumber a, const GrassmannNumber& b) { return a += b; }
    friend GrassmannNumber operator-(GrassmannNumber a, const GrassmannNumber& b) { return a -= b; }
    friend GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b);
    friend GrassmannNumber operator*(GrassmannNumber a, cplx s) { return a *= s; }
    friend GrassmannNumber operator*(cplx s, GrassmannNumber a) { return a *= s; }

    // Body-centred nilpotent series; throws ZeroBodyDivision on zero body.
    GrassmannNumber inverse() const;
    GrassmannNumber pow(int k) const;

    std::string to_string() const;

private:
    void check(const GrassmannNumber& o) const;
    int units_ = 0;
    std::vector<cplx> c_;
};

// Which catalog generators an expression mentions.
using GeneratorSet = std::vector<bool>;
GeneratorSet generators_used(const SuperExpr& e);
GeneratorSet generators_used(const SuperFraction& f);
GeneratorSet generators_used(const SuperMatrix& m);
void merge_into(GeneratorSet& acc, const GeneratorSet& more);

struct Assignment {
    CatalogPtr catalog;
    int units = 0;
    uint64_t seed = 0;
    std::vector<GrassmannNumber> values;
    std::vector<bool> assigned;

    // Throws ConfigError for a generator left unassigned.
    const GrassmannNumber& value(size_t g) const;
    Assignment with_value(size_t g, GrassmannNumber v) const;
    std::string to_string() const;
};

// Even generators get random bodies with modulus in [0.5, 1.5]; each odd
// generator in `odd_used` (all odd generators when empty) gets its own unit
// times a random nonzero scalar. Throws InsufficientUnits when units run out.
Assignment sample_assignment(const CatalogPtr& cat, int units, uint64_t seed, const GeneratorSet& odd_used = {});

GrassmannNumber eval_numeric(const SuperExpr& e, const Assignment& a);
GrassmannNumber eval_numeric(const SuperFraction& f, const Assignment& a);

struct NumMatrix {
    int m = 0, n = 0;
    std::vector<GrassmannNumber> a;

    NumMatrix() = default;
    NumMatrix(int m, int n, int units);
    static NumMatrix identity(int m, int n, int units);
    int size() const { return m + n; }
    const GrassmannNumber& operator()(int i, int j) const { return a[static_cast<size_t>(i * size() + j)]; }
    GrassmannNumber& at(int i, int j) { return a[static_cast<size_t>(i * size() + j)]; }
    int units() const { return a.empty() ? 0 : a.front().units(); }
    NumMatrix operator-(const NumMatrix& o) const;
    double max_abs() const;
};
NumMatrix eval_numeric(const SuperMatrix& m, const Assignment& a);
NumMatrix num_mul(const NumMatrix& x, const NumMatrix& y);
// Gauss-Jordan with pivots kept inside each diagonal block.
NumMatrix num_inverse(const NumMatrix& x);
GrassmannNumber num_supertrace(const NumMatrix& x);
GrassmannNumber num_trace(const NumMatrix& x);
// 1/2 str(XY) for an even product, 1/2 tr(XY) for an odd one.
GrassmannNumber num_killing(const NumMatrix& x, const NumMatrix& y, bool odd_product);
// Even supermatrices only: det(A - B D⁻¹ C) / det(D).
GrassmannNumber num_berezinian(const NumMatrix& x);

// Random even (or odd) numeric supermatrix: body + pair-of-units soul on even
// slots, single-unit combinations on odd slots.
NumMatrix random_num_supermatrix(int m, int n, int units, bool odd, std::mt19937_64& rng);

struct OracleVerdict {
    bool equal = true;
    double max_diff = 0;
    int trials = 0;
    std::string witness; // assignment at which the worst difference occurred
};
OracleVerdict oracle_equal(const SuperFraction& a, const SuperFraction& b, int trials, double tol, int units = 8,
                           uint64_t seed = 1);
OracleVerdict oracle_equal(const SuperMatrix& a, const SuperMatrix& b, int trials, double tol, int units = 8,
                           uint64_t seed = 1);

} // namespace superfg
