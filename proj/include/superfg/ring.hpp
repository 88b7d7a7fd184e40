#pragma once

// Supercommutative Laurent polynomials over a parity-graded generator catalog,
// with exact Gaussian-rational coefficients, plus a fraction layer.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "superfg/errors.hpp"

namespace superfg {

enum class Parity { Even, Odd, Heterogeneous };

const char* parity_name(Parity p);
inline Parity flip(Parity p) {
    return p == Parity::Even ? Parity::Odd : p == Parity::Odd ? Parity::Even : p;
}
inline Parity add_parity(Parity a, Parity b) {
    if (a == Parity::Heterogeneous || b == Parity::Heterogeneous) return Parity::Heterogeneous;
    return a == b ? Parity::Even : Parity::Odd;
}
inline int parity_bit(Parity p) { return p == Parity::Odd ? 1 : 0; }
inline Parity parity_of_bit(int b) { return (b & 1) ? Parity::Odd : Parity::Even; }

// Exact Gaussian rational re + im*i.
struct Coeff {
    mpq_class re, im;

    Coeff() = default;
    Coeff(long n) : re(n), im(0) {}
    Coeff(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
    static Coeff rational(long num, long den);
    static Coeff imag_unit() { return Coeff(0, 1); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    Coeff operator-() const { return Coeff(-re, -im); }
    Coeff& operator+=(const Coeff& o);
    Coeff& operator-=(const Coeff& o);
    Coeff& operator*=(const Coeff& o);
    Coeff inverse() const;
    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
    friend Coeff operator/(const Coeff& a, const Coeff& b) { return a * b.inverse(); }
    friend bool operator==(const Coeff& a, const Coeff& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

    std::string to_string() const;
};

struct Generator {
    std::string name;
    bool odd = false;
    bool invertible = false;
    std::string role;
};

class GeneratorCatalog {
public:
    explicit GeneratorCatalog(std::vector<Generator> gens);

    size_t size() const { return gens_.size(); }
    const Generator& operator[](size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }
    std::optional<size_t> find(std::string_view name) const;
    size_t index(std::string_view name) const; // throws UnknownGenerator
    // Position of generator i among the odd generators, or -1.
    int odd_rank(size_t i) const { return odd_rank_[i]; }
    size_t odd_count() const { return odd_index_.size(); }
    size_t odd_generator(int rank) const { return odd_index_[rank]; }
    bool same_as(const GeneratorCatalog& o) const;

private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, size_t> by_name_;
    std::vector<int> odd_rank_;
    std::vector<size_t> odd_index_;
};

using CatalogPtr = std::shared_ptr<const GeneratorCatalog>;

CatalogPtr make_catalog(std::vector<Generator> gens);

// Exponent vector in catalog order. Odd exponents are 0/1 and mirrored in a
// bitmask indexed by odd rank, which makes reordering signs a popcount.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(size_t n) : e_(n, 0) {}

    int exp(size_t i) const { return e_[i]; }
    const std::vector<int>& exps() const { return e_; }
    uint64_t odd_mask() const { return odd_; }
    int degree() const { return degree_; }
    bool is_one() const { return degree_zero_all(); }
    Parity parity() const { return parity_of_bit(__builtin_popcountll(odd_)); }

    // Non-checking setter used by the ring internals.
    void set(const GeneratorCatalog& cat, size_t i, int k);

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
        return a.e_ < b.e_;
    }

    std::string to_string(const GeneratorCatalog& cat) const;

    friend int mono_mul(const Monomial& a, const Monomial& b, Monomial& out);
    friend Monomial mono_inverse(const Monomial& a);

private:
    bool degree_zero_all() const;
    std::vector<int> e_;
    uint64_t odd_ = 0;
    int degree_ = 0;
};

// Product of monomials: returns sign (+1/-1) or 0 when an odd generator repeats.
int mono_mul(const Monomial& a, const Monomial& b, Monomial& out);
// Reciprocal of an even monomial in invertible generators.
Monomial mono_inverse(const Monomial& a);

class SuperExpr {
public:
    using TermMap = std::map<Monomial, Coeff>;

    SuperExpr() = default;
    explicit SuperExpr(CatalogPtr cat) : cat_(std::move(cat)) {}

    static SuperExpr constant(CatalogPtr cat, const Coeff& c);
    static SuperExpr generator(CatalogPtr cat, size_t i, int power = 1);
    static SuperExpr generator(CatalogPtr cat, std::string_view name, int power = 1);
    static SuperExpr monomial(CatalogPtr cat, const Monomial& m, const Coeff& c);

    const CatalogPtr& catalog() const { return cat_; }
    const TermMap& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::optional<Coeff> constant_value() const;

    Parity parity() const; // zero counts as Even
    bool has_parity(Parity p) const; // zero has every parity
    SuperExpr body() const;  // odd generators set to 0
    SuperExpr part(Parity p) const;
    // Coefficient expression of the odd generator g: e = a + g*c with c free of g.
    SuperExpr strip_left(size_t g) const;

    SuperExpr operator-() const;
    SuperExpr& operator+=(const SuperExpr& o);
    SuperExpr& operator-=(const SuperExpr& o);
    SuperExpr& operator*=(const Coeff& c);
    friend SuperExpr operator+(SuperExpr a, const SuperExpr& b) { return a += b; }
    friend SuperExpr operator-(SuperExpr a, const SuperExpr& b) { return a -= b; }
    friend SuperExpr operator*(const SuperExpr& a, const SuperExpr& b);
    friend SuperExpr operator*(SuperExpr a, const Coeff& c) { return a *= c; }
    friend SuperExpr operator*(const Coeff& c, SuperExpr a) { return a *= c; }
    friend bool operator==(const SuperExpr& a, const SuperExpr& b);
    friend bool operator!=(const SuperExpr& a, const SuperExpr& b) { return !(a == b); }

    void add_term(const Monomial& m, const Coeff& c);

    // Inverse when the body is a single monomial in invertible generators
    // (nilpotent geometric series); nullopt otherwise.
    std::optional<SuperExpr> try_inverse() const;

    std::string to_string() const;
    int max_abs_exponent() const;

private:
    void check_same(const SuperExpr& o) const;
    CatalogPtr cat_;
    TermMap terms_;
};

SuperExpr ring_mul(const SuperExpr& a, const SuperExpr& b);
Parity expr_parity(const SuperExpr& a);
SuperExpr power(const SuperExpr& a, int k);

// num/den with den even and bosonically regular; no gcd normalization.
class SuperFraction {
public:
    SuperFraction() = default;
    explicit SuperFraction(CatalogPtr cat) : num_(cat), den_(SuperExpr::constant(cat, 1)) {}
    SuperFraction(SuperExpr num); // NOLINT: polynomials embed implicitly
    SuperFraction(SuperExpr num, SuperExpr den);

    const SuperExpr& num() const { return num_; }
    const SuperExpr& den() const { return den_; }
    const CatalogPtr& catalog() const { return num_.catalog(); }
    bool is_polynomial() const { return den_is_one_; }
    bool is_zero() const { return num_.is_zero(); }
    Parity parity() const { return num_.parity(); }
    bool has_parity(Parity p) const { return num_.has_parity(p); }

    SuperFraction operator-() const;
    SuperFraction& operator+=(const SuperFraction& o);
    SuperFraction& operator-=(const SuperFraction& o);
    SuperFraction& operator*=(const SuperFraction& o);
    friend SuperFraction operator+(SuperFraction a, const SuperFraction& b) { return a += b; }
    friend SuperFraction operator-(SuperFraction a, const SuperFraction& b) { return a -= b; }
    friend SuperFraction operator*(SuperFraction a, const SuperFraction& b) { return a *= b; }
    friend SuperFraction operator/(const SuperFraction& a, const SuperFraction& b);

    SuperFraction inverse() const; // throws NotInvertible
    bool invertible() const;

    std::string to_string() const;

private:
    void normalize();
    SuperExpr num_, den_;
    bool den_is_one_ = true;
};

bool frac_equal(const SuperFraction& p, const SuperFraction& q);
SuperFraction frac_invert(const SuperFraction& p);
// Exact cross-multiplied difference num(p)den(q) - num(q)den(p).
SuperExpr cross_residual(const SuperFraction& p, const SuperFraction& q);

inline bool operator==(const SuperFraction& a, const SuperFraction& b) { return frac_equal(a, b); }
inline bool operator!=(const SuperFraction& a, const SuperFraction& b) { return !frac_equal(a, b); }

} // namespace superfg
