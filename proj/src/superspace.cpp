#include "superfg/superspace.hpp"

#include <algorithm>
#include <functional>

namespace superfg {

const char* deriv_name(DerivKind k) {
    switch (k) {
    case DerivKind::Dplus: return "Dplus";
    case DerivKind::Dminus: return "Dminus";
    case DerivKind::DxPlus: return "DxPlus";
    case DerivKind::DxMinus: return "DxMinus";
    case DerivKind::DthetaPlus: return "DthetaPlus";
    case DerivKind::DthetaMinus: return "DthetaMinus";
    case DerivKind::Dlambda: return "Dlambda";
    case DerivKind::Combo: return "Combo";
    }
    return "?";
}

Parity deriv_parity(DerivKind k) {
    switch (k) {
    case DerivKind::Dplus:
    case DerivKind::Dminus:
    case DerivKind::DthetaPlus:
    case DerivKind::DthetaMinus: return Parity::Odd;
    case DerivKind::Combo: return Parity::Heterogeneous;
    default: return Parity::Even;
    }
}

bool is_plus(DerivKind k) {
    return k == DerivKind::Dplus || k == DerivKind::DxPlus || k == DerivKind::DthetaPlus;
}

DerivationOp DerivationOp::combo(std::vector<std::pair<SuperExpr, DerivKind>> t) {
    DerivationOp op{DerivKind::Combo, {}};
    for (auto& [c, k] : t) {
        if (k == DerivKind::Combo) throw Error(ErrorKind::ConfigError, "nested Combo");
        if (!c.is_zero()) op.terms.emplace_back(std::move(c), k);
    }
    return op;
}

Parity DerivationOp::parity() const {
    if (kind != DerivKind::Combo) return deriv_parity(kind);
    std::optional<Parity> p;
    for (const auto& [c, k] : terms) {
        Parity cp = c.parity();
        if (cp == Parity::Heterogeneous)
            throw Error(ErrorKind::ParityError, "Combo coefficient is heterogeneous: " + c.to_string());
        Parity tp = add_parity(cp, deriv_parity(k));
        if (p && *p != tp) throw Error(ErrorKind::ParityError, "Combo mixes parities");
        p = tp;
    }
    return p.value_or(Parity::Even);
}

std::string DerivationOp::to_string() const {
    if (kind != DerivKind::Combo) return deriv_name(kind);
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [c, k] : terms) {
        if (!s.empty()) s += " + ";
        s += "(" + c.to_string() + ")*" + deriv_name(k);
    }
    return s;
}

// ---- catalog ----

FieldCatalog make_field_catalog(const FieldOptions& opt) {
    if (opt.hard_cap < 1) throw Error(ErrorKind::ConfigError, "jet cap must be positive");
    std::vector<Generator> g;
    FieldLayout L;
    L.theta_plus = g.size();
    g.push_back({opt.theta_plus, true, false, "theta+"});
    L.theta_minus = g.size();
    g.push_back({opt.theta_minus, true, false, "theta-"});
    if (opt.with_sqrt_lambda) {
        L.sqrt_lambda = g.size();
        g.push_back({opt.sqrt_lambda, false, true, "sqrt(lambda)"});
    }
    if (opt.with_phase) {
        L.phase = g.size();
        g.push_back({opt.phase, false, true, "exp(i phi)"});
    }
    for (const auto& p : opt.parameters) g.push_back(p);
    for (int a = 1; a <= opt.hard_cap; ++a) {
        bool odd = a % 2 == 1;
        L.jet_plus.push_back(g.size());
        g.push_back({opt.jet_plus + std::to_string(a), odd, false, "D+^" + std::to_string(a) + " phi"});
        L.jet_minus.push_back(g.size());
        g.push_back({opt.jet_minus + std::to_string(a), odd, false, "D-^" + std::to_string(a) + " phi"});
    }
    return {make_catalog(std::move(g)), std::move(L)};
}

// ---- derivation kernels ----

namespace {

using Lookup = std::function<const SuperExpr&(size_t)>;

Monomial restrict(const GeneratorCatalog& cat, const Monomial& m, size_t lo, size_t hi) {
    Monomial r(cat.size());
    for (size_t j = lo; j < hi; ++j)
        if (m.exp(j)) r.set(cat, j, m.exp(j));
    return r;
}

// Odd derivation by graded Leibniz over canonical monomials.
SuperExpr derive_odd(const SuperExpr& e, const Lookup& image) {
    const CatalogPtr& cp = e.catalog();
    SuperExpr out(cp);
    if (e.is_zero()) return out;
    const GeneratorCatalog& cat = *cp;
    for (const auto& [m, c] : e.terms()) {
        int odd_before = 0;
        for (size_t i = 0; i < cat.size(); ++i) {
            int k = m.exp(i);
            if (!k) continue;
            const SuperExpr& img = image(i);
            if (!img.is_zero()) {
                SuperExpr factor = img;
                Coeff cc = (odd_before & 1) ? -c : c;
                Monomial left = restrict(cat, m, 0, i), right = restrict(cat, m, i + 1, cat.size());
                if (!cat[i].odd) {
                    Monomial pw(cat.size());
                    pw.set(cat, i, k - 1);
                    cc *= Coeff(k);
                    left = [&] {
                        Monomial r;
                        mono_mul(left, pw, r); // both even parts commute freely
                        return r;
                    }();
                }
                SuperExpr term = SuperExpr::monomial(cp, left, cc) * factor *
                                 SuperExpr::monomial(cp, right, Coeff(1));
                out += term;
            }
            if (cat[i].odd) ++odd_before;
        }
    }
    return out;
}

} // namespace

// ---- JetSpec ----

JetSpec::JetSpec(FieldCatalog fc, SuperExpr rhs, int max_order)
    : fc_(std::move(fc)), rhs_(std::move(rhs)), max_order_(max_order) {
    if (!rhs_.catalog()) rhs_ = SuperExpr(fc_.catalog);
    if (!rhs_.has_parity(Parity::Even))
        throw Error(ErrorKind::ParityError, "equation right-hand side must be even: " + rhs_.to_string());
    if (max_order_ < 1) throw Error(ErrorKind::ConfigError, "max jet order must be positive");
    if (max_order_ > hard_cap())
        throw Error(ErrorKind::JetOrderOverflow, "max jet order " + std::to_string(max_order_) +
                                                     " exceeds the hard cap " + std::to_string(hard_cap()));
    jet_of_.assign(fc_.catalog->size(), 0);
    for (size_t a = 0; a < fc_.layout.jet_plus.size(); ++a) {
        jet_of_[fc_.layout.jet_plus[a]] = static_cast<int>(a + 1);
        jet_of_[fc_.layout.jet_minus[a]] = static_cast<int>(a + 1);
    }
    build_tables();
}

SuperExpr JetSpec::theta(bool plus) const {
    return SuperExpr::generator(fc_.catalog, plus ? fc_.layout.theta_plus : fc_.layout.theta_minus);
}

SuperExpr JetSpec::jet(bool plus, int order) const {
    const auto& v = plus ? fc_.layout.jet_plus : fc_.layout.jet_minus;
    if (order < 1 || order > static_cast<int>(v.size()))
        throw Error(ErrorKind::JetOrderOverflow, "jet order " + std::to_string(order) +
                                                     " outside 1.." + std::to_string(v.size()));
    return SuperExpr::generator(fc_.catalog, v[order - 1]);
}

int JetSpec::jet_order(const SuperExpr& e) const {
    int r = 0;
    for (const auto& [m, c] : e.terms())
        for (size_t i = 0; i < jet_of_.size(); ++i)
            if (m.exp(i)) r = std::max(r, jet_of_[i]);
    return r;
}

void JetSpec::build_tables() {
    const CatalogPtr& cp = fc_.catalog;
    const auto& L = fc_.layout;
    const size_t n = cp->size();
    dplus_.assign(n, Entry{SuperExpr(cp)});
    dminus_.assign(n, Entry{SuperExpr(cp)});
    const Coeff I = Coeff::imag_unit();
    dplus_[L.theta_plus].value = one();
    dminus_[L.theta_minus].value = one();
    if (L.phase) {
        SuperExpr X = SuperExpr::generator(cp, *L.phase);
        dplus_[*L.phase].value = I * (X * jet(true, 1));
        dminus_[*L.phase].value = I * (X * jet(false, 1));
    }
    const int cap = hard_cap();
    for (int a = 1; a <= cap; ++a) {
        Entry& p = dplus_[L.jet_plus[a - 1]];
        Entry& m = dminus_[L.jet_minus[a - 1]];
        if (a < cap) {
            p.value = jet(true, a + 1);
            m.value = jet(false, a + 1);
        } else {
            p.overflow = m.overflow = true;
        }
    }
    // Mixed rules, by increasing order so that each step only needs lower ones.
    dplus_[L.jet_minus[0]] = Entry{rhs_, false, true};
    dminus_[L.jet_plus[0]] = Entry{-rhs_, false, true};
    auto lookup = [this](bool plus) {
        return [this, plus](size_t g) -> const SuperExpr& {
            const Entry& en = (plus ? dplus_ : dminus_)[g];
            if (en.overflow)
                throw Error(ErrorKind::JetOrderOverflow, "jet order exceeds the hard cap " +
                                                             std::to_string(hard_cap()));
            return en.value;
        };
    };
    for (int b = 2; b <= cap; ++b) {
        for (bool plus : {true, false}) {
            // D+(D-^b phi) = -D-(D+(D-^{b-1} phi)), and symmetrically.
            size_t g = plus ? L.jet_minus[b - 1] : L.jet_plus[b - 1];
            size_t prev = plus ? L.jet_minus[b - 2] : L.jet_plus[b - 2];
            Entry& slot = (plus ? dplus_ : dminus_)[g];
            slot.mixed = true;
            try {
                const SuperExpr& inner = (plus ? dplus_ : dminus_)[prev].value;
                slot.value = -derive_odd(inner, lookup(!plus));
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::JetOrderOverflow) throw;
                slot.overflow = true;
            }
        }
    }
}

const SuperExpr& JetSpec::gen_image(bool plus, size_t g, RewriteTrace* trace) const {
    const Entry& en = (plus ? dplus_ : dminus_)[g];
    if (en.overflow)
        throw Error(ErrorKind::JetOrderOverflow,
                    std::string("derivative of ") + (*fc_.catalog)[g].name + " exceeds the jet hard cap " +
                        std::to_string(hard_cap()));
    if (trace && en.mixed) ++trace->equation_uses;
    return en.value;
}

// ---- application ----

namespace {

SuperExpr primitive(bool plus, const SuperExpr& e, const JetSpec& spec, RewriteTrace* trace) {
    return derive_odd(e, [&](size_t g) -> const SuperExpr& { return spec.gen_image(plus, g, trace); });
}

SuperExpr dlambda(const SuperExpr& e, const JetSpec& spec) {
    SuperExpr out(spec.catalog());
    const auto& s = spec.layout().sqrt_lambda;
    if (!s) return out;
    for (const auto& [m, c] : e.terms()) {
        int k = m.exp(*s);
        if (!k) continue;
        Monomial r = m;
        r.set(*spec.catalog(), *s, k - 2);
        out.add_term(r, c * Coeff::rational(k, 2));
    }
    return out;
}

SuperExpr apply_basic(DerivKind k, const SuperExpr& e, const JetSpec& spec, RewriteTrace* trace) {
    const Coeff I = Coeff::imag_unit();
    switch (k) {
    case DerivKind::Dplus: return primitive(true, e, spec, trace);
    case DerivKind::Dminus: return primitive(false, e, spec, trace);
    case DerivKind::DxPlus:
    case DerivKind::DxMinus: {
        bool p = k == DerivKind::DxPlus;
        return I * primitive(p, primitive(p, e, spec, trace), spec, trace);
    }
    case DerivKind::DthetaPlus:
    case DerivKind::DthetaMinus: {
        bool p = k == DerivKind::DthetaPlus;
        SuperExpr d = primitive(p, e, spec, trace);
        SuperExpr dx = I * primitive(p, d, spec, trace);
        return d + I * (spec.theta(p) * dx);
    }
    case DerivKind::Dlambda: return dlambda(e, spec);
    case DerivKind::Combo: break;
    }
    throw Error(ErrorKind::ConfigError, "Combo is not a basic derivation");
}

} // namespace

SuperExpr apply_derivation(const DerivationOp& op, const SuperExpr& e, const JetSpec& spec,
                           RewriteTrace* trace) {
    if (e.catalog() && !e.catalog()->same_as(*spec.catalog()))
        throw Error(ErrorKind::CatalogMismatch, "expression is not over the jet catalog");
    SuperExpr r(spec.catalog());
    if (op.kind != DerivKind::Combo) {
        r = apply_basic(op.kind, e, spec, trace);
    } else {
        if (op.parity() == Parity::Odd && e.parity() == Parity::Heterogeneous)
            throw Error(ErrorKind::ParityError, "odd Combo applied to a heterogeneous expression");
        for (const auto& [c, k] : op.terms) r += c * apply_basic(k, e, spec, trace);
    }
    if (trace) trace->highest_jet = std::max(trace->highest_jet, spec.jet_order(r));
    return r;
}

SuperExpr apply_derivation(DerivKind k, const SuperExpr& e, const JetSpec& spec, RewriteTrace* trace) {
    return apply_derivation(DerivationOp::basic(k), e, spec, trace);
}

SuperFraction apply_derivation(const DerivationOp& op, const SuperFraction& f, const JetSpec& spec,
                               RewriteTrace* trace) {
    if (f.is_polynomial()) return SuperFraction(apply_derivation(op, f.num(), spec, trace));
    if (op.kind == DerivKind::Combo) {
        SuperFraction r(spec.catalog());
        for (const auto& [c, k] : op.terms)
            r += SuperFraction(c) * apply_derivation(DerivationOp::basic(k), f, spec, trace);
        return r;
    }
    const SuperExpr &n = f.num(), &d = f.den();
    SuperExpr dn = apply_derivation(op, n, spec, trace), dd = apply_derivation(op, d, spec, trace);
    SuperExpr sgn_n = deriv_parity(op.kind) == Parity::Odd ? n.part(Parity::Even) - n.part(Parity::Odd) : n;
    return SuperFraction(dn * d - sgn_n * dd, d * d);
}

SuperExpr reduce_to_jets(const std::vector<DerivKind>& word, const JetSpec& spec, RewriteTrace* trace) {
    if (word.empty()) throw Error(ErrorKind::ConfigError, "empty derivative word");
    for (DerivKind k : word)
        if (k != DerivKind::Dplus && k != DerivKind::Dminus)
            throw Error(ErrorKind::ConfigError, "words are over Dplus/Dminus only");
    SuperExpr v = spec.jet(word.back() == DerivKind::Dplus, 1);
    for (size_t i = word.size() - 1; i-- > 0;) v = apply_derivation(word[i], v, spec, trace);
    return v;
}

// ---- random expressions and identity suites ----

SuperExpr random_field_expr(const JetSpec& spec, std::mt19937_64& rng, const RandomExprOptions& opt) {
    const CatalogPtr& cp = spec.catalog();
    const auto& L = spec.layout();
    std::vector<size_t> pool;
    if (opt.use_theta) {
        pool.push_back(L.theta_plus);
        pool.push_back(L.theta_minus);
    }
    if (L.sqrt_lambda) pool.push_back(*L.sqrt_lambda);
    if (L.phase) pool.push_back(*L.phase);
    int mj = std::min(opt.max_jet, spec.hard_cap());
    for (int a = 1; a <= mj; ++a) {
        pool.push_back(L.jet_plus[a - 1]);
        pool.push_back(L.jet_minus[a - 1]);
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
    std::uniform_int_distribution<int> nf(0, opt.max_factors);
    std::uniform_int_distribution<int> pw(1, std::max(1, opt.max_power));
    std::uniform_int_distribution<int> cf(-opt.coeff_range, opt.coeff_range);
    std::bernoulli_distribution neg(0.3);
    SuperExpr e(cp);
    for (int t = 0; t < opt.terms; ++t) {
        SuperExpr term = SuperExpr::constant(cp, 1);
        int f = nf(rng);
        for (int j = 0; j < f; ++j) {
            size_t g = pool[pick(rng)];
            int k = (*cp)[g].odd ? 1 : pw(rng);
            if ((*cp)[g].invertible && neg(rng)) k = -k;
            term = term * SuperExpr::generator(cp, g, k);
        }
        int re = cf(rng), im = cf(rng);
        if (re == 0 && im == 0) re = 1;
        e += Coeff(re, im) * term;
    }
    return e;
}

std::vector<IdentityResult> check_operator_identities(const JetSpec& spec, int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Coeff I = Coeff::imag_unit();
    const SuperExpr zero = spec.zero();
    std::vector<IdentityResult> out = {
        {"D+^2 = -i Dx+"}, {"D-^2 = -i Dx-"}, {"{D+,D-} = 0"},
        {"Dtheta+ = D+ + i th_p Dx+"}, {"Dtheta-^2 = 0 and Dtheta+^2 = 0"},
        {"Dx+ even Leibniz"}, {"{D+, Dtheta+} = -i Dx+"}, {"[Dlambda, D+-] = 0"},
    };
    auto record = [&](IdentityResult& r, const SuperExpr& input, const SuperExpr& resid) {
        ++r.checked;
        if (!resid.is_zero() && r.passed) {
            r.passed = false;
            r.counterexample = input.to_string();
            r.residual = resid.to_string();
        }
    };
    RandomExprOptions opt;
    opt.max_jet = std::max(1, std::min(spec.max_order() - 2, spec.hard_cap() - 3));
    using K = DerivKind;
    auto D = [&](K k, const SuperExpr& e) { return apply_derivation(k, e, spec); };
    for (int t = 0; t < trials; ++t) {
        SuperExpr e = random_field_expr(spec, rng, opt);
        SuperExpr f = random_field_expr(spec, rng, opt);
        record(out[0], e, D(K::Dplus, D(K::Dplus, e)) + I * D(K::DxPlus, e));
        record(out[1], e, D(K::Dminus, D(K::Dminus, e)) + I * D(K::DxMinus, e));
        record(out[2], e, D(K::Dplus, D(K::Dminus, e)) + D(K::Dminus, D(K::Dplus, e)));
        // D+ = Dtheta+ - i th_p Dx+, checked through the reconstruction.
        record(out[3], e, D(K::Dplus, e) - (D(K::DthetaPlus, e) - I * (spec.theta(true) * D(K::DxPlus, e))));
        record(out[4], e, D(K::DthetaPlus, D(K::DthetaPlus, e)) + D(K::DthetaMinus, D(K::DthetaMinus, e)));
        record(out[5], e, D(K::DxPlus, e * f) - (D(K::DxPlus, e) * f + e * D(K::DxPlus, f)));
        record(out[6], e, D(K::Dplus, D(K::DthetaPlus, e)) + D(K::DthetaPlus, D(K::Dplus, e)) +
                              I * D(K::DxPlus, e));
        record(out[7], e, D(K::Dlambda, D(K::Dplus, e)) - D(K::Dplus, D(K::Dlambda, e)) +
                              D(K::Dlambda, D(K::Dminus, e)) - D(K::Dminus, D(K::Dlambda, e)));
    }
    return out;
}

IdentityResult check_confluence(const JetSpec& spec, int max_len) {
    IdentityResult r{"confluence of D+/D- words"};
    using K = DerivKind;
    for (int len = 1; len <= max_len; ++len) {
        for (int p = 0; p <= len; ++p) {
            // Reference word: all D+ to the left of all D-.
            std::vector<K> ref(len, K::Dminus);
            std::fill(ref.begin(), ref.begin() + p, K::Dplus);
            SuperExpr vref = reduce_to_jets(ref, spec);
            std::vector<int> bits(len, 0);
            std::fill(bits.begin() + (len - p), bits.end(), 1); // 1 = D+
            do {
                std::vector<K> w(len);
                int inv = 0, minus_seen = 0;
                for (int i = 0; i < len; ++i) {
                    w[i] = bits[i] ? K::Dplus : K::Dminus;
                    if (bits[i]) inv += minus_seen;
                    else ++minus_seen;
                }
                SuperExpr v = reduce_to_jets(w, spec);
                SuperExpr resid = (inv & 1) ? v + vref : v - vref;
                ++r.checked;
                if (!resid.is_zero() && r.passed) {
                    r.passed = false;
                    std::string ws;
                    for (K k : w) ws += (k == K::Dplus ? "+" : "-");
                    r.counterexample = "word " + ws;
                    r.residual = resid.to_string();
                }
            } while (std::next_permutation(bits.begin(), bits.end()));
        }
    }
    return r;
}

} // namespace superfg
