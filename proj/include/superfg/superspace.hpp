#pragma once

// Jet calculus for one bosonic superfield phi: covariant derivations D±, their
// derived operators D_x±, D_theta±, and the spectral derivative d/dlambda.
// Mixed jets are eliminated eagerly through the field equation D+(D- phi) = rhs.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "superfg/ring.hpp"

namespace superfg {

struct FieldLayout {
    size_t theta_plus = 0, theta_minus = 0;
    std::optional<size_t> sqrt_lambda; // s with lambda = s^2
    std::optional<size_t> phase;       // X = e^{i phi}
    std::vector<size_t> jet_plus;      // jet_plus[a-1] = D+^a phi
    std::vector<size_t> jet_minus;
};

struct FieldOptions {
    std::string theta_plus = "th_p", theta_minus = "th_m";
    std::string sqrt_lambda = "s", phase = "X";
    std::string jet_plus = "Dp", jet_minus = "Dm";
    bool with_sqrt_lambda = true, with_phase = true;
    int hard_cap = 12;
    std::vector<Generator> parameters; // constants: all derivations vanish on them
};

struct FieldCatalog {
    CatalogPtr catalog;
    FieldLayout layout;
};

FieldCatalog make_field_catalog(const FieldOptions& opt = {});

enum class DerivKind { Dplus, Dminus, DxPlus, DxMinus, DthetaPlus, DthetaMinus, Dlambda, Combo };

const char* deriv_name(DerivKind k);
Parity deriv_parity(DerivKind k);
bool is_plus(DerivKind k);

struct DerivationOp {
    DerivKind kind = DerivKind::Dplus;
    // Combo: sum of coeff * basic(argument).
    std::vector<std::pair<SuperExpr, DerivKind>> terms;

    static DerivationOp basic(DerivKind k) { return DerivationOp{k, {}}; }
    static DerivationOp combo(std::vector<std::pair<SuperExpr, DerivKind>> t);
    Parity parity() const; // throws ParityError for a heterogeneous Combo
    bool is_zero() const { return kind == DerivKind::Combo && terms.empty(); }
    std::string to_string() const;
};

// Counts how often the field equation was used while rewriting.
struct RewriteTrace {
    long equation_uses = 0;
    int highest_jet = 0;
};

class JetSpec {
public:
    JetSpec(FieldCatalog fc, SuperExpr rhs, int max_order = 4);

    const CatalogPtr& catalog() const { return fc_.catalog; }
    const FieldLayout& layout() const { return fc_.layout; }
    const SuperExpr& rhs() const { return rhs_; }
    int max_order() const { return max_order_; }
    int hard_cap() const { return static_cast<int>(fc_.layout.jet_plus.size()); }

    SuperExpr theta(bool plus) const;
    SuperExpr jet(bool plus, int order) const; // D±^order phi
    SuperExpr one() const { return SuperExpr::constant(fc_.catalog, 1); }
    SuperExpr zero() const { return SuperExpr(fc_.catalog); }
    // Highest pure-jet order occurring in e (0 when none).
    int jet_order(const SuperExpr& e) const;

    // Image of generator g under D+ (plus) or D-.
    const SuperExpr& gen_image(bool plus, size_t g, RewriteTrace* trace = nullptr) const;

private:
    struct Entry {
        SuperExpr value;
        bool overflow = false;
        bool mixed = false;
    };
    void build_tables();
    FieldCatalog fc_;
    SuperExpr rhs_;
    int max_order_;
    std::vector<Entry> dplus_, dminus_;
    std::vector<int> jet_of_; // order of jet generator, 0 otherwise
};

SuperExpr apply_derivation(const DerivationOp& op, const SuperExpr& e, const JetSpec& spec,
                           RewriteTrace* trace = nullptr);
SuperExpr apply_derivation(DerivKind k, const SuperExpr& e, const JetSpec& spec,
                           RewriteTrace* trace = nullptr);
SuperFraction apply_derivation(const DerivationOp& op, const SuperFraction& f, const JetSpec& spec,
                               RewriteTrace* trace = nullptr);

// Value of word applied to phi; the rightmost symbol acts first.
SuperExpr reduce_to_jets(const std::vector<DerivKind>& word, const JetSpec& spec,
                         RewriteTrace* trace = nullptr);

// Random expressions over the field catalog for identity testing.
struct RandomExprOptions {
    int terms = 4;
    int max_jet = 3;
    int max_power = 2;
    int max_factors = 3;
    int coeff_range = 3;
    bool use_theta = true;
};
SuperExpr random_field_expr(const JetSpec& spec, std::mt19937_64& rng,
                            const RandomExprOptions& opt = {});

struct IdentityResult {
    std::string name;
    bool passed = true;
    int checked = 0;
    std::string counterexample; // input expression on failure
    std::string residual;
};

std::vector<IdentityResult> check_operator_identities(const JetSpec& spec, int trials,
                                                      uint64_t seed = 1);
// Words of length <= max_len over {D+, D-}: every ordering of a multiset agrees
// with the sign of its unlike-symbol inversions.
IdentityResult check_confluence(const JetSpec& spec, int max_len = 4);

} // namespace superfg
