#include "superfg/ssge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace superfg {

// Defined in the generated source that embeds models/ssge.model.
extern const char* const kBundledSsgeModel;

const char* status_name(Status s) {
    switch (s) {
    case Status::Match: return "MATCH";
    case Status::Mismatch: return "MISMATCH";
    case Status::ErrorMatch: return "ERROR-MATCH";
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    }
    return "?";
}

int Report::count(Status s) const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [&](const CheckRecord& r) { return r.status == s; }));
}

bool Report::failed() const {
    return std::any_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.fails(); });
}

const CheckRecord* Report::find(std::string_view id) const {
    for (const auto& r : records)
        if (r.id == id) return &r;
    return nullptr;
}

const std::string& bundled_model_text() {
    static const std::string text(kBundledSsgeModel);
    return text;
}

LoadedModel load_model(std::string_view text, const ParseOptions& opt) {
    LoadedModel m;
    m.file = parse_model(text, opt);
    m.triple = build_triple(m.file.spec, m.file.Uplus, m.file.Uminus);
    return m;
}

LoadedModel build_ssge_model(const ParseOptions& opt) { return load_model(bundled_model_text(), opt); }

std::vector<std::string> scenario_names(const LoadedModel& m) {
    std::vector<std::string> out;
    for (const auto& s : m.file.scenarios) out.push_back(s.name);
    return out;
}

namespace {

CheckRecord record(std::string id, std::string anchor, Status st, std::string detail = {}) {
    CheckRecord r;
    r.id = std::move(id);
    r.anchor = std::move(anchor);
    r.status = st;
    r.detail = std::move(detail);
    return r;
}

CheckRecord pass_fail(std::string id, std::string anchor, bool ok, std::string detail = {}) {
    return record(std::move(id), std::move(anchor), ok ? Status::Pass : Status::Fail, std::move(detail));
}

template <class T>
OracleSummary run_oracle(const T& a, const T& b, const RunOptions& o) {
    OracleSummary s;
    try {
        OracleVerdict v = oracle_equal(a, b, o.trials, o.tol, o.odd_units, o.seed);
        s.equal = v.equal;
        s.max_diff = v.max_diff;
        s.trials = v.trials;
        s.witness = v.witness;
    } catch (const Error& e) {
        s.error = e.what();
    }
    return s;
}

// Nonzero entries of a matrix, as "(i,j): value" lines (1-based).
std::string nonzero_entries(const SuperMatrix& m) {
    std::string s;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            if (!m(i, j).is_zero())
                s += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + m(i, j).to_string() + "\n";
    return s;
}

std::string matrix_residual(const SuperMatrix& expected, const SuperMatrix& actual) {
    std::string s;
    for (int i = 0; i < expected.size(); ++i)
        for (int j = 0; j < expected.size(); ++j) {
            SuperExpr r = cross_residual(expected(i, j), actual(i, j));
            if (!r.is_zero())
                s += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + r.to_string() + "\n";
        }
    return s;
}

CheckRecord compare_scalar(std::string id, std::string anchor, const SuperFraction& expected,
                           const SuperFraction& actual, bool soft, const RunOptions& o) {
    SuperExpr res = cross_residual(expected, actual);
    CheckRecord r = record(std::move(id), std::move(anchor), res.is_zero() ? Status::Match : Status::Mismatch);
    r.soft = soft;
    r.expected = expected.to_string();
    r.actual = actual.to_string();
    r.residual = res.to_string();
    r.oracle = run_oracle(expected, actual, o);
    return r;
}

CheckRecord compare_matrix(std::string id, std::string anchor, const SuperMatrix& expected,
                           const SuperMatrix& actual, bool soft, const RunOptions& o) {
    std::string res = matrix_residual(expected, actual);
    CheckRecord r = record(std::move(id), std::move(anchor), res.empty() ? Status::Match : Status::Mismatch);
    r.soft = soft;
    r.expected = expected.to_string();
    r.actual = actual.to_string();
    r.residual = res.empty() ? "0" : res;
    r.oracle = run_oracle(expected, actual, o);
    return r;
}

std::string zero_detail(const std::set<std::pair<int, int>>& engine, const std::set<std::pair<int, int>>& listed, char form) {
    std::string extra, missing;
    for (const auto& p : engine)
        if (!listed.count(p)) extra += " " + FundamentalForm::label(form, p.first, p.second);
    for (const auto& p : listed)
        if (!engine.count(p)) missing += " " + FundamentalForm::label(form, p.first, p.second);
    std::string s;
    if (!extra.empty()) s += "zero in the engine but not listed:" + extra + "\n";
    if (!missing.empty()) s += "listed as zero but nonzero in the engine:" + missing + "\n";
    return s;
}

const SuperMatrix& deformation_matrix(const DeformationMatrices& d, const std::string& q) {
    bool plus = q[2] == 'p';
    switch (q[0]) {
    case 'A': return d.A(plus);
    case 'B': return d.B(plus);
    default: return d.C(plus);
    }
}

DeformationMatrices build_deformation(const LoadedModel& m, const ScenarioDef& sc, bool minus_branch) {
    const SpectralTriple& t = m.triple;
    switch (sc.kind) {
    case DeformationKind::SymTafel: return build_sym_tafel(t, sc.beta, sc.sector);
    case DeformationKind::Gauge: return build_gauge(t, sc.S, sc.sector);
    case DeformationKind::Symmetry:
        if (minus_branch && !sc.Q_minus)
            throw Error(ErrorKind::ConfigError, "scenario " + sc.name + " has no minus branch");
        return build_symmetry(t, minus_branch ? *sc.Q_minus : sc.Q, sc.sector);
    }
    throw Error(ErrorKind::ConfigError, "unknown deformation kind");
}

// Sum of |term| over |value|: how many digits evaluating e at a loses.
double evaluation_condition(const SuperExpr& e, const Assignment& a) {
    double mag = 0;
    for (const auto& [mono, c] : e.terms()) mag += eval_numeric(SuperExpr::monomial(e.catalog(), mono, c), a).max_abs();
    double v = eval_numeric(e, a).max_abs();
    return v == 0 ? (mag == 0 ? 1 : INFINITY) : mag / v;
}

// Numeric ¼str(b g⁻¹) against the symbolic H on independent assignments.
CheckRecord h_self_consistency(const std::string& prefix, const FundamentalForm& g, const FundamentalForm& b,
                               const SuperFraction& H, const RunOptions& o) {
    SuperMatrix gm = g.matrix(), bm = b.matrix();
    GeneratorSet used = generators_used(gm);
    merge_into(used, generators_used(bm));
    merge_into(used, generators_used(H));
    const CatalogPtr& cat = H.catalog();
    double worst = 0;
    std::string witness;
    int accepted = 0, rejected = 0;
    try {
        for (uint64_t k = 0; accepted < o.trials && k < static_cast<uint64_t>(20 * o.trials); ++k) {
            Assignment a = sample_assignment(cat, o.odd_units, o.seed * 7919 + k, used);
            // H is not gcd-reduced; near a shared root the expanded numerator
            // and denominator cancel catastrophically. Skip assignments where
            // double precision cannot resolve the tolerance.
            if (evaluation_condition(H.num(), a) + evaluation_condition(H.den(), a) > 1e-2 * o.tol / 2.3e-16) {
                ++rejected;
                continue;
            }
            ++accepted;
            NumMatrix ng = eval_numeric(gm, a), nb = eval_numeric(bm, a);
            GrassmannNumber direct = num_supertrace(num_mul(nb, num_inverse(ng))) * cplx(0.25);
            GrassmannNumber sym = eval_numeric(H, a);
            double d = (direct - sym).max_abs() / std::max(1.0, direct.max_abs());
            if (d > worst) worst = d, witness = a.to_string();
        }
    } catch (const Error& e) {
        return pass_fail(prefix + ".H.numeric", prefix + " mean curvature, numeric 1/4 str(b g^-1)", false,
                         std::string("oracle could not run: ") + e.what());
    }
    std::ostringstream d;
    d << "max relative difference " << worst << " over " << accepted << " assignments";
    if (rejected) d << " (" << rejected << " ill-conditioned assignments resampled)";
    CheckRecord r = pass_fail(prefix + ".H.numeric", prefix + " mean curvature, numeric 1/4 str(b g^-1)",
                              worst <= o.tol && accepted == o.trials, d.str());
    if (worst > o.tol) r.detail += "\nworst at " + witness;
    return r;
}

struct Curvature {
    std::optional<SuperFraction> value;
    std::optional<ErrorKind> kind;
    std::string which, message;
};

Curvature curvature(bool mean, const FundamentalForm& g, const FundamentalForm& b) {
    Curvature c;
    try {
        c.value = mean ? mean_curvature(g, b) : gaussian_curvature(g, b);
    } catch (const NotInvertible& e) {
        c.kind = e.kind();
        c.which = e.which();
        c.message = e.what();
    } catch (const Error& e) {
        c.kind = e.kind();
        c.message = e.what();
    }
    return c;
}

} // namespace

ScenarioData compute_scenario(const LoadedModel& m, const ScenarioDef& sc, bool minus_branch) {
    ScenarioData out;
    out.d = build_deformation(m, sc, minus_branch);
    out.frame = make_frame(out.d);
    out.g = metric_coefficients(out.frame);
    out.normal = check_normal(out.frame, sc.N0);
    out.b = second_form_unchecked(out.frame, sc.N0, m.triple);
    return out;
}

Report run_scenario(const LoadedModel& m, std::string_view name, const RunOptions& o) {
    const ScenarioDef& sc = m.file.scenario(name);
    const SpectralTriple& t = m.triple;
    const std::string P = sc.name;
    auto at = [&](const std::string& what, int line) {
        return P + " " + what + " (model line " + std::to_string(line) + ")";
    };
    const bool fixtures = !o.minus_branch;
    Report rep;
    rep.add(record(P + ".branch", at("scenario", sc.line), Status::Pass,
                   std::string(o.minus_branch ? "minus branch; expectations belong to the plus branch and are not compared"
                                              : "plus branch") +
                       "; " + sector_name(sc.sector) + " " + deformation_kind_name(sc.kind)));

    // deformation and its determining equations
    DeformationMatrices d;
    try {
        d = build_deformation(m, sc, o.minus_branch);
        d.check_parity();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        rep.add(pass_fail(P + ".construction", at("deformation", sc.line), false,
                          std::string(error_kind_name(e.kind())) + ": " + e.what()));
        return rep;
    }
    rep.add(pass_fail(P + ".construction", at("deformation", sc.line), true, "sector parity pattern holds"));
    DeformationResiduals res = deformation_residuals(d, t);
    {
        std::string det;
        if (!res.fermionic.is_zero()) det += "fermionic equation:\n" + nonzero_entries(res.fermionic);
        if (!res.x.is_zero()) det += "x equation:\n" + nonzero_entries(res.x);
        if (!res.theta.is_zero()) det += "theta equation:\n" + nonzero_entries(res.theta);
        rep.add(pass_fail(P + ".determining", at("determining equations", sc.line), res.passed(),
                          res.passed() ? "all three residuals vanish on-shell" : det));
    }
    {
        std::string det;
        for (bool plus : {true, false}) {
            BC bc = derive_bc_from_a(plus, d.A(plus), t, sc.sector);
            const char* sfx = plus ? "_p" : "_m";
            if (bc.B != d.B(plus)) det += std::string("B") + sfx + " differs\n" + matrix_residual(d.B(plus), bc.B);
            if (bc.C != d.C(plus)) det += std::string("C") + sfx + " differs\n" + matrix_residual(d.C(plus), bc.C);
        }
        rep.add(pass_fail(P + ".bc_from_a", at("B and C from A", sc.line), det.empty(),
                          det.empty() ? "B, C rebuilt from A agree" : det));
    }

    auto fixture_for = [&](const std::string& q) -> const Fixture* {
        for (const auto& f : sc.fixtures)
            if (f.quantity == q) return &f;
        return nullptr;
    };
    if (fixtures)
        for (const auto& f : sc.fixtures)
            if (f.kind == Fixture::Kind::Matrix)
                rep.add(compare_matrix(P + "." + f.quantity, at(f.quantity, f.line), f.matrix,
                                       deformation_matrix(d, f.quantity), f.soft, o));

    // first fundamental form
    TangentFrame frame = make_frame(d);
    FundamentalForm g;
    try {
        g = metric_coefficients(frame);
    } catch (const Error& e) {
        rep.add(pass_fail(P + ".g.pattern", at("metric", sc.line), false, e.what()));
        return rep;
    }
    rep.add(pass_fail(P + ".g.pattern", at("metric", sc.line), true, "graded symmetry of g holds"));
    for (const auto& c : check_metric_reductions(d, g, t).checks)
        rep.add(pass_fail(P + ".reduction." + c.name, at("metric reduction " + c.name, sc.line), c.passed(),
                          c.passed() ? "" : "residual " + c.residual.to_string()));

    // normal and second fundamental form
    NormalCheck nc = check_normal(frame, sc.N0);
    rep.add(pass_fail(P + ".normal", at("normal " + sc.normal_name, sc.line), nc.passed,
                      nc.passed ? "<N0, N0> = 1 and N0 is orthogonal to the frame"
                                : nc.detail + "; the second form is computed without this precondition"));
    FundamentalForm b;
    try {
        b = second_form_unchecked(frame, sc.N0, t);
    } catch (const Error& e) {
        rep.add(pass_fail(P + ".b.pattern", at("second form", sc.line), false, e.what()));
        return rep;
    }
    rep.add(pass_fail(P + ".b.pattern", at("second form", sc.line), true, "structural pattern of b holds"));
    for (const auto& c : check_second_form_reductions(d, b, sc.N0, t).checks)
        rep.add(pass_fail(P + ".reduction." + c.name, at("second form reduction " + c.name, sc.line), c.passed(),
                          c.passed() ? "" : "residual " + c.residual.to_string()));

    // zero patterns and coefficient expectations
    if (fixtures) {
        for (const auto& z : sc.zeros) {
            const FundamentalForm& f = z.form == 'g' ? g : b;
            std::set<std::pair<int, int>> engine, listed(z.zeros.begin(), z.zeros.end());
            for (int i = 1; i <= 4; ++i)
                for (int j = 1; j <= 4; ++j)
                    if (f(i, j).is_zero()) engine.emplace(i, j);
            std::string det = zero_detail(engine, listed, z.form);
            CheckRecord r = record(P + "." + z.form + ".zeros", at(std::string(1, z.form) + " zero pattern", z.line),
                                   det.empty() ? Status::Match : Status::Mismatch,
                                   det.empty() ? "zero coefficients agree over all 16 entries" : det);
            rep.add(r);
        }
        for (const auto& f : sc.fixtures) {
            if (f.kind != Fixture::Kind::Scalar || (f.quantity[0] != 'g' && f.quantity[0] != 'b')) continue;
            const FundamentalForm& form = f.quantity[0] == 'g' ? g : b;
            int i = f.quantity[1] - '0', j = f.quantity[2] - '0';
            rep.add(compare_scalar(P + "." + f.quantity, at(f.quantity, f.line), f.scalar, form(i, j), f.soft, o));
        }
    }

    // curvatures
    for (bool mean : {true, false}) {
        const std::string q = mean ? "H" : "K";
        Curvature c = curvature(mean, g, b);
        const Fixture* f = fixtures ? fixture_for(q) : nullptr;
        std::string id = P + "." + q, anc = f ? at(q, f->line) : at(q, sc.line);
        if (c.value) {
            if (f && f->kind == Fixture::Kind::Scalar) {
                rep.add(compare_scalar(id, anc, f->scalar, *c.value, f->soft, o));
            } else if (f) {
                CheckRecord r = record(id, anc, Status::Mismatch,
                                       "expected undefined (" + f->undefined_which + " not invertible), but the engine computes it");
                r.soft = f->soft;
                r.expected = "undefined";
                r.actual = c.value->to_string();
                rep.add(r);
            } else {
                CheckRecord r = record(id, anc, Status::Pass, "computed");
                r.actual = c.value->to_string();
                rep.add(r);
            }
            if (mean) rep.add(h_self_consistency(P, g, b, *c.value, o));
        } else {
            std::string err = std::string(error_kind_name(*c.kind)) + (c.which.empty() ? "" : "(" + c.which + ")");
            if (f && f->kind == Fixture::Kind::Undefined) {
                bool same = c.kind == ErrorKind::NotInvertible && c.which == f->undefined_which;
                CheckRecord r = record(id, anc, same ? Status::ErrorMatch : Status::Mismatch, err + ": " + c.message);
                r.soft = f->soft;
                r.expected = "undefined (" + f->undefined_which + " not invertible)";
                r.actual = err;
                rep.add(r);
            } else if (f) {
                CheckRecord r = record(id, anc, Status::Mismatch, err + ": " + c.message);
                r.soft = f->soft;
                r.expected = f->scalar.to_string();
                r.actual = err;
                rep.add(r);
            } else {
                CheckRecord r = record(id, anc, Status::Pass, "not defined: " + err + ": " + c.message);
                r.actual = err;
                rep.add(r);
            }
        }
    }
    return rep;
}

Report run_displays(const LoadedModel& m, const RunOptions& o) {
    const SpectralTriple& t = m.triple;
    Report rep;
    auto built = [&](const std::string& n) -> const SuperMatrix& {
        bool plus = n[2] == 'p';
        return n[0] == 'U' ? t.U(plus) : n[0] == 'V' ? t.V(plus) : t.W(plus);
    };
    for (const auto& c : m.file.checks)
        rep.add(compare_matrix("model." + c.name, "spectral problem " + c.name + " (model line " + std::to_string(c.line) + ")",
                               c.expected, built(c.name), false, o));
    return rep;
}

Report run_structure(const LoadedModel& m, const RunOptions&) {
    const SpectralTriple& t = m.triple;
    const JetSpec& spec = *t.spec;
    Report rep;
    const std::string P = "model";
    auto zero = [&](const std::string& id, const std::string& anc, const SuperMatrix& r) {
        rep.add(pass_fail(P + "." + id, anc, r.is_zero(), r.is_zero() ? "vanishes on-shell" : nonzero_entries(r)));
    };
    SuperMatrix omega = zcc_fermionic(t.Uplus, t.Uminus, spec);
    zero("zcc_fermionic", "fermionic zero-curvature condition", omega);
    zero("zcc_x", "x zero-curvature condition", zcc_x(t.Vplus, t.Vminus, spec));
    ZccThetaDecomposition dec = decompose_zcc_theta(t);
    zero("zcc_theta", "theta zero-curvature condition", dec.total);
    zero("zcc_theta.omega", "theta zero-curvature condition, scalar component", dec.omega);
    zero("zcc_theta.mixed_plus", "theta zero-curvature condition, theta+ component", dec.mixed_plus);
    zero("zcc_theta.mixed_minus", "theta zero-curvature condition, theta- component", dec.mixed_minus);
    zero("zcc_theta.x_part", "theta zero-curvature condition, theta+theta- component", dec.x_part);
    zero("zcc_theta.assembly", "theta zero-curvature decomposition reassembly", dec.assembly_residual);
    LaxResidual lax = lax_residual(t, omega);
    zero("lax_plus", "Lax residual D+ Omega + [Omega, U+]", lax.plus);
    zero("lax_minus", "Lax residual D- Omega + [Omega, U-]", lax.minus);
    zero("omega_long_identity", "Omega / x-condition identity", omega_long_identity_residual(t.Uplus, t.Uminus, spec));
    return rep;
}

Report run_identities(const LoadedModel& m, const RunOptions& o, int expressions) {
    const JetSpec& spec = *m.triple.spec;
    Report rep;
    for (const auto& r : check_operator_identities(spec, expressions, o.seed)) {
        std::string det = std::to_string(r.checked) + " expressions";
        if (!r.passed) det += "; counterexample " + r.counterexample + "; residual " + r.residual;
        rep.add(pass_fail("identity." + r.name, "operator identity " + r.name, r.passed, det));
    }
    IdentityResult c = check_confluence(spec);
    rep.add(pass_fail("identity.confluence", "word reordering signs", c.passed,
                      std::to_string(c.checked) + " words" + (c.passed ? "" : "; " + c.counterexample)));
    rep.append(run_structure(m, o));
    return rep;
}

Report run_oracle_suite(const LoadedModel& m, const RunOptions& o, int expressions, int matrices) {
    const JetSpec& spec = *m.triple.spec;
    const CatalogPtr& cat = spec.catalog();
    Report rep;
    RandomExprOptions small;
    small.terms = 3;
    small.max_jet = 2;
    std::mt19937_64 rng(o.seed);

    // symbolic zeros: graded Leibniz of D+ on random products, evaluated unreduced
    double worst = 0;
    int sound = 0;
    std::string sound_err;
    for (int k = 0; k < expressions && sound_err.empty(); ++k) {
        SuperExpr a = random_field_expr(spec, rng, small).part(Parity::Odd), b = random_field_expr(spec, rng, small);
        SuperExpr lhs = apply_derivation(DerivKind::Dplus, a * b, spec);
        SuperExpr rhs = apply_derivation(DerivKind::Dplus, a, spec) * b - a * apply_derivation(DerivKind::Dplus, b, spec);
        if (!(lhs - rhs).is_zero()) {
            sound_err = "symbolic Leibniz residual on " + a.to_string();
            break;
        }
        GeneratorSet used = generators_used(lhs);
        merge_into(used, generators_used(rhs));
        try {
            Assignment asg = sample_assignment(cat, o.odd_units, o.seed * 1000 + static_cast<uint64_t>(k), used);
            worst = std::max(worst, (eval_numeric(lhs, asg) - eval_numeric(rhs, asg)).max_abs());
            ++sound;
        } catch (const Error& e) {
            sound_err = std::string("oracle could not run: ") + e.what();
        }
    }
    {
        std::ostringstream d;
        d << sound << " symbolic zeros, max |value| " << worst;
        if (!sound_err.empty()) d << "; " << sound_err;
        rep.add(pass_fail("oracle.symbolic_zeros", "evaluation of symbolic zeros (tolerance 1e-12)",
                          sound_err.empty() && worst <= 1e-12, d.str()));
    }

    // Berezinian multiplicativity and Killing-form conjugation invariance
    double ber = 0, kil = 0;
    for (int k = 0; k < matrices; ++k) {
        NumMatrix a = random_num_supermatrix(m.file.m, m.file.n, o.odd_units, false, rng);
        NumMatrix b = random_num_supermatrix(m.file.m, m.file.n, o.odd_units, false, rng);
        GrassmannNumber l = num_berezinian(num_mul(a, b)), r = num_berezinian(a) * num_berezinian(b);
        ber = std::max(ber, (l - r).max_abs() / std::max(1.0, r.max_abs()));
        bool odd = k % 2 == 1;
        NumMatrix x = random_num_supermatrix(m.file.m, m.file.n, o.odd_units, odd, rng);
        NumMatrix y = random_num_supermatrix(m.file.m, m.file.n, o.odd_units, false, rng);
        NumMatrix ai = num_inverse(a);
        NumMatrix cx = num_mul(num_mul(a, x), ai), cy = num_mul(num_mul(a, y), ai);
        GrassmannNumber kc = num_killing(cx, cy, odd);
        GrassmannNumber k0 = num_killing(x, y, odd);
        // Relative to the summands of the conjugated trace, which grow with
        // the condition of a even when the form itself is small.
        double terms = 0;
        for (int i = 0; i < cx.size(); ++i)
            for (int j = 0; j < cx.size(); ++j) terms += (cx(i, j) * cy(j, i)).max_abs();
        kil = std::max(kil, (kc - k0).max_abs() / std::max({1.0, k0.max_abs(), terms}));
    }
    {
        std::ostringstream d;
        d << matrices << " pairs, max relative difference " << ber;
        rep.add(pass_fail("oracle.berezinian", "Berezinian multiplicativity", ber <= o.tol, d.str()));
        std::ostringstream e;
        e << matrices << " conjugations, max relative difference " << kil;
        rep.add(pass_fail("oracle.killing", "Killing form conjugation invariance", kil <= o.tol, e.str()));
    }

    // spectral-parameter derivative of U+ by central differences in s (lambda = s^2)
    if (!m.file.fields.layout.sqrt_lambda) {
        rep.add(pass_fail("oracle.lambda_derivative", "finite difference in lambda", false, "model has no spectral parameter"));
        return rep;
    }
    size_t s = *m.file.fields.layout.sqrt_lambda;
    const SuperMatrix& U = m.triple.Uplus;
    SuperMatrix dl = mat_derive(DerivKind::Dlambda, U, spec);
    double rel = 0;
    std::string fd_err;
    try {
        for (int k = 0; k < o.trials; ++k) {
            Assignment a = sample_assignment(cat, o.odd_units, o.seed * 31 + static_cast<uint64_t>(k), generators_used(U));
            cplx sv = a.value(s).body();
            const double step = 1e-4;
            NumMatrix up = eval_numeric(U, a.with_value(s, GrassmannNumber(a.units, sv + step)));
            NumMatrix um = eval_numeric(U, a.with_value(s, GrassmannNumber(a.units, sv - step)));
            NumMatrix exact = eval_numeric(dl, a);
            for (int i = 0; i < U.size(); ++i)
                for (int j = 0; j < U.size(); ++j) {
                    GrassmannNumber fd = (up(i, j) - um(i, j)) * (1.0 / (2 * step));
                    GrassmannNumber ch = exact(i, j) * (2.0 * sv); // d/ds = 2s d/dlambda
                    rel = std::max(rel, (fd - ch).max_abs() / std::max(1.0, ch.max_abs()));
                }
        }
    } catch (const Error& e) {
        fd_err = e.what();
    }
    std::ostringstream d;
    d << "max relative error " << rel << " over " << o.trials << " assignments";
    if (!fd_err.empty()) d << "; " << fd_err;
    rep.add(pass_fail("oracle.lambda_derivative", "finite difference in lambda of U+ (relative 1e-5)",
                      fd_err.empty() && rel <= 1e-5, d.str()));
    return rep;
}

} // namespace superfg
