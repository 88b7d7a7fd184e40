// Acceptance run over the bundled sine-Gordon model: one PASS/FAIL line per
// criterion, with the records that decided it. Exits 1 when any criterion fails.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "superfg/report.hpp"

using namespace superfg;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string what) {
        if (!ok) {
            pass = false;
            while (!what.empty() && what.back() == '\n') what.pop_back();
            notes.push_back(what);
        }
    }
};

const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {"ST_BOSONIC", "TRANSLATION_X", "GAUGE_BOSONIC", "SUSY_J",
                                               "GAUGE_FERMIONIC"};
    return n;
}

bool is(const Report& r, const std::string& id, Status s) {
    const CheckRecord* c = r.find(id);
    return c && c->status == s;
}

std::string status_text(const Report& r, const std::string& id) {
    const CheckRecord* c = r.find(id);
    return c ? status_name(c->status) : "missing";
}

Verdict operator_identities(const LoadedModel& m) {
    Verdict v;
    Report r = run_identities(m, RunOptions{}, 200);
    for (const auto& c : r.records)
        if (c.id.rfind("identity.", 0) == 0) v.require(c.status == Status::Pass, c.id + " " + status_name(c.status));
    if (v.pass) v.notes.push_back("all operator identities exact on 200 expressions");
    return v;
}

Verdict structure(const LoadedModel& m) {
    Verdict v;
    Report d = run_displays(m, RunOptions{});
    for (const char* id : {"model.V_p", "model.V_m", "model.W_p", "model.W_m"}) {
        const CheckRecord* c = d.find(id);
        v.require(c && c->status == Status::Match,
                  std::string(id) + " " + status_text(d, id) + (c && !c->residual.empty() ? " at " + c->residual : ""));
    }
    Report s = run_structure(m, RunOptions{});
    for (const auto& c : s.records) v.require(c.status == Status::Pass, c.id + " " + status_name(c.status));
    if (v.pass) v.notes.push_back("displays reproduced, all compatibility conditions vanish");
    return v;
}

Verdict per_scenario(const std::map<std::string, Report>& runs, const std::string& what,
                     bool (*selects)(const std::string&)) {
    Verdict v;
    int n = 0;
    for (const auto& [name, r] : runs)
        for (const auto& c : r.records)
            if (selects(c.id.substr(name.size() + 1))) {
                ++n;
                v.require(c.status == Status::Pass, c.id + " " + status_name(c.status));
            }
    v.require(n > 0, "no " + what + " records");
    if (v.pass) v.notes.push_back(std::to_string(n) + " " + what + " checks pass");
    return v;
}

Verdict fixtures(const std::map<std::string, Report>& runs) {
    Verdict v;
    const std::vector<std::pair<std::string, std::vector<std::string>>> required = {
        {"ST_BOSONIC", {"g12", "b14", "b23"}}, {"TRANSLATION_X", {"g11", "b11", "b22"}},
        {"GAUGE_BOSONIC", {"b11", "b14"}},     {"SUSY_J", {"b11", "b22"}},
        {"GAUGE_FERMIONIC", {"b13", "b34"}}};
    for (const auto& [name, qs] : required) {
        const Report& r = runs.at(name);
        for (const char* z : {".g.zeros", ".b.zeros"})
            v.require(is(r, name + z, Status::Match), name + z + " " + status_text(r, name + z));
        for (const auto& q : qs) v.require(is(r, name + "." + q, Status::Match), name + "." + q + " " + status_text(r, name + "." + q));
        for (const auto& c : r.records)
            if (c.status == Status::Mismatch && !c.expected.empty() && c.expected != "undefined")
                v.require(!c.residual.empty() && c.oracle && c.oracle->error.empty(),
                          c.id + " mismatch without residual or oracle verdict");
    }
    if (v.pass) v.notes.push_back("zero patterns and required fixtures match");
    return v;
}

Verdict curvature_errors(const std::map<std::string, Report>& runs) {
    Verdict v;
    const std::vector<std::string> ids = {"ST_BOSONIC.K",      "TRANSLATION_X.H", "TRANSLATION_X.K", "GAUGE_BOSONIC.H",
                                          "GAUGE_BOSONIC.K",   "SUSY_J.H",        "GAUGE_FERMIONIC.H"};
    for (const auto& id : ids) {
        const Report& r = runs.at(id.substr(0, id.find('.')));
        const CheckRecord* c = r.find(id);
        v.require(c && c->status == Status::ErrorMatch,
                  id + " " + status_text(r, id) + (c && c->status == Status::Mismatch ? " (" + c->detail + ")" : ""));
    }
    if (v.pass) v.notes.push_back("every undefined curvature is an ERROR-MATCH");
    return v;
}

Verdict mean_curvature(const std::map<std::string, Report>& runs) {
    Verdict v;
    const Report& r = runs.at("ST_BOSONIC");
    const CheckRecord* h = r.find("ST_BOSONIC.H");
    v.require(h && h->soft && (h->status == Status::Match || (h->status == Status::Mismatch && !h->residual.empty())),
              "ST_BOSONIC.H not computed with a soft comparison");
    const CheckRecord* n = r.find("ST_BOSONIC.H.numeric");
    v.require(n && n->status == Status::Pass, "ST_BOSONIC.H.numeric " + status_text(r, "ST_BOSONIC.H.numeric"));
    if (v.pass) v.notes.push_back(n->detail + "; printed H " + status_name(h->status) + " (soft)");
    return v;
}

Verdict gauge_symmetry(const LoadedModel& m) {
    Verdict v;
    const SpectralTriple& t = m.triple;
    DeformationMatrices g = build_gauge(t, t.Vplus, Sector::Bosonic);
    DeformationMatrices s = build_symmetry(t, DerivationOp::basic(DerivKind::DxPlus), Sector::Bosonic);
    v.require(g.Aplus == s.Aplus, "A+ differs");
    v.require(g.Aminus == s.Aminus, "A- differs");
    if (v.pass) v.notes.push_back("A+- from the x+ translation equal A+- from the gauge S = V+");
    return v;
}

Verdict oracle(const LoadedModel& m) {
    Verdict v;
    Report r = run_oracle_suite(m, RunOptions{}, 200, 100);
    for (const auto& c : r.records) {
        v.require(c.status == Status::Pass, c.id + " " + status_name(c.status) + ": " + c.detail);
        if (c.status == Status::Pass) v.notes.push_back(c.detail);
    }
    return v;
}

Verdict round_trip(const LoadedModel& m) {
    Verdict v;
    const JetSpec& spec = *m.triple.spec;
    std::mt19937_64 rng(77);
    RandomExprOptions o;
    o.terms = 5;
    o.max_power = 3;
    int ok = 0;
    for (int k = 0; k < 200; ++k) {
        SuperExpr e = random_field_expr(spec, rng, o);
        std::string text = e.to_string();
        try {
            SuperFraction back = parse_scalar(text, spec.catalog(), &spec);
            bool same = back == SuperFraction(e) && back.to_string() == text;
            v.require(same, "round trip changed " + text);
            ok += same;
        } catch (const Error& err) {
            v.require(false, "cannot parse " + text + ": " + err.what());
        }
    }
    RunOptions ro;
    ro.seed = 42;
    ReportHeader h;
    h.command = "scenario SUSY_J";
    h.model = "bundled";
    h.options = ro;
    std::string a = render_json(run_scenario(m, "SUSY_J", ro), h), b = render_json(run_scenario(m, "SUSY_J", ro), h);
    h.command = "verify --suite oracle";
    std::string c = render_text(run_oracle_suite(m, ro), h), d = render_text(run_oracle_suite(m, ro), h);
    v.require(a == b && c == d, "reports differ between identical runs");
    if (v.pass) v.notes.push_back(std::to_string(ok) + " expressions round-trip; reports byte-identical");
    return v;
}

} // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    LoadedModel m = build_ssge_model();
    std::map<std::string, Report> runs;
    for (const auto& n : names()) runs.emplace(n, run_scenario(m, n, RunOptions{}));

    const std::vector<std::pair<std::string, Verdict>> criteria = {
        {"operator identities", operator_identities(m)},
        {"structural reconstruction", structure(m)},
        {"determining equations",
         per_scenario(runs, "determining", [](const std::string& id) { return id == "determining" || id == "construction"; })},
        {"reduction identities",
         per_scenario(runs, "reduction", [](const std::string& id) { return id.rfind("reduction.", 0) == 0; })},
        {"fixture conformance", fixtures(runs)},
        {"curvature error semantics", curvature_errors(runs)},
        {"mean curvature", mean_curvature(runs)},
        {"gauge-symmetry equivalence", gauge_symmetry(m)},
        {"oracle cross-validation", oracle(m)},
        {"round trip and determinism", round_trip(m)},
    };

    int failed = 0, k = 0;
    for (const auto& [title, v] : criteria) {
        ++k;
        failed += !v.pass;
        std::cout << "criterion " << k << " " << (v.pass ? "PASS" : "FAIL") << "  " << title << "\n";
        for (const auto& n : v.notes) std::cout << "    " << n << "\n";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream t;
    t.precision(1);
    t << std::fixed << secs;
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass (" << t.str() << " s)\n";
    return failed ? 1 : 0;
}
