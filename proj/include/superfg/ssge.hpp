#pragma once

// The bundled supersymmetric sine-Gordon model, and the runner that checks a
// model's spectral problem and deformation scenarios against the expectations
// stated in its model file.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superfg/geometry.hpp"
#include "superfg/model.hpp"
#include "superfg/oracle.hpp"

namespace superfg {

inline constexpr const char* kEngineVersion = "0.1.0";

enum class Status { Match, Mismatch, ErrorMatch, Pass, Fail };
const char* status_name(Status s); // "MATCH", "MISMATCH", "ERROR-MATCH", "PASS", "FAIL"

struct OracleSummary {
    bool equal = false;
    double max_diff = 0;
    int trials = 0;
    std::string witness;
    std::string error; // set when the oracle could not run (e.g. too few units)
};

struct CheckRecord {
    std::string id;     // e.g. "ST_BOSONIC.g12"
    std::string anchor; // where the expectation lives, e.g. "ST_BOSONIC g12 (model line 73)"
    Status status = Status::Pass;
    bool soft = false; // soft mismatches are reported but do not fail a run
    std::string detail;
    std::string expected, actual, residual;
    std::optional<OracleSummary> oracle;

    bool fails() const { return status == Status::Fail || (status == Status::Mismatch && !soft); }
};

struct Report {
    std::vector<CheckRecord> records;

    void add(CheckRecord r) { records.push_back(std::move(r)); }
    void append(const Report& o) { records.insert(records.end(), o.records.begin(), o.records.end()); }
    int count(Status s) const;
    bool failed() const;
    const CheckRecord* find(std::string_view id) const;
};

struct RunOptions {
    uint64_t seed = 1;
    int trials = 5;
    double tol = 1e-9;
    int odd_units = 8;
    bool minus_branch = false; // fixtures belong to the plus branch and are skipped
};

struct LoadedModel {
    ModelFile file;
    SpectralTriple triple;
};

const std::string& bundled_model_text();
// Parses the text and builds U±, V±, W±.
LoadedModel load_model(std::string_view text, const ParseOptions& opt = {});
LoadedModel build_ssge_model(const ParseOptions& opt = {});

std::vector<std::string> scenario_names(const LoadedModel& m);

// Built V±, W± against the model's `check` matrices.
Report run_displays(const LoadedModel& m, const RunOptions& opt);
// Compatibility conditions of the three spectral problems and the Lax
// residuals of the fermionic one.
Report run_structure(const LoadedModel& m, const RunOptions& opt);
// Operator identities on random expressions, word confluence, and structure.
Report run_identities(const LoadedModel& m, const RunOptions& opt, int expressions = 200);
// Numeric oracle cross-validation on the model's catalog.
Report run_oracle_suite(const LoadedModel& m, const RunOptions& opt, int expressions = 200, int matrices = 100);

// Builds the deformation, checks its determining equations, the fundamental
// forms with their reductions and curvatures, and every stated expectation.
// Throws UnknownScenario.
Report run_scenario(const LoadedModel& m, std::string_view name, const RunOptions& opt);

// Engine quantities of one scenario, for callers that need the values
// themselves rather than a report.
struct ScenarioData {
    DeformationMatrices d;
    TangentFrame frame;
    FundamentalForm g, b;
    NormalCheck normal;
};
ScenarioData compute_scenario(const LoadedModel& m, const ScenarioDef& sc, bool minus_branch = false);

} // namespace superfg
