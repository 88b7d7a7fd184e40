// superfg: verify the identity suites, run deformation scenarios, and emit
// reports. Exit codes: 0 all good, 1 a check failed or mismatched, 2 bad
// input (parse, configuration, unknown scenario).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "superfg/report.hpp"

using namespace superfg;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read model file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superspace immersion-formula verification engine"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string model_path, branch = "plus", format = "text", suite = "identities", scenario;
    RunOptions opt;
    int max_jet = 4;
    app.add_option("--model", model_path, "Model file (default: the bundled sine-Gordon model)");
    app.add_option("--seed", opt.seed, "Seed for random checks")->capture_default_str();
    app.add_option("--trials", opt.trials, "Oracle assignments per comparison")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--tol", opt.tol, "Numeric tolerance")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--odd-units", opt.odd_units, "Odd units in the numeric exterior algebra")
        ->capture_default_str()
        ->check(CLI::Range(1, GrassmannNumber::max_units));
    app.add_option("--max-jet-order", max_jet, "Declared working jet order")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--branch", branch, "Sign branch of the deformation")->capture_default_str()->check(CLI::IsMember({"plus", "minus"}));
    app.add_option("--format", format, "Report format")->capture_default_str()->check(CLI::IsMember({"text", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "Run identity suites");
    verify->add_option("--suite", suite, "identities, displays, oracle or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"identities", "displays", "oracle", "all"}));
    CLI::App* scen = app.add_subcommand("scenario", "Run one deformation scenario");
    scen->add_option("name", scenario, "Scenario name")->required();
    CLI::App* all = app.add_subcommand("all", "Run every suite and every scenario");
    CLI::App* list = app.add_subcommand("list", "List the model's scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.minus_branch = branch == "minus";

    try {
        ParseOptions po;
        po.max_jet_order = max_jet;
        LoadedModel m = model_path.empty() ? build_ssge_model(po) : load_model(read_file(model_path), po);
        if (list->parsed()) {
            for (const auto& n : scenario_names(m)) std::cout << n << "\n";
            return 0;
        }
        Report rep;
        ReportHeader h;
        h.model = model_path.empty() ? "bundled" : model_path;
        h.options = opt;
        h.max_jet_order = max_jet;
        if (verify->parsed()) {
            h.command = "verify --suite " + suite;
            if (suite == "identities" || suite == "all") rep.append(run_identities(m, opt));
            if (suite == "displays" || suite == "all") rep.append(run_displays(m, opt));
            if (suite == "oracle" || suite == "all") rep.append(run_oracle_suite(m, opt));
        } else if (scen->parsed()) {
            h.command = "scenario " + scenario;
            rep = run_scenario(m, scenario, opt);
        } else if (all->parsed()) {
            h.command = "all";
            rep.append(run_identities(m, opt));
            rep.append(run_displays(m, opt));
            rep.append(run_oracle_suite(m, opt));
            for (const auto& n : scenario_names(m)) rep.append(run_scenario(m, n, opt));
        }
        std::cout << (format == "json" ? render_json(rep, h) : render_text(rep, h));
        return rep.failed() ? 1 : 0;
    } catch (const Error& e) {
        std::cerr << "superfg: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return 2;
    }
}
