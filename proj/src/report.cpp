#include "superfg/report.hpp"

#include <json.hpp>
#include <sstream>

namespace superfg {

namespace {

const Status kOrder[] = {Status::Match, Status::Mismatch, Status::ErrorMatch, Status::Pass, Status::Fail};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << x;
    return s.str();
}

void indent(std::ostringstream& out, const std::string& label, const std::string& text) {
    if (text.empty()) return;
    out << "    " << label << ":";
    std::istringstream in(text);
    std::string line;
    bool multi = text.find('\n') != std::string::npos && text.find('\n') + 1 < text.size();
    if (!multi) {
        std::getline(in, line);
        out << " " << line << "\n";
        return;
    }
    out << "\n";
    while (std::getline(in, line)) out << "      " << line << "\n";
}

} // namespace

std::string render_text(const Report& r, const ReportHeader& h) {
    std::ostringstream out;
    out << "superfg " << kEngineVersion << " | " << h.command << " | model " << h.model << " | seed "
        << h.options.seed << " | trials " << h.options.trials << " | tol " << fmt(h.options.tol) << " | odd units "
        << h.options.odd_units << " | branch " << (h.options.minus_branch ? "minus" : "plus") << "\n\n";
    for (const auto& c : r.records) {
        std::string tag = std::string("[") + status_name(c.status) + (c.soft ? ", soft" : "") + "]";
        out << tag << std::string(tag.size() < 18 ? 18 - tag.size() : 1, ' ') << c.id << "  -- " << c.anchor << "\n";
        bool verbose = c.status == Status::Mismatch || c.status == Status::Fail;
        if (verbose || c.status == Status::ErrorMatch) indent(out, "detail", c.detail);
        if (verbose) {
            indent(out, "expected", c.expected);
            indent(out, "actual", c.actual);
            indent(out, "residual", c.residual);
            if (c.oracle) {
                if (!c.oracle->error.empty())
                    out << "    oracle: not run (" << c.oracle->error << ")\n";
                else
                    out << "    oracle: " << (c.oracle->equal ? "numerically equal" : "numerically different")
                        << ", max difference " << fmt(c.oracle->max_diff) << " over " << c.oracle->trials
                        << " assignments\n";
                if (!c.oracle->equal && !c.oracle->witness.empty()) indent(out, "witness", c.oracle->witness);
            }
        }
    }
    out << "\nsummary:";
    for (Status s : kOrder) out << " " << status_name(s) << " " << r.count(s);
    out << " | " << (r.failed() ? "FAILED" : "OK") << "\n";
    return out.str();
}

std::string render_json(const Report& r, const ReportHeader& h) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["engine"] = {{"name", "superfg"}, {"version", kEngineVersion}};
    j["command"] = h.command;
    j["model"] = h.model;
    j["seed"] = h.options.seed;
    j["options"] = {{"trials", h.options.trials},
                    {"tol", h.options.tol},
                    {"odd_units", h.options.odd_units},
                    {"max_jet_order", h.max_jet_order},
                    {"branch", h.options.minus_branch ? "minus" : "plus"}};
    ordered_json summary = ordered_json::object();
    for (Status s : kOrder) summary[status_name(s)] = r.count(s);
    summary["failed"] = r.failed();
    j["summary"] = summary;
    ordered_json recs = ordered_json::array();
    for (const auto& c : r.records) {
        ordered_json x;
        x["id"] = c.id;
        x["anchor"] = c.anchor;
        x["status"] = status_name(c.status);
        x["soft"] = c.soft;
        x["detail"] = c.detail;
        if (!c.expected.empty()) x["expected"] = c.expected;
        if (!c.actual.empty()) x["actual"] = c.actual;
        if (!c.residual.empty()) x["residual"] = c.residual;
        if (c.oracle) {
            ordered_json o;
            o["equal"] = c.oracle->equal;
            o["max_diff"] = c.oracle->max_diff;
            o["trials"] = c.oracle->trials;
            if (!c.oracle->witness.empty()) o["witness"] = c.oracle->witness;
            if (!c.oracle->error.empty()) o["error"] = c.oracle->error;
            x["oracle"] = o;
        }
        recs.push_back(x);
    }
    j["records"] = recs;
    return j.dump(2) + "\n";
}

} // namespace superfg
