#pragma once

// Text and JSON rendering of check reports. Both are deterministic for a
// fixed report: no timestamps, fixed number formatting.

#include <string>

#include "superfg/ssge.hpp"

namespace superfg {

struct ReportHeader {
    std::string command; // e.g. "scenario ST_BOSONIC"
    std::string model;   // "bundled" or the model path
    RunOptions options;
    int max_jet_order = 4;
};

std::string render_text(const Report& r, const ReportHeader& h);
std::string render_json(const Report& r, const ReportHeader& h);

} // namespace superfg
