#pragma once

#include <ostream>
#include <string>

#include "invforge/report.hpp"

namespace invforge::cli {

enum ExitCode : int { pass = 0, fail = 1, config_error = 2, internal_error = 3 };

/// Full command line: list, verify, rank, completeness, eval.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

void list(const std::string& kind, std::ostream& out);

// Each command fills a report and prints a short human summary.
ReportDocument verify(const RunConfig& cfg, std::ostream& out);
ReportDocument rank(const RunConfig& cfg, std::ostream& out);
ReportDocument completeness(const RunConfig& cfg, std::ostream& out);
ReportDocument eval(const RunConfig& cfg, std::ostream& out);

}  // namespace invforge::cli
