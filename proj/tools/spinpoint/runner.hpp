#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace spinpoint::cli {

// Shortest representation that parses back to the same double; "nan" for NaN.
std::string format_double(double v);

// Every CSV starts with a comment line "# spinpoint-csv v1 <command> ..."
// followed by the column header.
std::string check_report(const DefectSpec& defect, const Tolerances& tol);
std::string scatter_csv(const RunConfig& config);
std::string device_csv(const RunConfig& config);
std::string bands_csv(const RunConfig& config);

// Runs the configured command.  Output goes to config.output, or to `out`
// when that is empty; the check report is always echoed to `out`.
// Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace spinpoint::cli
