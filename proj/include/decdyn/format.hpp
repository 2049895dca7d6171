#pragma once

#include <string>

namespace decdyn {

// Shortest decimal text that parses back to exactly the same double
// ("110", "103.5", "0.1"). Used for decile tables, deflators, and plot data.
std::string format_double(double v);

// Reference-table reporting precision: coefficients with 4 significant
// digits, R^2 with 2 decimal places (trailing zeros trimmed, "2.2" not
// "2.20").
std::string format_coefficient(double v);
std::string format_r2(double v);

}  // namespace decdyn
