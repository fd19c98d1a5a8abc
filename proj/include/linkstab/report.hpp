#pragma once

#include <ostream>
#include <string>

#include "linkstab/iteration_log.hpp"

namespace linkstab {

// CSV of stability percentages: iteration,timestamp,S_1..S_n,IS with every
// index multiplied by 100. Same log in, same bytes out.
void write_csv_report(const LogContents& log, std::ostream& out);

// Percent value as printed in reports: fixed notation, trailing zeros
// trimmed down to one decimal ("100.0", "25.0", "63.45").
std::string format_percent(double fraction);

}  // namespace linkstab
