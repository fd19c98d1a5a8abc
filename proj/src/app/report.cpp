#include "linkstab/report.hpp"

#include <fmt/format.h>

namespace linkstab {

std::string format_percent(double fraction) {
  std::string text = fmt::format("{:.6f}", fraction * 100.0);
  const auto dot = text.find('.');
  auto last = text.find_last_not_of('0');
  if (last == dot) ++last;
  text.erase(last + 1);
  return text;
}

void write_csv_report(const LogContents& log, std::ostream& out) {
  const int n = log.header ? log.header->lines : 0;
  out << "iteration,timestamp";
  for (int i = 1; i <= n; ++i) out << ",S_" << i;
  out << ",IS\n";
  for (const auto& record : log.records) {
    out << record.iteration << ',' << fmt::format("{:.3f}", record.timestamp);
    for (const auto& line : record.lines) out << ',' << format_percent(line.stability);
    out << ',' << format_percent(record.pipe_stability) << '\n';
  }
}

}  // namespace linkstab
