#include "linkstab/iteration_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <json.hpp>

namespace linkstab {

using nlohmann::json;
using nlohmann::ordered_json;

StabilityParams LogHeader::stability_params() const {
  StabilityParams p;
  p.lines = lines;
  p.ticks_per_iteration = ticks_per_iteration;
  p.history_depth = history_depth;
  p.consistency_depth = consistency_depth;
  return p;
}

bool LogHeader::same_parameters(const LogHeader& other) const {
  return lines == other.lines && ticks_per_iteration == other.ticks_per_iteration &&
         history_depth == other.history_depth && consistency_depth == other.consistency_depth &&
         scale_base == other.scale_base;
}

LogHeader make_header(const StabilityParams& params, int scale_base,
                      std::vector<std::string> line_names, std::vector<int> bandwidth_factors) {
  LogHeader h;
  h.lines = params.lines;
  h.ticks_per_iteration = params.ticks_per_iteration;
  h.history_depth = params.history_depth;
  h.consistency_depth = params.consistency_depth;
  h.scale_base = scale_base;
  h.line_names = std::move(line_names);
  h.bandwidth_factors = std::move(bandwidth_factors);
  return h;
}

IterationRecord make_record(const StabilitySnapshot& snapshot, const WeightTable& weights,
                            std::span<const std::string> line_names, double timestamp,
                            std::vector<PolicyEvent> events,
                            std::optional<AdmissionDecision> admission,
                            std::vector<ProbeOutcome> probes) {
  IterationRecord rec;
  rec.iteration = snapshot.iteration;
  rec.timestamp = timestamp;
  rec.consistency = snapshot.consistency;
  rec.pipe_stability = snapshot.pipe_stability;
  rec.admission = admission;
  rec.events = std::move(events);
  rec.probes = std::move(probes);
  for (std::size_t i = 0; i < snapshot.lines.size(); ++i) {
    const auto& s = snapshot.lines[i];
    const auto& w = weights.lines.at(i);
    rec.lines.push_back({i < line_names.size() ? line_names[i] : fmt::format("line-{}", i + 1),
                         s.tick, s.status, s.historical, s.stability, w.bandwidth_factor, w.weight,
                         w.in_service});
  }
  return rec;
}

WeightTable weight_table_of(const IterationRecord& record) {
  WeightTable table;
  table.iteration = record.iteration;
  for (const auto& line : record.lines)
    table.lines.push_back(
        {line.bandwidth_factor, line.weight, line.in_service, weight_tier(line.stability)});
  return table;
}

std::string serialize(const LogHeader& header) {
  ordered_json j;
  j["type"] = "header";
  j["format"] = kLogFormat;
  j["params"] = {{"n", header.lines},
                 {"m", header.ticks_per_iteration},
                 {"k", header.history_depth},
                 {"z", header.consistency_depth},
                 {"scale_base", header.scale_base}};
  j["lines"] = header.line_names;
  j["bandwidth_factors"] = header.bandwidth_factors;
  return j.dump();
}

std::string serialize(const IterationRecord& record) {
  ordered_json j;
  j["type"] = "iteration";
  j["iteration"] = record.iteration;
  j["timestamp"] = record.timestamp;
  ordered_json lines = ordered_json::array();
  for (const auto& line : record.lines) {
    lines.push_back({{"name", line.name},
                     {"tick", line.tick},
                     {"L", line.status},
                     {"H", line.historical},
                     {"S", line.stability},
                     {"Bwf", line.bandwidth_factor},
                     {"Rw", line.weight},
                     {"in_service", line.in_service}});
  }
  j["lines"] = std::move(lines);
  j["C"] = record.consistency;
  j["IS"] = record.pipe_stability;
  if (record.admission)
    j["admission"] = {{"grant", record.admission->grant}, {"best_line", record.admission->best_line}};
  ordered_json events = ordered_json::array();
  for (const auto& event : record.events) {
    ordered_json e{{"kind", to_string(event.kind)}};
    if (event.line) e["line"] = *event.line;
    e["detail"] = event.detail;
    events.push_back(std::move(e));
  }
  j["events"] = std::move(events);
  if (!record.probes.empty()) {
    ordered_json probes = ordered_json::array();
    for (const auto& p : record.probes)
      probes.push_back({{"line", p.line},
                        {"target", p.target},
                        {"success", p.success},
                        {"elapsed", p.elapsed},
                        {"failure", to_string(p.failure)}});
    j["probes"] = std::move(probes);
  }
  return j.dump();
}

namespace {

LogHeader parse_header(const json& j) {
  LogHeader h;
  const json& p = j.at("params");
  h.lines = p.at("n").get<int>();
  h.ticks_per_iteration = p.at("m").get<int>();
  h.history_depth = p.at("k").get<int>();
  h.consistency_depth = p.at("z").get<int>();
  h.scale_base = p.at("scale_base").get<int>();
  h.line_names = j.at("lines").get<std::vector<std::string>>();
  h.bandwidth_factors = j.at("bandwidth_factors").get<std::vector<int>>();
  return h;
}

IterationRecord parse_record(const json& j, Iteration iteration, std::size_t line_count) {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.timestamp = j.at("timestamp").get<double>();
  const json& lines = j.at("lines");
  if (!lines.is_array() || lines.size() != line_count)
    throw std::invalid_argument(fmt::format("expected {} line entries", line_count));
  for (const json& line : lines) {
    rec.lines.push_back({line.at("name").get<std::string>(), line.at("tick").get<Tick>(),
                         line.at("L").get<int>(), line.at("H").get<Tick>(),
                         line.at("S").get<double>(), line.at("Bwf").get<int>(),
                         line.at("Rw").get<int>(), line.at("in_service").get<bool>()});
  }
  rec.consistency = j.at("C").get<int>();
  rec.pipe_stability = j.at("IS").get<double>();
  if (j.contains("admission")) {
    const json& a = j.at("admission");
    rec.admission = AdmissionDecision{a.at("grant").get<bool>(), a.at("best_line").get<int>()};
  }
  if (j.contains("events")) {
    for (const json& e : j.at("events")) {
      const auto kind = event_kind_from_string(e.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown event kind");
      PolicyEvent event{*kind, std::nullopt, iteration, e.value("detail", std::string{})};
      if (e.contains("line")) event.line = e.at("line").get<int>();
      rec.events.push_back(std::move(event));
    }
  }
  if (j.contains("probes")) {
    for (const json& p : j.at("probes")) {
      const auto kind = failure_kind_from_string(p.at("failure").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown failure kind");
      rec.probes.push_back({p.at("line").get<int>(), p.at("target").get<std::string>(),
                            p.at("success").get<bool>(), p.at("elapsed").get<double>(), *kind});
    }
  }
  return rec;
}

}  // namespace

LogContents parse_log(std::string_view text) {
  LogContents out;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw LogFormatError(line_number, fmt::format("line {}: invalid JSON ({})", line_number, e.what()));
    }

    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.value("format", std::string{}) != kLogFormat)
          throw std::invalid_argument("unsupported log format");
        LogHeader header = parse_header(j);
        if (!out.header) {
          out.header = std::move(header);
        } else if (!out.header->same_parameters(header)) {
          throw ParameterMismatch(fmt::format(
              "line {}: header parameters (n={} m={} k={} z={}) differ from the log's first header "
              "(n={} m={} k={} z={})",
              line_number, header.lines, header.ticks_per_iteration, header.history_depth,
              header.consistency_depth, out.header->lines, out.header->ticks_per_iteration,
              out.header->history_depth, out.header->consistency_depth));
        }
      } else if (type == "iteration") {
        if (!out.header) throw std::invalid_argument("iteration record before header");
        out.records.push_back(parse_record(j, j.at("iteration").get<Iteration>(),
                                           static_cast<std::size_t>(out.header->lines)));
      } else {
        throw std::invalid_argument(fmt::format("unknown record type '{}'", type));
      }
    } catch (const ParameterMismatch&) {
      throw;
    } catch (const std::exception& e) {
      throw LogFormatError(line_number, fmt::format("line {}: malformed record ({})", line_number, e.what()));
    }
  }
  return out;
}

LogContents read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_log(buffer.str());
}

LogWriter::LogWriter(const std::filesystem::path& path, bool truncate) {
  const int flags = O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC | (truncate ? O_TRUNC : 0);
  fd_ = ::open(path.c_str(), flags, 0644);
  if (fd_ < 0)
    throw std::system_error(errno, std::generic_category(), "cannot open log " + path.string());
}

LogWriter::~LogWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void LogWriter::append(std::string_view line) {
  std::string buffer;
  buffer.reserve(line.size() + 1);
  buffer.append(line);
  buffer.push_back('\n');
  std::size_t written = 0;
  while (written < buffer.size()) {
    const ssize_t n = ::write(fd_, buffer.data() + written, buffer.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "log write failed");
    }
    written += static_cast<std::size_t>(n);
  }
  ::fdatasync(fd_);
}

bool trim_partial_tail(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return false;
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.back() == '\n') return false;
  const auto last_newline = content.rfind('\n');
  const std::uintmax_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
  std::filesystem::resize_file(path, keep);
  return true;
}

void write_weight_file(const std::filesystem::path& path, const WeightTable& table,
                       const StabilitySnapshot& snapshot, std::span<const std::string> line_names) {
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < table.lines.size(); ++i) {
    const auto& w = table.lines[i];
    j[line_names[i]] = {{"line", i + 1},
                        {"iteration", table.iteration},
                        {"weight", w.weight},
                        {"bandwidth_factor", w.bandwidth_factor},
                        {"in_service", w.in_service},
                        {"tier", to_string(w.tier)},
                        {"stability", snapshot.lines.at(i).stability}};
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out.flush()) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace linkstab
