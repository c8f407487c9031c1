#pragma once

// CSV output of experiment results: results.csv, summary.csv and
// plotdata/<axis>.csv. Doubles are written in shortest round-trip form;
// absent values are empty cells.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cgbg/bench/experiment.hpp"
#include "cgbg/bench/summary.hpp"
#include "cgbg/errors.hpp"

namespace cgbg::bench {

inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "game_id", "seed", "n", "k", "num_actions", "num_types", "method", "fg_variant", "value", "normalized_value",
      "runtime_ms", "converged", "iterations", "induced_width", "status", "value_delta"};
  return cols;
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

inline std::string result_line(const ResultRow& r) {
  return join({std::to_string(r.game_id), std::to_string(r.seed), std::to_string(r.n), std::to_string(r.k),
               std::to_string(r.num_actions), std::to_string(r.num_types), r.method, r.fg_variant,
               format_optional(r.value), format_optional(r.normalized_value), format_double(r.runtime_ms),
               r.converged ? "true" : "false", std::to_string(r.iterations),
               r.induced_width ? std::to_string(*r.induced_width) : std::string(), std::string(to_string(r.status)),
               format_optional(r.value_delta)});
}

inline void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << join(result_columns()) << '\n';
  for (const ResultRow& r : rows) out << result_line(r) << '\n';
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

namespace detail {

template <typename T>
T parse_number(const std::string& s, const char* column) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument(std::string("bad number '") + s + "' in column " + column);
  }
  return v;
}

inline std::optional<double> parse_optional(const std::string& s, const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s, column);
}

}  // namespace detail

inline std::vector<ResultRow> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("results file is empty");
  if (line != join(result_columns())) throw InvalidArgument("unexpected results header: " + line);
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != result_columns().size()) {
      throw InvalidArgument("results line " + std::to_string(line_no) + " has " + std::to_string(c.size()) +
                            " cells");
    }
    ResultRow r;
    r.game_id = detail::parse_number<std::size_t>(c[0], "game_id");
    r.seed = detail::parse_number<std::uint64_t>(c[1], "seed");
    r.n = detail::parse_number<std::size_t>(c[2], "n");
    r.k = detail::parse_number<std::size_t>(c[3], "k");
    r.num_actions = detail::parse_number<std::size_t>(c[4], "num_actions");
    r.num_types = detail::parse_number<std::size_t>(c[5], "num_types");
    r.method = c[6];
    r.fg_variant = c[7];
    r.value = detail::parse_optional(c[8], "value");
    r.normalized_value = detail::parse_optional(c[9], "normalized_value");
    r.runtime_ms = detail::parse_number<double>(c[10], "runtime_ms");
    r.converged = c[11] == "true";
    r.iterations = detail::parse_number<std::size_t>(c[12], "iterations");
    if (!c[13].empty()) r.induced_width = detail::parse_number<std::size_t>(c[13], "induced_width");
    r.status = parse_row_status(c[14]);
    r.value_delta = detail::parse_optional(c[15], "value_delta");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string summary_header(std::string_view key_columns = "n,k,num_actions,num_types") {
  return std::string(key_columns) +
         ",method,games,successes,success_rate,mean_value,se_value,mean_normalized_value,se_normalized_value,"
         "mean_value_delta,se_value_delta,mean_runtime_ms,complete";
}

inline std::string summary_tail(const SummaryRow& s) {
  auto stat = [](const MeanSe& m, bool se) { return m.count ? format_double(se ? m.se : m.mean) : std::string(); };
  return join({s.method, std::to_string(s.games), std::to_string(s.successes), format_double(s.success_rate()),
               stat(s.value, false), stat(s.value, true), stat(s.normalized_value, false),
               stat(s.normalized_value, true), stat(s.value_delta, false), stat(s.value_delta, true),
               format_double(s.mean_runtime_ms), s.complete ? "true" : "false"});
}

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << summary_header() << '\n';
  for (const SummaryRow& s : summary) {
    out << s.point.n << ',' << s.point.k << ',' << s.point.num_actions << ',' << s.point.num_types << ','
        << summary_tail(s) << '\n';
  }
}

// One file per grid axis; each aggregates every row sharing the axis value.
inline void write_plotdata(const std::filesystem::path& dir, const std::vector<ResultRow>& rows) {
  struct Axis {
    const char* name;
    std::size_t (*get)(const ResultRow&);
  };
  const Axis axes[] = {
      {"n", [](const ResultRow& r) { return r.n; }},
      {"k", [](const ResultRow& r) { return r.k; }},
      {"num_actions", [](const ResultRow& r) { return r.num_actions; }},
      {"num_types", [](const ResultRow& r) { return r.num_types; }},
  };
  for (const Axis& axis : axes) {
    auto summary = summarize_by(rows, [&](const ResultRow& r) { return PointKey{axis.get(r), 0, 0, 0}; });
    std::stable_sort(summary.begin(), summary.end(),
                     [](const SummaryRow& a, const SummaryRow& b) { return a.point.n < b.point.n; });
    const auto path = dir / (std::string(axis.name) + ".csv");
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path.string());
    out << summary_header(axis.name) << '\n';
    for (const SummaryRow& s : summary) out << s.point.n << ',' << summary_tail(s) << '\n';
    if (!out) throw FileError("write failed for " + path.string());
  }
}

inline void emit(const std::vector<ResultRow>& rows, const std::vector<SummaryRow>& summary,
                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "plotdata", ec);
  if (ec) throw FileError("cannot create " + (out_dir / "plotdata").string() + ": " + ec.message());
  auto write = [&](const std::filesystem::path& path, auto&& body) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path.string());
    body(out);
    if (!out) throw FileError("write failed for " + path.string());
  };
  write(out_dir / "results.csv", [&](std::ostream& o) { write_results(o, rows); });
  write(out_dir / "summary.csv", [&](std::ostream& o) { write_summary(o, summary); });
  write_plotdata(out_dir / "plotdata", rows);
}

}  // namespace cgbg::bench
