#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "eebundle/harness.hpp"

namespace eeb {

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_row(std::ostream& out, std::string_view axis_value, const ExperimentReport& r, double energy,
               double loss_percent, const std::optional<double>& delay, double lower_bound) {
  out << axis_value << ',' << to_string(r.algorithm) << ',' << fmt9(r.sampling_period) << ',' << r.buffer_size << ','
      << fmt9(energy) << ',' << fmt9(loss_percent) << ',';
  if (delay) out << fmt9(*delay * 1e6);
  out << ',' << fmt9(lower_bound) << '\n';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

}  // namespace

void emit_csv(std::ostream& out, const ExperimentReport& report) {
  out << kCsvHeader << '\n';
  for (const auto& row : report.intervals) {
    const double loss =
        row.offered > 0 ? 100.0 * static_cast<double>(row.loss_count) / static_cast<double>(row.offered) : 0.0;
    write_row(out, std::to_string(row.index), report, row.energy_fraction, loss, row.mean_delay, row.lower_bound);
  }
  write_row(out, "aggregate", report, report.energy_fraction, report.loss_percent, report.mean_delay,
            report.lower_bound);
}

void emit_csv(std::ostream& out, const std::vector<ExperimentReport>& reports, const std::vector<double>& values) {
  if (reports.size() != values.size()) throw std::invalid_argument("emit_csv: reports and values differ in length");
  out << kCsvHeader << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    write_row(out, fmt9(values[i]), r, r.energy_fraction, r.loss_percent, r.mean_delay, r.lower_bound);
  }
}

void emit_csv(const std::filesystem::path& path, const ExperimentReport& report) {
  auto out = open_for_write(path);
  emit_csv(out, report);
  finish(out, path);
}

void emit_csv(const std::filesystem::path& path, const std::vector<ExperimentReport>& reports,
              const std::vector<double>& values) {
  auto out = open_for_write(path);
  emit_csv(out, reports, values);
  finish(out, path);
}

void emit_port_csv(std::ostream& out, const ExperimentReport& report) {
  out << "interval,port,energy_fraction\n";
  for (const auto& row : report.intervals)
    for (std::size_t p = 0; p < row.port_energy.size(); ++p)
      out << row.index << ',' << p << ',' << fmt9(row.port_energy[p]) << '\n';
}

std::vector<CsvRow> parse_report_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("unexpected CSV header", line_no);

  auto number = [&line_no](std::string_view s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
      throw ParseError("bad number '" + std::string(s) + "'", line_no);
    return v;
  };

  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    while (true) {
      auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 8) throw ParseError("expected 8 fields", line_no);
    CsvRow r;
    r.axis_value = std::string(f[0]);
    r.algorithm = std::string(f[1]);
    r.sampling_period = number(f[2]);
    r.buffer_size = static_cast<std::size_t>(number(f[3]));
    r.energy_fraction = number(f[4]);
    r.loss_percent = number(f[5]);
    if (!f[6].empty()) r.mean_delay_us = number(f[6]);
    r.lower_bound = number(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace eeb
