#include "hmf/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hmf/error.hpp"

namespace hmf {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + cell + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
  table.header = split(line);
  table.columns.resize(table.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(table.header.size()) + " columns");
    for (std::size_t c = 0; c < cells.size(); ++c)
      table.columns[c].push_back(parse_cell(cells[c], path, line_no));
  }
  return table;
}

const std::vector<double>& column(const Table& t, const std::string& name,
                                  const std::filesystem::path& path) {
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (t.header[c] == name) return t.columns[c];
  throw IoError(path.string() + " has no column '" + name + "'");
}

}  // namespace

std::string format_series_csv(std::span<const MagnetizationSample> samples) {
  std::string out = "t,mx,my\n";
  char buf[96];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.15g,%.15g,%.15g\n", s.t, s.mx, s.my);
    out += buf;
  }
  return out;
}

void write_series_csv(const std::filesystem::path& path, std::span<const MagnetizationSample> samples) {
  write_text_atomic(path, format_series_csv(samples));
}

std::vector<MagnetizationSample> read_series_csv(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const auto& tt = column(t, "t", path);
  const auto& mx = column(t, "mx", path);
  const auto& my = column(t, "my", path);
  std::vector<MagnetizationSample> out(tt.size());
  for (std::size_t i = 0; i < tt.size(); ++i) out[i] = {tt[i], mx[i], my[i]};
  return out;
}

TimeSeries read_series_column(const std::filesystem::path& path, const std::string& name) {
  const Table t = read_table(path);
  TimeSeries s{column(t, "t", path), column(t, name, path)};
  s.validate();
  return s;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& sp) {
  std::string out = "omega,power\n";
  char buf[80];
  for (std::size_t k = 0; k < sp.omega.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.15g,%.15g\n", sp.omega[k], sp.power[k]);
    out += buf;
  }
  write_text_atomic(path, out);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os << text;
    os.flush();
    if (!os) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace hmf
