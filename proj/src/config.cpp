#include "hmf/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hmf/error.hpp"

namespace hmf {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Value {
  std::string key;  // section.key
  std::string_view text;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, key, line); }

  double as_double() const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
      fail("expected a number, got '" + std::string(text) + "'");
    return v;
  }
  std::size_t as_size() const {
    unsigned long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      fail("expected a non-negative integer, got '" + std::string(text) + "'");
    return static_cast<std::size_t>(v);
  }
  bool as_bool() const {
    if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
    if (text == "false" || text == "no" || text == "off" || text == "0") return false;
    fail("expected true or false, got '" + std::string(text) + "'");
  }
  std::pair<double, double> as_band() const {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) fail("expected 'lo,hi', got '" + std::string(text) + "'");
    Value lo{key, trim(text.substr(0, comma)), line};
    Value hi{key, trim(text.substr(comma + 1)), line};
    const std::pair<double, double> band{lo.as_double(), hi.as_double()};
    if (!(band.first < band.second)) fail("band needs lo < hi");
    return band;
  }
  std::string as_string() const {
    std::string_view t = text;
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    if (t.empty()) fail("expected a non-empty string");
    return std::string(t);
  }
};

using Setter = std::function<void(RunConfig&, const Value&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"equilibrium.temperature",
       [](RunConfig& c, const Value& v) {
         c.equilibrium.temperature = v.as_double();
         if (!(c.equilibrium.temperature > 0.0)) v.fail("temperature must be positive");
       }},
      {"equilibrium.tolerance",
       [](RunConfig& c, const Value& v) {
         c.equilibrium.tolerance = v.as_double();
         if (!(c.equilibrium.tolerance > 0.0)) v.fail("tolerance must be positive");
       }},
      {"lattice.nx",
       [](RunConfig& c, const Value& v) {
         c.lattice.nx = v.as_size();
         if (c.lattice.nx < 2) v.fail("need at least 2 columns");
       }},
      {"lattice.np",
       [](RunConfig& c, const Value& v) {
         c.lattice.np = v.as_size();
         if (c.lattice.np < 2) v.fail("need at least 2 rows");
       }},
      {"lattice.pmax",
       [](RunConfig& c, const Value& v) {
         c.lattice.pmax = v.as_double();
         if (!(c.lattice.pmax > 0.0)) v.fail("pmax must be positive");
       }},
      {"perturbation.kind",
       [](RunConfig& c, const Value& v) {
         try {
           c.perturbation.kind = parse_perturbation_kind(v.text);
         } catch (const InvalidParameter& e) {
           v.fail(e.what());
         }
       }},
      {"perturbation.amplitude",
       [](RunConfig& c, const Value& v) {
         c.perturbation.amplitude = v.as_double();
         if (!(std::abs(c.perturbation.amplitude) < 1.0)) v.fail("amplitude must satisfy |a| < 1");
       }},
      {"integration.dt",
       [](RunConfig& c, const Value& v) {
         c.integration.dt = v.as_double();
         if (!(c.integration.dt > 0.0)) v.fail("dt must be positive");
       }},
      {"integration.t_end",
       [](RunConfig& c, const Value& v) {
         c.integration.t_end = v.as_double();
         if (!(c.integration.t_end >= 0.0)) v.fail("t_end must be >= 0");
       }},
      {"integration.record_stride",
       [](RunConfig& c, const Value& v) {
         c.integration.record_stride = v.as_size();
         if (c.integration.record_stride < 1) v.fail("record_stride must be >= 1");
       }},
      {"integration.use_symmetry",
       [](RunConfig& c, const Value& v) { c.integration.use_symmetry = v.as_bool(); }},
      {"integration.checkpoint_every",
       [](RunConfig& c, const Value& v) { c.integration.checkpoint_every = v.as_size(); }},
      {"analysis.detrend",
       [](RunConfig& c, const Value& v) {
         try {
           c.analysis.detrend = parse_detrend_mode(v.text);
         } catch (const InvalidParameter& e) {
           v.fail(e.what());
         }
       }},
      {"analysis.tail_start", [](RunConfig& c, const Value& v) { c.analysis.tail_start = v.as_double(); }},
      {"analysis.window",
       [](RunConfig& c, const Value& v) {
         c.analysis.window = v.as_double();
         if (!(c.analysis.window > 0.0)) v.fail("window must be positive");
       }},
      {"analysis.fit_tmin", [](RunConfig& c, const Value& v) { c.analysis.fit_tmin = v.as_double(); }},
      {"analysis.fit_tmax", [](RunConfig& c, const Value& v) { c.analysis.fit_tmax = v.as_double(); }},
      {"analysis.spectrum_t0", [](RunConfig& c, const Value& v) { c.analysis.spectrum_t0 = v.as_double(); }},
      {"analysis.spectrum_t1", [](RunConfig& c, const Value& v) { c.analysis.spectrum_t1 = v.as_double(); }},
      {"analysis.band_mx", [](RunConfig& c, const Value& v) { c.analysis.band_mx = v.as_band(); }},
      {"analysis.band_my", [](RunConfig& c, const Value& v) { c.analysis.band_my = v.as_band(); }},
      {"analysis.oversample",
       [](RunConfig& c, const Value& v) {
         c.analysis.oversample = v.as_size();
         if (c.analysis.oversample < 1) v.fail("oversample must be >= 1");
       }},
      {"output.directory", [](RunConfig& c, const Value& v) { c.output.directory = v.as_string(); }},
      {"output.checkpoint",
       [](RunConfig& c, const Value& v) { c.integration.checkpoint_path = v.as_string(); }},
  };
  return table;
}

const std::set<std::string> kSections = {"equilibrium", "lattice",  "perturbation",
                                         "integration", "analysis", "output"};
const std::set<std::string> kRequired = {"equilibrium.temperature", "lattice.nx", "lattice.np",
                                         "integration.t_end"};

}  // namespace

std::string_view to_string(DetrendMode mode) {
  return mode == DetrendMode::Running ? "running" : "constant";
}

DetrendMode parse_detrend_mode(std::string_view name) {
  if (name == "constant") return DetrendMode::Constant;
  if (name == "running") return DetrendMode::Running;
  throw InvalidParameter("unknown detrend mode '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::map<std::string, std::size_t> seen;
  std::map<std::string, std::size_t> section_lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", std::string(line), line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kSections.contains(section)) throw ParseError("unknown section", section, line_no);
      section_lines.emplace(section, line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value'", std::string(line), line_no);
    const std::string key = std::string(trim(line.substr(0, eq)));
    if (section.empty()) throw ParseError("key outside of any section", key, line_no);
    const std::string full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ParseError("unknown key", full, line_no);
    if (const auto prev = seen.find(full); prev != seen.end())
      throw ParseError("duplicate key (first set on line " + std::to_string(prev->second) + ")", full,
                       line_no);
    seen.emplace(full, line_no);
    it->second(cfg, Value{full, trim(line.substr(eq + 1)), line_no});
  }
  for (const auto& key : kRequired) {
    if (seen.contains(key)) continue;
    const auto sec = key.substr(0, key.find('.'));
    const auto s = section_lines.find(sec);
    throw ParseError("missing required key", key, s == section_lines.end() ? line_no : s->second);
  }
  if (cfg.perturbation.kind == PerturbationKind::None && cfg.perturbation.amplitude != 0.0)
    throw ParseError("amplitude given without a perturbation kind", "perturbation.amplitude",
                     seen.at("perturbation.amplitude"));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[equilibrium]\n"
     << "temperature = " << format_double(c.equilibrium.temperature) << "\n"
     << "tolerance = " << format_double(c.equilibrium.tolerance) << "\n\n"
     << "[lattice]\n"
     << "nx = " << c.lattice.nx << "\n"
     << "np = " << c.lattice.np << "\n"
     << "pmax = " << format_double(c.lattice.pmax) << "\n\n"
     << "[perturbation]\n"
     << "kind = " << to_string(c.perturbation.kind) << "\n"
     << "amplitude = " << format_double(c.perturbation.amplitude) << "\n\n"
     << "[integration]\n"
     << "dt = " << format_double(c.integration.dt) << "\n"
     << "t_end = " << format_double(c.integration.t_end) << "\n"
     << "record_stride = " << c.integration.record_stride << "\n"
     << "use_symmetry = " << (c.integration.use_symmetry ? "true" : "false") << "\n"
     << "checkpoint_every = " << c.integration.checkpoint_every << "\n\n"
     << "[analysis]\n"
     << "detrend = " << to_string(c.analysis.detrend) << "\n";
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) os << key << " = " << format_double(*v) << "\n";
  };
  opt("tail_start", c.analysis.tail_start);
  os << "window = " << format_double(c.analysis.window) << "\n";
  opt("fit_tmin", c.analysis.fit_tmin);
  opt("fit_tmax", c.analysis.fit_tmax);
  opt("spectrum_t0", c.analysis.spectrum_t0);
  opt("spectrum_t1", c.analysis.spectrum_t1);
  os << "band_mx = " << format_double(c.analysis.band_mx.first) << ","
     << format_double(c.analysis.band_mx.second) << "\n"
     << "band_my = " << format_double(c.analysis.band_my.first) << ","
     << format_double(c.analysis.band_my.second) << "\n"
     << "oversample = " << c.analysis.oversample << "\n\n"
     << "[output]\n"
     << "directory = \"" << c.output.directory.string() << "\"\n"
     << "checkpoint = \"" << c.integration.checkpoint_path.string() << "\"\n";
  return os.str();
}

}  // namespace hmf
