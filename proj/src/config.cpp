#include "hwm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hwm/error.hpp"

namespace hwm {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Line of "key" inside "[section]", or 0 when absent.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line, current;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos && current == section && trim(t.substr(0, eq)) == key) return n;
  }
  return 0;
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    fail(ErrorCode::config, key + ": expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    fail(ErrorCode::config, key + ": expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(ErrorCode::config, key + ": expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, item));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> table{
      {"grid",
       {{"box_length", [](RunConfig& c, auto& k, auto& v) { c.solver.box_length = to_double(k, v); }},
        {"num_points", [](RunConfig& c, auto& k, auto& v) {
           const long long m = to_int(k, v);
           if (m <= 0) fail(ErrorCode::config, k + " must be positive");
           c.solver.num_points = std::size_t(m);
         }}}},
      {"data",
       {{"family", [](RunConfig& c, auto& k, auto& v) {
           try {
             c.data.family = parse_data_family(trim(v));
           } catch (const Error& e) {
             fail(ErrorCode::config, k + ": " + e.what());
           }
         }},
        {"far_field", [](RunConfig& c, auto& k, auto& v) {
           const auto q = to_list(k, v);
           if (q.size() != 3) fail(ErrorCode::config, k + ": expected three components");
           c.data.far_field = {q[0], q[1], q[2]};
         }},
        {"amplitude", [](RunConfig& c, auto& k, auto& v) { c.data.amplitude = to_double(k, v); }},
        {"support_radius", [](RunConfig& c, auto& k, auto& v) { c.data.support_radius = to_double(k, v); }},
        {"center", [](RunConfig& c, auto& k, auto& v) { c.data.center = to_double(k, v); }},
        {"bump_order", [](RunConfig& c, auto& k, auto& v) { c.data.bump_order = int(to_int(k, v)); }},
        {"twist", [](RunConfig& c, auto& k, auto& v) { c.data.twist = to_double(k, v); }}}},
      {"solver",
       {{"eps", [](RunConfig& c, auto& k, auto& v) { c.solver.eps = to_double(k, v); }},
        {"final_time", [](RunConfig& c, auto& k, auto& v) { c.solver.final_time = to_double(k, v); }},
        {"dt", [](RunConfig& c, auto& k, auto& v) { c.solver.dt = to_double(k, v); }},
        {"output_stride", [](RunConfig& c, auto& k, auto& v) { c.solver.output_stride = int(to_int(k, v)); }},
        {"integrator", [](RunConfig& c, auto& k, auto& v) {
           try {
             c.solver.integrator = parse_integrator(trim(v));
           } catch (const Error& e) {
             fail(ErrorCode::config, k + ": " + e.what());
           }
         }},
        {"project_to_sphere", [](RunConfig& c, auto& k, auto& v) { c.solver.project_to_sphere = to_bool(k, v); }},
        {"dealias", [](RunConfig& c, auto& k, auto& v) { c.solver.dealias = to_bool(k, v); }}}},
      {"picard",
       {{"max_iters", [](RunConfig& c, auto& k, auto& v) { c.solver.picard.max_iters = int(to_int(k, v)); }},
        {"window", [](RunConfig& c, auto& k, auto& v) { c.solver.picard.window = to_double(k, v); }},
        {"duhamel_substeps", [](RunConfig& c, auto& k, auto& v) { c.solver.picard.duhamel_substeps = int(to_int(k, v)); }},
        {"tolerance", [](RunConfig& c, auto& k, auto& v) { c.solver.picard.tolerance = to_double(k, v); }}}},
      {"diagnostics",
       {{"far_field_radius", [](RunConfig& c, auto& k, auto& v) { c.diagnostics.far_field_radius = to_double(k, v); }},
        {"tail_cutoffs", [](RunConfig& c, auto& k, auto& v) { c.diagnostics.tail_cutoffs = to_list(k, v); }},
        {"commutator_cutoffs", [](RunConfig& c, auto& k, auto& v) { c.diagnostics.commutator_cutoffs = to_list(k, v); }},
        {"weak_tolerance", [](RunConfig& c, auto& k, auto& v) { c.diagnostics.weak_tolerance = to_double(k, v); }}}},
      {"sweep",
       {{"eps_ladder", [](RunConfig& c, auto& k, auto& v) { c.sweep.eps_ladder = to_list(k, v); }},
        {"workers", [](RunConfig& c, auto& k, auto& v) { c.sweep.workers = int(to_int(k, v)); }},
        {"min_decreasing", [](RunConfig& c, auto& k, auto& v) { c.sweep.min_decreasing = int(to_int(k, v)); }},
        {"window_times", [](RunConfig& c, auto& k, auto& v) { c.sweep.window_times = to_list(k, v); }},
        {"window_half_widths", [](RunConfig& c, auto& k, auto& v) { c.sweep.window_half_widths = to_list(k, v); }}}},
      {"run",
       {{"seed", [](RunConfig& c, auto& k, auto& v) {
           const long long s = to_int(k, v);
           if (s < 0) fail(ErrorCode::config, k + " must be non-negative");
           c.seed = std::uint64_t(s);
         }},
        {"name", [](RunConfig& c, auto&, auto& v) { c.name = trim(v); }}}},
  };
  return table;
}

const std::vector<std::string> kRequired{"grid.box_length", "grid.num_points", "data.family",
                                         "solver.eps", "solver.final_time"};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) fail(ErrorCode::config, key + " " + what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void RunConfig::validate() const {
  require(positive(solver.box_length), "grid.box_length", "must be positive");
  require(solver.num_points >= 8 && solver.num_points % 2 == 0, "grid.num_points", "must be even and >= 8");
  require(positive(solver.eps), "solver.eps", "must be positive");
  require(positive(solver.final_time), "solver.final_time", "must be positive");
  require(positive(solver.dt), "solver.dt", "must be positive");
  require(solver.output_stride >= 1, "solver.output_stride", "must be >= 1");
  require(solver.picard.max_iters >= 2, "picard.max_iters", "must be >= 2");
  require(positive(solver.picard.window), "picard.window", "must be positive");
  require(solver.picard.duhamel_substeps >= 2, "picard.duhamel_substeps", "must be >= 2");
  require(positive(solver.picard.tolerance), "picard.tolerance", "must be positive");
  require(std::isfinite(data.amplitude), "data.amplitude", "must be finite");
  require(positive(data.support_radius), "data.support_radius", "must be positive");
  require(std::abs(data.far_field.norm() - 1.0) <= 1e-14, "data.far_field", "must be a unit vector");
  require(data.bump_order >= 8, "data.bump_order", "must be >= 8");
  const double half = 0.5 * solver.box_length;
  const double nyq = M_PI * double(solver.num_points) / solver.box_length;
  require(diagnostics.far_field_radius > 0.0 && diagnostics.far_field_radius < half,
          "diagnostics.far_field_radius", "must lie in (0, L/2)");
  for (double n : diagnostics.tail_cutoffs)
    require(positive(n) && n <= nyq, "diagnostics.tail_cutoffs", "entries must lie in (0, Nyquist]");
  for (double n : diagnostics.commutator_cutoffs)
    require(positive(n) && n <= nyq, "diagnostics.commutator_cutoffs", "entries must lie in (0, Nyquist]");
  require(positive(diagnostics.weak_tolerance), "diagnostics.weak_tolerance", "must be positive");
  for (double e : sweep.eps_ladder) require(positive(e), "sweep.eps_ladder", "entries must be positive");
  require(sweep.workers >= 1, "sweep.workers", "must be >= 1");
  require(sweep.window_times.size() == sweep.window_half_widths.size(), "sweep.window_times",
          "must have as many entries as sweep.window_half_widths");
  require(!name.empty() && name.find_first_of("/\\\n") == std::string::npos, "run.name",
          "must be a non-empty file-name-safe string");

  try {
    solver.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("solver: ") + e.what());
  }
  try {
    data.validate(solver.box_length);
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("data: ") + e.what());
  }
}

SweepPlan RunConfig::sweep_plan() const {
  SweepPlan plan;
  plan.eps_ladder = sweep.eps_ladder;
  plan.base = solver;
  plan.data = data;
  plan.workers = sweep.workers;
  plan.min_decreasing = sweep.min_decreasing;
  plan.windows.clear();
  if (sweep.window_half_widths.empty()) {
    const double L = solver.box_length;
    plan.windows = {{0.5, L / 8.0}, {1.0, L / 4.0}, {1.0, L / 2.0}};
  } else {
    for (std::size_t n = 0; n < sweep.window_half_widths.size(); ++n)
      plan.windows.push_back({sweep.window_times[n], sweep.window_half_widths[n]});
  }
  return plan;
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::config, source + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  auto where = [&](const std::string& section, const std::string& key) {
    const int n = line_of(text, section, key);
    return n > 0 ? source + ":" + std::to_string(n) + ": " : source + ": ";
  };

  RunConfig cfg;
  std::set<std::string> seen;
  const auto& table = schema();
  // The reader drops empty sections, so headers are checked on the raw text.
  {
    std::istringstream lines(text);
    std::string line;
    for (int n = 1; std::getline(lines, line); ++n) {
      const std::string t = trim(line);
      if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
        const std::string name = trim(t.substr(1, t.size() - 2));
        if (!table.count(name))
          fail(ErrorCode::config, source + ":" + std::to_string(n) + ": unknown section [" + name + "]");
      }
    }
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) fail(ErrorCode::config, where("", section) + "key '" + section + "' outside any section");
    const auto sec = table.find(section);
    if (sec == table.end()) fail(ErrorCode::config, source + ": unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) fail(ErrorCode::config, where(section, key) + "unknown key " + full);
      try {
        it->second(cfg, full, value.data());
      } catch (const Error& e) {
        fail(ErrorCode::config, where(section, key) + e.what());
      }
      seen.insert(full);
    }
  }
  for (const auto& key : kRequired)
    if (!seen.count(key)) fail(ErrorCode::config, source + ": missing required key " + key);
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "[grid]\n"
     << "box_length = " << fmt(c.solver.box_length) << "\n"
     << "num_points = " << c.solver.num_points << "\n\n"
     << "[data]\n"
     << "family = " << to_string(c.data.family) << "\n"
     << "far_field = " << fmt({c.data.far_field.x, c.data.far_field.y, c.data.far_field.z}) << "\n"
     << "amplitude = " << fmt(c.data.amplitude) << "\n"
     << "support_radius = " << fmt(c.data.support_radius) << "\n"
     << "center = " << fmt(c.data.center) << "\n"
     << "bump_order = " << c.data.bump_order << "\n"
     << "twist = " << fmt(c.data.twist) << "\n\n"
     << "[solver]\n"
     << "eps = " << fmt(c.solver.eps) << "\n"
     << "final_time = " << fmt(c.solver.final_time) << "\n"
     << "dt = " << fmt(c.solver.dt) << "\n"
     << "output_stride = " << c.solver.output_stride << "\n"
     << "integrator = " << to_string(c.solver.integrator) << "\n"
     << "project_to_sphere = " << b(c.solver.project_to_sphere) << "\n"
     << "dealias = " << b(c.solver.dealias) << "\n\n"
     << "[picard]\n"
     << "max_iters = " << c.solver.picard.max_iters << "\n"
     << "window = " << fmt(c.solver.picard.window) << "\n"
     << "duhamel_substeps = " << c.solver.picard.duhamel_substeps << "\n"
     << "tolerance = " << fmt(c.solver.picard.tolerance) << "\n\n"
     << "[diagnostics]\n"
     << "far_field_radius = " << fmt(c.diagnostics.far_field_radius) << "\n"
     << "tail_cutoffs = " << fmt(c.diagnostics.tail_cutoffs) << "\n"
     << "commutator_cutoffs = " << fmt(c.diagnostics.commutator_cutoffs) << "\n"
     << "weak_tolerance = " << fmt(c.diagnostics.weak_tolerance) << "\n\n"
     << "[sweep]\n"
     << "eps_ladder = " << fmt(c.sweep.eps_ladder) << "\n"
     << "workers = " << c.sweep.workers << "\n"
     << "min_decreasing = " << c.sweep.min_decreasing << "\n";
  if (!c.sweep.window_times.empty())
    os << "window_times = " << fmt(c.sweep.window_times) << "\n"
       << "window_half_widths = " << fmt(c.sweep.window_half_widths) << "\n";
  os << "\n[run]\n"
     << "seed = " << c.seed << "\n"
     << "name = " << c.name << "\n";
  return os.str();
}

}  // namespace hwm
