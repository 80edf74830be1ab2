// Copyright 2026 The bseries Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bseries/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <map>
#include <set>
#include <sstream>

#include "bseries/errors.hpp"
#include "bseries/solution_io.hpp"
#include "bseries/verifier.hpp"

#ifndef BSERIES_VERSION
#define BSERIES_VERSION "dev"
#endif

namespace bseries {

using nlohmann::json;

namespace {

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <class T>
T field(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong type: " + doc.at(key).dump());
  }
}

std::string coordinate_key(int j, bool cf) { return "alpha" + std::to_string(j) + (cf ? "_cf" : ""); }

}  // namespace

json to_json(const RunConfig& c) {
  json doc = {{"subcommand", c.subcommand},
              {"n", c.solver.n},
              {"K", c.solver.K},
              {"f0", c.solver.f0},
              {"gauge_a", c.solver.effective_gauge()},
              {"precision", precision_name(c.solver.precision)},
              {"divisor_floor", c.solver.effective_divisor_floor()},
              {"kernel", kernel_name(c.solver.kernel)},
              {"seed", c.seed}};
  for (std::size_t j = 0; j < c.frequencies.size(); ++j) {
    const auto& spec = c.frequencies[j];
    if (spec.is_cf()) {
      doc[coordinate_key(static_cast<int>(j) + 1, true)] = spec.cf().to_string();
    } else {
      doc[coordinate_key(static_cast<int>(j) + 1, false)] = spec.ratio_text();
    }
  }
  if (!c.input.empty()) doc["in"] = c.input;
  if (!c.out.empty()) doc["out"] = c.out;
  if (!c.csv.empty()) doc["csv"] = c.csv;
  if (c.subcommand == "scan") doc["grid"] = c.grid;
  if (c.window) {
    doc["j_min"] = c.window->j_min;
    doc["j_max"] = c.window->j_max;
  }
  if (c.subcommand == "verify") doc["sphere_eps"] = c.sphere_epsilons;
  if (c.subcommand == "plot") {
    doc["width"] = c.plot.width;
    doc["height"] = c.plot.height;
    doc["title"] = c.plot.title;
  }
  return doc;
}

RunConfig run_config_from_json(const std::string& subcommand, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "must be a JSON object");
  RunConfig c;
  c.subcommand = subcommand;

  // Coordinates given explicitly determine n unless it is set.
  int highest = 0;
  for (int j = 1; j <= 64; ++j) {
    if (doc.contains(coordinate_key(j, false)) || doc.contains(coordinate_key(j, true))) highest = j;
  }
  if (highest == 0 && (doc.contains("alpha") || doc.contains("alpha_cf"))) highest = 1;
  c.solver.n = field<int>(doc, "n", std::max(highest, 1));
  c.solver.K = field<int>(doc, "K", subcommand == "scan" ? 120 : 10);
  c.solver.f0 = field<double>(doc, "f0", c.solver.f0);
  c.solver.gauge_a = field<std::vector<double>>(doc, "gauge_a", {});
  if (doc.contains("divisor_floor")) c.solver.divisor_floor = field<double>(doc, "divisor_floor", 0);
  c.solver.precision = parse_precision(field<std::string>(doc, "precision", "f64"));
  c.solver.kernel = parse_kernel(field<std::string>(doc, "kernel", "auto"));
  c.solver.validate();

  const bool needs_frequencies = subcommand != "scan" && subcommand != "plot" && !doc.contains("in");
  if (needs_frequencies) {
    for (int j = 1; j <= c.solver.n; ++j) {
      std::string ratio = field<std::string>(doc, coordinate_key(j, false), "");
      std::string cf = field<std::string>(doc, coordinate_key(j, true), "");
      if (j == 1) {
        if (ratio.empty()) ratio = field<std::string>(doc, "alpha", "");
        if (cf.empty()) cf = field<std::string>(doc, "alpha_cf", "");
      }
      if (!ratio.empty() && !cf.empty()) throw ConfigError(coordinate_key(j, false), "give either a ratio or a continued fraction");
      if (ratio.empty() && cf.empty()) throw ConfigError(coordinate_key(j, false), "missing frequency for coordinate " + std::to_string(j));
      if (!cf.empty()) {
        c.frequencies.push_back(AngleSpec::continued_fraction(ContinuedFraction::parse(cf)));
      } else {
        char* end = nullptr;
        std::strtod(ratio.c_str(), &end);
        if (end == ratio.c_str() || *end != '\0') throw ConfigError(coordinate_key(j, false), "not a number: '" + ratio + "'");
        c.frequencies.push_back(AngleSpec::explicit_ratio(ratio));
      }
    }
  }

  c.input = field<std::string>(doc, "in", "");
  c.out = field<std::string>(doc, "out", "");
  c.csv = field<std::string>(doc, "csv", "");
  c.manifest = field<std::string>(doc, "manifest", "");
  c.workers = field<int>(doc, "workers", 0);
  if (c.workers < 0) throw ConfigError("workers", "must be non-negative");
  c.seed = field<std::uint64_t>(doc, "seed", 1);
  c.sphere_epsilons = field<std::vector<double>>(doc, "sphere_eps", c.sphere_epsilons);
  for (double e : c.sphere_epsilons) {
    if (!(e > 0 && e < 1)) throw ConfigError("sphere_eps", "entries must lie in (0, 1)");
  }

  if (doc.contains("j_min") || doc.contains("j_max")) {
    const auto def = default_window(c.solver.K);
    FitWindow w{field<int>(doc, "j_min", def.j_min), field<int>(doc, "j_max", def.j_max)};
    if (w.j_min < 5) throw ConfigError("j_min", "must be at least 5");
    if (w.j_max <= w.j_min) throw ConfigError("j_max", "must exceed j_min");
    c.window = w;
  }

  if (doc.contains("grid")) {
    for (const auto& v : doc.at("grid")) {
      if (v.is_number()) {
        std::ostringstream os;
        os << std::setprecision(17) << v.get<double>();
        c.grid.push_back(os.str());
      } else if (v.is_string()) {
        c.grid.push_back(v.get<std::string>());
      } else {
        throw ConfigError("grid", "entries must be numbers or decimal strings");
      }
    }
  } else if (doc.contains("grid_points") || doc.contains("grid_lo") || doc.contains("grid_hi")) {
    const double lo = field<double>(doc, "grid_lo", 0.3), hi = field<double>(doc, "grid_hi", 0.5);
    const int points = field<int>(doc, "grid_points", 101);
    if (!(lo > 0 && hi <= 0.5 && lo < hi)) throw ConfigError("grid_lo", "grid must satisfy 0 < lo < hi ≤ 1/2");
    if (points < 1) throw ConfigError("grid_points", "must be positive");
    const double theta = std::numbers::phi - 1.0;
    for (int i = 0; i < points; ++i) {
      std::ostringstream os;
      os << std::setprecision(17) << lo + (hi - lo) * (i + theta) / points;
      c.grid.push_back(os.str());
    }
  } else if (subcommand == "scan") {
    c.grid = default_scan_grid();
  }

  c.plot.width = field<int>(doc, "width", c.plot.width);
  c.plot.height = field<int>(doc, "height", c.plot.height);
  c.plot.title = field<std::string>(doc, "title", c.plot.title);
  if (c.plot.width < 200 || c.plot.height < 150) throw ConfigError("width", "plot must be at least 200×150");
  return c;
}

std::string config_hash(const RunConfig& config) { return fnv1a64(to_json(config).dump()); }

namespace {

struct Artifact {
  std::string path;
  std::string hash;
};

class Session {
 public:
  Session(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {}

  // Writes to the path, or to the console stream for an empty path.
  void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
      out_ << content;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open '" + path + "' for writing");
    file << content;
    if (!file.flush()) throw IoFailure("write to '" + path + "' failed");
    artifacts_.push_back({path, fnv1a64(content)});
  }

  void note(const std::string& line) { notes_.push_back(line); }

  void finish(std::ostream& console) {
    for (const auto& line : notes_) console << line << '\n';
    if (artifacts_.empty()) return;
    json outputs = json::array();
    for (const auto& a : artifacts_) outputs.push_back({{"path", a.path}, {"fnv1a64", a.hash}});
    const json manifest = {{"tool", "bseries"},
                           {"version", BSERIES_VERSION},
                           {"subcommand", config_.subcommand},
                           {"precision", precision_name(config_.solver.precision)},
                           {"config_hash", config_hash(config_)},
                           {"config", to_json(config_)},
                           {"outputs", std::move(outputs)}};
    const std::string path = config_.manifest.empty() ? artifacts_.front().path + ".manifest.json" : config_.manifest;
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << manifest.dump(2) << '\n')) throw IoFailure("cannot write manifest '" + path + "'");
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
  std::vector<Artifact> artifacts_;
  std::vector<std::string> notes_;
};

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

template <RealScalar Real>
SolutionState<Real> obtain_state(const RunConfig& config) {
  if (!config.input.empty()) {
    try {
      return solution_from_json<Real>(json::parse(read_file(config.input)));
    } catch (const json::exception& e) {
      throw IoFailure("'" + config.input + "' is not valid JSON: " + e.what());
    } catch (const StructuralError& e) {
      throw IoFailure("'" + config.input + "': " + e.what());
    }
  }
  const auto fv = make_frequencies<Real>(config.frequencies, 2 * config.solver.K - 1);
  return solve<Real>(config.solver, fv);
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

template <RealScalar Real>
void run_solve(const RunConfig& config, Session& session) {
  const auto state = obtain_state<Real>(config);
  session.emit(config.out, to_json(state).dump(1) + "\n");
  if (!config.csv.empty()) {
    std::ostringstream csv;
    write_f_csv(csv, state);
    session.emit(config.csv, csv.str());
  }
  if (!config.out.empty()) {
    session.note("solved n=" + std::to_string(config.solver.n) + " through order " + std::to_string(state.order) + " (" +
                 precision_name(config.solver.precision) + ")");
  }
}

template <RealScalar Real>
void run_verify(const RunConfig& config, Session& session) {
  const auto state = obtain_state<Real>(config);
  VerifyOptions options;
  options.seed = config.seed;
  auto report = verify_state(state, options);
  SolverConfig sphere = state.config;
  sphere.n = 1;
  sphere.K = 4;
  sphere.gauge_a.clear();
  report.sphere_limit = sphere_limit<Real>(config.sphere_epsilons, sphere);
  session.emit(config.out, to_json(report).dump(2) + "\n");
}

template <RealScalar Real>
void run_fit(const RunConfig& config, Session& session) {
  const auto state = obtain_state<Real>(config);
  const auto seq = ratios(state);
  const auto window = config.window.value_or(default_window(state.order));
  const auto fit = fit_asymptotic(seq, window);
  const json doc = {{"b_inf", fit.b_inf},
                    {"sigma", fit.sigma},
                    {"window", {fit.window.j_min, fit.window.j_max}},
                    {"rms_residual", fit.rms_residual},
                    {"richardson_b_inf", fit.richardson_b_inf},
                    {"richardson_sigma", fit.richardson_sigma},
                    {"flagged", fit.flagged},
                    {"sign_change", seq.sign_change},
                    {"b_inf_inv_sqrt", fit.b_inf > 0 ? 1.0 / std::sqrt(fit.b_inf) : 0.0}};
  session.emit(config.out, doc.dump(2) + "\n");
  if (!config.csv.empty()) {
    std::ostringstream csv;
    write_ratios_csv(csv, seq);
    session.emit(config.csv, csv.str());
  }
}

template <RealScalar Real>
void run_table(const RunConfig& config, Session& session) {
  const auto state = obtain_state<Real>(config);
  const auto rows = bombieri_table(state);
  std::ostringstream text;
  for (const auto& row : rows) {
    text << "k=" << row.k << ':';
    for (double e : row.entries) text << ' ' << fmt(e);
    text << '\n';
  }
  if (config.out.empty()) {
    session.emit("", text.str());
  } else {
    std::ostringstream csv;
    write_table_csv(csv, rows);
    session.emit(config.out, csv.str());
    session.note(text.str().substr(0, text.str().size() - 1));
  }
}

void run_scan(const RunConfig& config, Session& session, std::ostream& err) {
  ScanConfig sc{config.solver, config.window, config.workers};
  const auto points = alpha_scan(config.grid, sc, [&](const ScanPoint& p) {
    err << "alpha/(2pi)=" << p.ratio_text << ' ' << status_name(p.status) << '\n';
  });
  std::ostringstream csv;
  write_scan_csv(csv, points);
  session.emit(config.out, csv.str());
}

void run_plot(const RunConfig& config, Session& session) {
  if (config.input.empty()) throw ConfigError("in", "plot needs --in scan.csv");
  std::istringstream is(read_file(config.input));
  std::vector<ScanPoint> points;
  try {
    points = read_scan_csv(is);
  } catch (const StructuralError& e) {
    throw IoFailure("'" + config.input + "': " + e.what());
  }
  session.emit(config.out, render_scan_svg(points, config.plot));
}

// Flags in their JSON spelling; only the ones given on the command line are
// merged over the config file.
struct Flags {
  std::string config_path;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> strings;
  std::map<std::string, std::vector<std::string>> lists;
  bool sphere = true;
};

void add_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config_path, "JSON run configuration; flags override it");
  auto str = [&](const std::string& flag, const std::string& key, const std::string& help) {
    flags.options.emplace_back(key, sub->add_option(flag, flags.strings[key], help));
  };
  auto list = [&](const std::string& flag, const std::string& key, const std::string& help) {
    flags.options.emplace_back(key, sub->add_option(flag, flags.lists[key], help)->delimiter(' '));
  };
  str("--n", "n", "dimension");
  str("--K", "K", "target order (f through degree 2K)");
  str("--f0", "f0", "f(0) < 0");
  list("--gauge-a", "gauge_a", "positive gauge constants a_j");
  str("--precision", "precision", "f64 or ext");
  str("--divisor-floor", "divisor_floor", "smallest admissible |divisor|");
  str("--kernel", "kernel", "auto, sparse or circle");
  str("--alpha", "alpha", "alpha/(2 pi) of coordinate 1");
  str("--alpha-cf", "alpha_cf", "continued fraction of alpha/(2 pi), e.g. 3,3,[1]");
  for (int j = 1; j <= 4; ++j) {
    str("--alpha" + std::to_string(j), coordinate_key(j, false), "alpha/(2 pi) of coordinate " + std::to_string(j));
    str("--alpha" + std::to_string(j) + "-cf", coordinate_key(j, true), "continued fraction of coordinate " + std::to_string(j));
  }
  str("--in", "in", "input file");
  str("--out", "out", "output file (stdout if omitted)");
  str("--csv", "csv", "CSV output file");
  str("--manifest", "manifest", "manifest path (default <out>.manifest.json)");
  str("--seed", "seed", "seed for randomized test points");
  str("--workers", "workers", "scan worker threads (0 = all cores)");
  str("--j-min", "j_min", "fit window start");
  str("--j-max", "j_max", "fit window end");
  list("--grid", "grid", "explicit alpha/(2 pi) grid");
  str("--grid-lo", "grid_lo", "generated grid lower end");
  str("--grid-hi", "grid_hi", "generated grid upper end");
  str("--grid-points", "grid_points", "generated grid size");
  list("--sphere-eps", "sphere_eps", "epsilons for the sphere-limit check");
  str("--width", "width", "plot width");
  str("--height", "height", "plot height");
  str("--title", "title", "plot title");
}

json flag_value(const std::string& key, const std::string& text) {
  static const std::set<std::string> numeric = {"n",       "K",       "f0",          "divisor_floor", "seed",
                                                "workers", "j_min",   "j_max",       "grid_lo",       "grid_hi",
                                                "grid_points", "width", "height"};
  if (!numeric.count(key)) return text;
  try {
    std::size_t pos = 0;
    if (key == "f0" || key == "divisor_floor" || key == "grid_lo" || key == "grid_hi") {
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (key == "seed") {
      const unsigned long long v = std::stoull(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    }
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(key, "not a number: '" + text + "'");
  }
}

json list_value(const std::string& key, const std::vector<std::string>& items) {
  json arr = json::array();
  for (const auto& item : items) {
    if (key == "grid") {
      arr.push_back(item);
      continue;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      arr.push_back(v);
    } catch (const std::logic_error&) {
      throw ConfigError(key, "not a number: '" + item + "'");
    }
  }
  return arr;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formal power series of locally integrable billiards near a period-2 orbit", "bseries"};
  app.set_version_flag("--version", BSERIES_VERSION);
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "compute f and chi through order K"},
      {"verify", "check a solution against the reflection-law oracle"},
      {"fit", "ratio sequence and asymptotic fit (n = 1)"},
      {"table", "Bombieri-normalized coefficient table (n = 2)"},
      {"scan", "b_inf^(-1/2) over a grid of alpha/(2 pi) (n = 1)"},
      {"plot", "render scan.csv as SVG"}};
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << BSERIES_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    json doc = json::object();
    if (!flags.config_path.empty()) {
      try {
        doc = json::parse(read_file(flags.config_path));
      } catch (const json::exception& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
      }
    }
    for (const auto& [key, option] : flags.options) {
      if (option->count() == 0) continue;
      doc[key] = flags.lists.count(key) ? list_value(key, flags.lists[key]) : flag_value(key, flags.strings[key]);
    }
    const RunConfig config = run_config_from_json(subcommand, doc);
    if (subcommand == "fit" && config.solver.n != 1) throw ConfigError("n", "fit needs n = 1");
    if (subcommand == "table" && config.solver.n != 2) throw ConfigError("n", "table needs n = 2");

    Session session(config, out);
    const bool ext = config.solver.precision == Precision::extended;
    if (subcommand == "solve") {
      ext ? run_solve<Quad>(config, session) : run_solve<double>(config, session);
    } else if (subcommand == "verify") {
      ext ? run_verify<Quad>(config, session) : run_verify<double>(config, session);
    } else if (subcommand == "fit") {
      ext ? run_fit<Quad>(config, session) : run_fit<double>(config, session);
    } else if (subcommand == "table") {
      ext ? run_table<Quad>(config, session) : run_table<double>(config, session);
    } else if (subcommand == "scan") {
      run_scan(config, session, err);
    } else {
      run_plot(config, session);
    }
    session.finish(out);
    return static_cast<int>(ExitCode::ok);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const SmallDivisorError& e) {
    err << "resonance: " << e.what() << '\n';
    return static_cast<int>(ExitCode::small_divisor);
  } catch (const IoFailure& e) {
    err << "I/O error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::io);
  } catch (const std::exception& e) {
    err << "consistency failure: " << e.what() << '\n';
    return static_cast<int>(ExitCode::consistency);
  }
}

}  // namespace bseries
