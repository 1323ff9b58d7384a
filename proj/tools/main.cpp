// deltatrap: command-line front end for the moving delta-well model.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "deltatrap/analysis.hpp"
#include "deltatrap/analytic.hpp"
#include "deltatrap/oracle.hpp"
#include "deltatrap/quadrature.hpp"
#include "validation.hpp"

#ifndef DELTATRAP_VERSION
#define DELTATRAP_VERSION "unknown"
#endif

namespace {

namespace fs = std::filesystem;
namespace an = deltatrap::analytic;
namespace o = deltatrap::oracle;
namespace al = deltatrap::analysis;
namespace val = deltatrap::validation;
using json = nlohmann::json;
using cplx = std::complex<double>;

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNonConvergence = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Engine { closed, quadrature, oracle };

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::closed: return "closed";
    case Engine::quadrature: return "quadrature";
    case Engine::oracle: return "oracle";
  }
  return "?";
}

struct CommonOptions {
  double gamma = 1.0;
  double v = 0.0;
  Engine engine = Engine::closed;
  std::string out_dir = ".";
  double quad_abs_tol = an::default_wavefunction_quadrature().abs_tol;
  double quad_rel_tol = an::default_wavefunction_quadrature().rel_tol;
  int quad_max_intervals = an::default_wavefunction_quadrature().max_intervals;
  std::optional<double> dx;
  std::optional<double> dt;
  bool relaxed = false;
};

struct EvolveOptions {
  std::optional<double> t_final;
  std::optional<double> t;
  int frames = 6;
  std::optional<double> x_min;
  std::optional<double> x_max;
  int nx = 801;
  bool with_approx = false;
  bool long_format = false;
};

struct TraceOptions {
  double duration = 8.0;
  int samples = 2048;
  std::string trace = "dv";
};

void write_atomically(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  const fs::path probe = fs::path(dir) / ".deltatrap-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir + " is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

an::WellParams well(const CommonOptions& c) { return an::WellParams(c.gamma, c.v); }

json conventions() {
  return {
      {"units", "hbar = 2m = 1"},
      {"hamiltonian", "-d^2/dx^2 - gamma delta(x - v t)"},
      {"moshinsky_time_argument", "2 (t - t')"},
      {"kernel_perturbation", "(gamma/2) exp(i Phi) M(|x - vt| + |x' - vt'|, +i gamma/2, 2 (t - t'))"},
      {"well_depth_identification", "V0 = -gamma/2 in the half-line identity"},
  };
}

json base_manifest(const std::string& command, const CommonOptions& c) {
  json m;
  m["command"] = command;
  m["engine"] = engine_name(c.engine);
  m["gamma"] = c.gamma;
  m["v"] = c.v;
  m["grid"] = nullptr;
  m["t_final"] = nullptr;
  m["tolerances"] = json::object();
  m["version"] = DELTATRAP_VERSION;
  m["duration_s"] = 0.0;
  m["checks"] = json::array();
  m["conventions"] = conventions();
  m["outputs"] = json::array();
  if (c.engine == Engine::quadrature) {
    m["tolerances"]["quadrature_abs_tol"] = c.quad_abs_tol;
    m["tolerances"]["quadrature_rel_tol"] = c.quad_rel_tol;
    m["tolerances"]["quadrature_max_intervals"] = c.quad_max_intervals;
  }
  return m;
}

json grid_json(const o::GridSpec& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_points", g.n_points}, {"dx", g.dx()}, {"dt", g.dt}};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish_manifest(json& m, const fs::path& dir, const Stopwatch& clock) {
  m["duration_s"] = clock.seconds();
  write_atomically(dir / "run.manifest.json", m.dump(2) + "\n");
}

// Oracle set-up shared by evolve and the trace commands: the auto grid with
// optional dx / dt overrides, then the step shrunk so snapshots land on a
// multiple of `snapshot_interval`.
struct OracleRun {
  o::DeltaModel model;
  o::GridSpec grid;
  o::WavefunctionField start;
  int steps_per_snapshot = 1;
};

OracleRun make_oracle_run(const CommonOptions& c, double t_end, double snapshot_interval) {
  const auto p = well(c);
  o::DeltaModel model = o::default_model(p);
  o::GridSpec g = o::auto_grid(p, model, t_end);
  if (c.dx) {
    const auto intervals = static_cast<std::size_t>(std::ceil((g.x_max - g.x_min) / *c.dx));
    g.n_points = intervals + 1;
  }
  g.dt = c.dt.value_or(g.dx());
  int per = 1;
  if (snapshot_interval > 0.0) {
    per = std::max(1, static_cast<int>(std::ceil(snapshot_interval / g.dt - 1e-9)));
    g.dt = snapshot_interval / per;
  }
  g.validate();
  model.validate_on(g);
  auto method = c.relaxed ? o::GroundStateMethod::relaxed : o::GroundStateMethod::sampled;
  auto start = o::ground_state_on_grid(g, model, method).field;
  return {model, g, std::move(start), per};
}

void add_oracle_tolerances(json& m, const OracleRun& run, bool relaxed) {
  m["grid"] = grid_json(run.grid);
  m["tolerances"]["regularization_width"] = run.model.width();
  m["tolerances"]["initial_state"] = relaxed ? "relaxed" : "sampled";
}

// ---------------------------------------------------------------- evolve

struct Snapshot {
  double t;
  std::vector<double> x;
  std::vector<cplx> psi;
};

std::vector<double> output_grid(const CommonOptions& c, const EvolveOptions& e, double t_end) {
  const double reach = 2.0 * c.v * t_end;
  const double lo = e.x_min.value_or(std::min(0.0, reach) - 10.0 / c.gamma);
  const double hi = e.x_max.value_or(std::max(0.0, reach) + 10.0 / c.gamma);
  if (!(hi > lo)) throw ConfigError("--x-max must exceed --x-min");
  if (e.nx < 2) throw ConfigError("--nx must be at least 2");
  std::vector<double> xs(static_cast<std::size_t>(e.nx));
  for (int i = 0; i < e.nx; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (e.nx - 1);
  return xs;
}

cplx analytic_value(Engine engine, double x, double t, const an::WellParams& p,
                    const deltatrap::quadrature::Options& opts) {
  if (t == 0.0) return an::initial_bound_state(x, p);
  if (engine == Engine::closed) return an::exact_wavefunction_closed({x, t}, p);
  return an::exact_wavefunction_quadrature({x, t}, p, opts);
}

std::string snapshot_csv_header(bool with_approx) {
  return with_approx ? "x,t,re,im,density,approx_re,approx_im,approx_density\n"
                     : "x,t,re,im,density\n";
}

void append_snapshot_rows(std::string& out, const Snapshot& s, bool with_approx,
                          const an::WellParams& p) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const cplx v = s.psi[i];
    out += fmt::format("{},{},{},{},{}", num(s.x[i]), num(s.t), num(v.real()), num(v.imag()),
                       num(std::norm(v)));
    if (with_approx) {
      if (s.t > 0.0) {
        const cplx a = an::asymptotic_terms({s.x[i], s.t}, p).sum();
        out += fmt::format(",{},{},{}", num(a.real()), num(a.imag()), num(std::norm(a)));
      } else {
        out += ",,,";
      }
    }
    out += '\n';
  }
}

int cmd_evolve(const CommonOptions& c, const EvolveOptions& e) {
  Stopwatch clock;
  if (e.t && e.t_final) throw ConfigError("give either --t or --t-final, not both");
  if (!e.t && !e.t_final) throw ConfigError("one of --t or --t-final is required");
  const double t_end = e.t ? *e.t : *e.t_final;
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("time must be finite and >= 0");
  if (e.frames < 1) throw ConfigError("--frames must be at least 1");
  const auto p = well(c);
  const fs::path dir = prepare_out_dir(c.out_dir);

  std::vector<double> times;
  if (e.t) {
    times = {t_end};
  } else if (t_end == 0.0) {
    times = {0.0};
  } else {
    for (int k = 0; k <= e.frames; ++k) times.push_back(t_end * k / e.frames);
  }

  json m = base_manifest("evolve", c);
  m["t_final"] = t_end;
  std::vector<Snapshot> snaps;
  const auto xs = output_grid(c, e, t_end);

  if (c.engine == Engine::oracle) {
    const double interval = times.size() > 1 ? times[1] - times[0] : t_end;
    const auto run = make_oracle_run(c, t_end, interval);
    add_oracle_tolerances(m, run, c.relaxed);
    const bool single = e.t.has_value();
    o::evolve(run.start, run.model, p, t_end, run.steps_per_snapshot, [&](const o::WavefunctionField& f) {
      if (single && f.t != t_end) return;
      Snapshot s{f.t, {}, {}};
      for (std::size_t j = 0; j < run.grid.n_points; ++j) {
        const double x = run.grid.x(j);
        if (x < xs.front() || x > xs.back()) continue;
        s.x.push_back(x);
        s.psi.push_back(f.values[j]);
      }
      // Thin to roughly the requested point count.
      const std::size_t stride = std::max<std::size_t>(1, s.x.size() / xs.size());
      Snapshot thin{s.t, {}, {}};
      for (std::size_t j = 0; j < s.x.size(); j += stride) {
        thin.x.push_back(s.x[j]);
        thin.psi.push_back(s.psi[j]);
      }
      snaps.push_back(std::move(thin));
    });
  } else {
    m["grid"] = {{"x_min", xs.front()}, {"x_max", xs.back()}, {"n_points", xs.size()}};
    deltatrap::quadrature::Options opts = an::default_wavefunction_quadrature();
    opts.abs_tol = c.quad_abs_tol;
    opts.rel_tol = c.quad_rel_tol;
    opts.max_intervals = c.quad_max_intervals;
    for (double t : times) {
      Snapshot s{t, xs, {}};
      s.psi.reserve(xs.size());
      for (double x : xs) s.psi.push_back(analytic_value(c.engine, x, t, p, opts));
      snaps.push_back(std::move(s));
    }
  }
  m["snapshot_times"] = json::array();
  for (const auto& s : snaps) m["snapshot_times"].push_back(s.t);

  if (e.long_format) {
    std::string body = snapshot_csv_header(e.with_approx);
    for (const auto& s : snaps) append_snapshot_rows(body, s, e.with_approx, p);
    write_atomically(dir / "snapshots.csv", body);
    m["outputs"].push_back("snapshots.csv");
  } else {
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      std::string body = snapshot_csv_header(e.with_approx);
      append_snapshot_rows(body, snaps[k], e.with_approx, p);
      const std::string name = fmt::format("snapshot_{:04d}.csv", k);
      write_atomically(dir / name, body);
      m["outputs"].push_back(name);
    }
  }
  finish_manifest(m, dir, clock);
  return kOk;
}

// ---------------------------------------------------------------- survival

int cmd_survival(double gamma, const std::vector<double>& velocities, bool with_overlap,
                 const std::string& out_dir) {
  Stopwatch clock;
  if (velocities.empty()) throw ConfigError("--v-list must name at least one velocity");
  const fs::path dir = prepare_out_dir(out_dir);
  std::string body = with_overlap ? "v,theta,survival,overlap\n" : "v,theta,survival\n";
  for (double v : velocities) {
    const an::WellParams p(gamma, v);
    body += fmt::format("{},{},{}", num(v), num(an::massey_parameter(p)), num(an::survival_probability(p)));
    if (with_overlap) body += "," + num(an::survival_probability_by_overlap(p));
    body += '\n';
  }
  write_atomically(dir / "survival.csv", body);
  std::cout << body;

  CommonOptions c;
  c.gamma = gamma;
  json m = base_manifest("survival", c);
  m["engine"] = "closed";
  m["v"] = velocities;
  m["outputs"] = {"survival.csv"};
  finish_manifest(m, dir, clock);
  return kOk;
}

// ---------------------------------------------------------------- peaks / spectrum

al::PeakTrace make_trace(const CommonOptions& c, const TraceOptions& t, json& m) {
  if (!(t.duration > 0.0)) throw ConfigError("--duration must be positive");
  if (t.samples < 64) throw ConfigError("--samples must be at least 64");
  const auto p = well(c);
  const auto times = al::uniform_times(t.duration, static_cast<std::size_t>(t.samples));
  m["t_final"] = times.back();
  m["samples"] = t.samples;

  switch (c.engine) {
    case Engine::closed:
      return al::track_peaks(al::closed_form_trajectory(times, p), p);
    case Engine::quadrature: {
      deltatrap::quadrature::Options opts = an::default_wavefunction_quadrature();
      opts.abs_tol = c.quad_abs_tol;
      opts.rel_tol = c.quad_rel_tol;
      opts.max_intervals = c.quad_max_intervals;
    opts.max_intervals = c.quad_max_intervals;
    opts.rel_tol = c.quad_rel_tol;
    opts.max_intervals = c.quad_max_intervals;
      al::SampledTrajectory trajectory(times, [p, opts](double x, double time) {
        return analytic_value(Engine::quadrature, x, time, p, opts);
      });
      return al::track_peaks(trajectory, p);
    }
    case Engine::oracle: {
      const double interval = times[1] - times[0];
      const auto run = make_oracle_run(c, times.back(), interval);
      add_oracle_tolerances(m, run, c.relaxed);
      // Densities are read off each snapshot as it is produced; storing the
      // fields would need N copies of the grid.
      al::PeakTrace trace;
      o::evolve(run.start, run.model, p, times.back(), run.steps_per_snapshot,
                [&](const o::WavefunctionField& f) {
                  const double vt = p.v() * f.t;
                  trace.times.push_back(f.t);
                  trace.d0.push_back(al::interpolate_density(f, 0.0));
                  trace.dv.push_back(al::interpolate_density(f, vt));
                  trace.d2v.push_back(al::interpolate_density(f, 2.0 * vt));
                });
      return trace;
    }
  }
  throw std::logic_error("unknown engine");
}

std::string trace_csv(const al::PeakTrace& trace) {
  std::string body = "t,d0,dv,d2v\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    body += fmt::format("{},{},{},{}\n", num(trace.times[i]), num(trace.d0[i]), num(trace.dv[i]),
                        num(trace.d2v[i]));
  }
  return body;
}

int cmd_peaks(const CommonOptions& c, const TraceOptions& t) {
  Stopwatch clock;
  const fs::path dir = prepare_out_dir(c.out_dir);
  json m = base_manifest("peaks", c);
  const auto trace = make_trace(c, t, m);
  write_atomically(dir / "trace.csv", trace_csv(trace));
  m["outputs"] = {"trace.csv"};
  finish_manifest(m, dir, clock);
  return kOk;
}

int cmd_spectrum(const CommonOptions& c, const TraceOptions& t) {
  Stopwatch clock;
  al::TraceKind kind;
  if (t.trace == "d0") {
    kind = al::TraceKind::d0;
  } else if (t.trace == "dv") {
    kind = al::TraceKind::dv;
  } else if (t.trace == "d2v") {
    kind = al::TraceKind::d2v;
  } else {
    throw ConfigError("--trace must be d0, dv or d2v");
  }
  const auto p = well(c);
  const fs::path dir = prepare_out_dir(c.out_dir);
  json m = base_manifest("spectrum", c);
  const auto trace = make_trace(c, t, m);
  const auto& values = kind == al::TraceKind::d0 ? trace.d0 : kind == al::TraceKind::dv ? trace.dv : trace.d2v;
  const auto s = al::spectrum(trace.times, values, p);
  const auto labels = al::identify_spectral_peaks(s, p, kind);

  std::vector<std::string> bin_label(s.freqs.size());
  json found = json::object();
  for (const auto& [label, peak] : labels) {
    const char* status = peak.status == al::PeakStatus::present  ? "present"
                         : peak.status == al::PeakStatus::absent ? "absent"
                                                                 : "merged_with_dc";
    found[std::string(1, label)] = {{"expected", peak.expected}, {"status", status}, {"frequency", peak.frequency}};
    if (peak.status != al::PeakStatus::present) continue;
    const auto k = static_cast<std::size_t>(std::lround(peak.frequency / s.df));
    if (k < bin_label.size()) bin_label[k] += label;
  }
  std::string body = "f,magnitude,label\n";
  for (std::size_t k = 0; k < s.freqs.size(); ++k) {
    body += fmt::format("{},{},{}\n", num(s.freqs[k]), num(s.mags[k]), bin_label[k]);
  }
  write_atomically(dir / "spectrum.csv", body);
  write_atomically(dir / "trace.csv", trace_csv(trace));
  m["trace"] = t.trace;
  m["df"] = s.df;
  m["parseval_error"] = s.parseval_error;
  m["labels"] = found;
  m["outputs"] = {"spectrum.csv", "trace.csv"};
  finish_manifest(m, dir, clock);
  return kOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& level_name, const std::string& out_dir) {
  Stopwatch clock;
  val::Level level;
  if (level_name == "fast") {
    level = val::Level::fast;
  } else if (level_name == "full") {
    level = val::Level::full;
  } else {
    throw ConfigError("--level must be fast or full");
  }
  const fs::path dir = prepare_out_dir(out_dir);
  const auto checks = val::run(level);
  write_atomically(dir / "validation.csv", val::to_csv(checks));

  CommonOptions c;
  json m = base_manifest("validate", c);
  m["engine"] = level == val::Level::fast ? "closed+quadrature" : "closed+quadrature+oracle";
  m["gamma"] = nullptr;
  m["v"] = nullptr;
  m["level"] = level_name;
  for (const auto& ch : checks) {
    m["checks"].push_back({{"id", ch.id},
                           {"criterion", ch.criterion},
                           {"value", ch.value},
                           {"relation", ch.relation},
                           {"threshold", ch.threshold},
                           {"passed", ch.passed},
                           {"detail", ch.detail}});
    m["tolerances"][ch.id] = ch.threshold;
    std::cout << fmt::format("{:<4} {:<34} {:>12.4e} {} {:<10.3g} {}\n", ch.passed ? "PASS" : "FAIL",
                             ch.id, ch.value, ch.relation, ch.threshold, ch.detail);
  }
  m["outputs"] = {"validation.csv"};
  finish_manifest(m, dir, clock);
  const bool ok = val::all_passed(checks);
  std::cout << (ok ? "all checks passed\n" : "some checks failed\n");
  return ok ? kOk : kValidationFailed;
}

void report_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

void add_common(CLI::App* cmd, CommonOptions& c, bool engine_flag) {
  cmd->add_option("--gamma", c.gamma, "Well strength (> 0)")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--v", c.v, "Well velocity")->required();
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  if (!engine_flag) return;
  cmd->add_option("--engine", c.engine, "closed | quadrature | oracle")
      ->required()
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Engine>{{"closed", Engine::closed},
                                        {"quadrature", Engine::quadrature},
                                        {"oracle", Engine::oracle}},
          CLI::ignore_case));
  cmd->add_option("--quad-tol", c.quad_abs_tol, "Quadrature absolute tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--quad-rel-tol", c.quad_rel_tol, "Quadrature relative tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--quad-max-intervals", c.quad_max_intervals, "Quadrature refinement budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dx", c.dx, "Oracle grid spacing (default: automatic)")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", c.dt, "Oracle time step (default: dx)")->check(CLI::PositiveNumber);
  cmd->add_flag("--relaxed", c.relaxed, "Oracle starts from the relaxed ground state of the smoothed well");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of a bound particle in a suddenly moving delta well"};
  app.set_version_flag("--version", std::string(DELTATRAP_VERSION));
  app.require_subcommand(1);

  CommonOptions evolve_common;
  EvolveOptions evolve_opts;
  auto* evolve = app.add_subcommand("evolve", "Wavefunction snapshots");
  add_common(evolve, evolve_common, true);
  evolve->add_option("--t-final", evolve_opts.t_final, "Last snapshot time");
  evolve->add_option("--t", evolve_opts.t, "Single snapshot time");
  evolve->add_option("--frames", evolve_opts.frames, "Intervals between snapshots up to --t-final")
      ->capture_default_str();
  evolve->add_option("--x-min", evolve_opts.x_min, "Left end of the output grid");
  evolve->add_option("--x-max", evolve_opts.x_max, "Right end of the output grid");
  evolve->add_option("--nx", evolve_opts.nx, "Output points")->capture_default_str();
  evolve->add_flag("--with-approx", evolve_opts.with_approx, "Add the three-term long-time approximation");
  evolve->add_flag("--long", evolve_opts.long_format, "Write all snapshots to one file");

  double survival_gamma = 1.0;
  std::vector<double> survival_v;
  bool survival_overlap = false;
  std::string survival_out = ".";
  auto* survival = app.add_subcommand("survival", "Long-time trapped fraction");
  survival->add_option("--gamma", survival_gamma, "Well strength")->required()->check(CLI::PositiveNumber);
  survival->add_option("--v-list", survival_v, "Velocities")->required()->delimiter(',');
  survival->add_flag("--with-overlap", survival_overlap, "Also evaluate the overlap integral");
  survival->add_option("--out", survival_out, "Output directory")->capture_default_str();

  CommonOptions peaks_common;
  TraceOptions peaks_opts;
  auto* peaks = app.add_subcommand("peaks", "Densities at x = 0, vt and 2vt over time");
  add_common(peaks, peaks_common, true);
  peaks->add_option("--duration", peaks_opts.duration, "Trace length")->capture_default_str();
  peaks->add_option("--samples", peaks_opts.samples, "Uniform samples")->capture_default_str();

  CommonOptions spectrum_common;
  TraceOptions spectrum_opts;
  auto* spectrum = app.add_subcommand("spectrum", "Spectrum of one peak trace with labels A-E");
  add_common(spectrum, spectrum_common, true);
  spectrum->add_option("--duration", spectrum_opts.duration, "Trace length")->capture_default_str();
  spectrum->add_option("--samples", spectrum_opts.samples, "Uniform samples")->capture_default_str();
  spectrum->add_option("--trace", spectrum_opts.trace, "d0 | dv | d2v")->capture_default_str();

  std::string level = "fast";
  std::string validate_out = ".";
  auto* validate = app.add_subcommand("validate", "Numbered validation checks");
  validate->add_option("--level", level, "fast | full")->capture_default_str();
  validate->add_option("--out", validate_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("configuration", e.what());
    return kConfigError;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(evolve_common, evolve_opts);
    if (survival->parsed()) return cmd_survival(survival_gamma, survival_v, survival_overlap, survival_out);
    if (peaks->parsed()) return cmd_peaks(peaks_common, peaks_opts);
    if (spectrum->parsed()) return cmd_spectrum(spectrum_common, spectrum_opts);
    if (validate->parsed()) return cmd_validate(level, validate_out);
  } catch (const deltatrap::quadrature::QuadratureError& e) {
    report_error("non_convergence", e.what());
    return kNonConvergence;
  } catch (const o::ConvergenceError& e) {
    report_error("non_convergence", e.what());
    return kNonConvergence;
  } catch (const IoError& e) {
    report_error("io", e.what());
    return kConfigError;
  } catch (const ConfigError& e) {
    report_error("configuration", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    report_error("configuration", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    report_error("engine", e.what());
    return kNonConvergence;
  }
  return kConfigError;
}
