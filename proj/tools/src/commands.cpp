#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cache.hpp"
#include "csv.hpp"
#include "rydgate/blockade.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/parallel.hpp"
#include "rydgate/units.hpp"

namespace rydgate::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + " '" + s + "'");
  }
}

std::vector<PulseKind> resolve_pulses(const RunConfig& c) {
  std::vector<PulseKind> kinds;
  for (const auto& item : c.pulses) {
    for (const auto& name : split(item, ',')) {
      const auto k = pulse_kind_from_string(name);
      if (!k) throw ConfigError("unknown pulse kind '" + name + "' (square, gaussian, drag)");
      kinds.push_back(*k);
    }
  }
  if (kinds.empty()) throw ConfigError("no pulse kind given");
  return kinds;
}

Model resolve_model(const RunConfig& c) {
  const auto m = model_from_string(c.model);
  if (!m) throw ConfigError("unknown model '" + c.model + "' (unitary, lindblad)");
  return *m;
}

double single_tau(const RunConfig& c) {
  const auto taus = parse_tau_list(c.tau_t);
  if (taus.size() != 1) throw ConfigError("this command takes a single --tau-t value");
  return taus.front();
}

SequenceSpec make_spec(const RunConfig& c, double tau_t, PulseKind kind) {
  SequenceSpec spec = SequenceSpec::make(tau_t, parse_ratio(c.tau_c_ratio), kind);
  if (c.tau_c) {
    if (!(*c.tau_c > 0.0)) throw ConfigError("--tau-c must be positive");
    spec.tau_c = *c.tau_c;
  }
  return spec;
}

double effective_ratio(const SequenceSpec& spec) { return spec.tau_c / spec.tau_t; }

struct MetricFlags {
  bool pop = false;
  bool bell = false;
};

MetricFlags resolve_metrics(const RunConfig& c) {
  MetricFlags f;
  for (const auto& m : split(c.metrics, ',')) {
    if (m == "pop") {
      f.pop = true;
    } else if (m == "bell") {
      f.bell = true;
    } else {
      throw ConfigError("unknown metric '" + m + "' (pop, bell)");
    }
  }
  if (!f.pop && !f.bell) throw ConfigError("no metric selected");
  return f;
}

const std::vector<std::string> kMetricHeader = {
    "t_g_ns",   "tau_t_ns",        "tau_c_ns",       "pulse_kind",  "lambda_GHz",
    "amp_scale", "pop_error",      "bell_infidelity", "trace_distance", "phi_ent_rad",
    "amp_scale_control", "error"};

std::vector<Cell> metric_row(const SequenceSpec& spec, const std::optional<GateMetrics>& m,
                             const MetricFlags& flags, const std::string& error) {
  auto num = [&](bool on, double v) -> Cell { return on && m ? Cell{v} : Cell{std::string()}; };
  return {spec.gate_time(),
          spec.tau_t,
          spec.tau_c,
          std::string(to_string(spec.kinds[1])),
          angular_to_ghz(spec.lambda_target),
          spec.amp_scales[1],
          num(flags.pop, m ? m->population_error : 0.0),
          num(flags.bell, m ? 1.0 - m->bell_fidelity : 0.0),
          num(flags.bell, m ? m->trace_distance : 0.0),
          num(true, m ? m->entangling_phase : 0.0),
          spec.amp_scales[0],
          error};
}

CachedOptimum optimize_point(const SequenceSpec& spec, const PhysicalSetting& setting,
                             const GateOptions& gate) {
  OptimizeOptions opts;
  opts.gate = gate;
  const OptimizationResult r = optimize_gate(spec, setting, opts);
  return {r.spec.lambda_target, r.spec.amp_scales[1], r.spec.amp_scales[0], r.objective, r.no_progress};
}

void print_shape(std::ostream& out, const char* label, const PulseShape& s) {
  double peak = 0.0;
  for (const auto& w : sample_waveform(s, s.duration / 2000.0)) {
    if (std::abs(w.value) > std::abs(peak)) peak = w.value;
  }
  out << label << ": kind=" << to_string(s.kind) << " T=" << format_number(s.duration)
      << " ns sigma=" << format_number(s.sigma) << " ns N=" << s.derivative_order
      << " A=" << format_number(s.amplitude) << " peak=" << format_number(peak) << " rad/ns ("
      << format_number(angular_to_mhz(peak)) << " MHz) area=" << format_number(s.area) << " scale=" << format_number(s.amp_scale) << '\n';
  if (!s.null_frequencies.empty()) {
    out << "  nulls_GHz:";
    for (double d : s.null_frequencies) out << ' ' << format_number(angular_to_ghz(d));
    out << "\n  drag_coeffs:";
    for (std::size_t k = 0; k < s.drag_coeffs.size(); ++k) {
      out << " alpha_" << 2 * (k + 1) << '=' << format_number(s.drag_coeffs[k]);
    }
    out << '\n';
  }
}

std::optional<Eigen::Vector4cd> trajectory_input(const std::string& name) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  if (name == "00") {
    v(0) = 1.0;
  } else if (name == "01") {
    v(1) = 1.0;
  } else if (name == "10") {
    v(2) = 1.0;
  } else if (name == "11") {
    v(3) = 1.0;
  } else if (name == "bell") {
    v = bell_test_input();
  } else {
    return std::nullopt;
  }
  return v;
}

void write_trajectory(const std::filesystem::path& path, const std::vector<TrajectorySample>& samples) {
  std::vector<std::string> header{"t_ns"};
  for (Level l : kAllLevels) header.push_back("control_" + std::string(to_string(l)));
  for (Level l : kAllLevels) header.push_back("target_" + std::string(to_string(l)));
  CsvWriter csv(path, header);
  for (const auto& s : samples) {
    std::vector<Cell> row{s.t};
    for (double p : s.control) row.emplace_back(p);
    for (double p : s.target) row.emplace_back(p);
    csv.row(row);
  }
}

}  // namespace

std::vector<double> parse_tau_list(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw ConfigError("tau range must be start:stop:step");
    const double a = parse_double(p[0], "tau start");
    const double b = parse_double(p[1], "tau stop");
    const double h = parse_double(p[2], "tau step");
    if (!(h > 0.0) || b < a) throw ConfigError("empty tau range '" + spec + "'");
    const long n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  } else {
    for (const auto& item : split(spec, ',')) {
      if (!item.empty()) out.push_back(parse_double(item, "tau"));
    }
  }
  if (out.empty()) throw ConfigError("empty tau list");
  for (double t : out) {
    if (!(t > 0.0)) throw ConfigError("tau values must be positive");
  }
  return out;
}

double parse_ratio(const std::string& spec) {
  double r = 0.0;
  const auto slash = spec.find('/');
  if (slash != std::string::npos) {
    const double num = parse_double(spec.substr(0, slash), "tau_c ratio");
    const double den = parse_double(spec.substr(slash + 1), "tau_c ratio");
    if (den == 0.0) throw ConfigError("tau_c ratio has zero denominator");
    r = num / den;
  } else {
    r = parse_double(spec, "tau_c ratio");
  }
  if (!(r > 0.0)) throw ConfigError("tau_c ratio must be positive");
  return r;
}

std::vector<double> Grid::values() const {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(points == 1 ? min : min + (max - min) * i / (points - 1));
  return v;
}

Grid parse_grid(const std::string& spec) {
  const auto p = split(spec, ':');
  if (p.size() != 3) throw ConfigError("grid must be min:max:points, got '" + spec + "'");
  Grid g{parse_double(p[0], "grid min"), parse_double(p[1], "grid max"),
         static_cast<int>(parse_double(p[2], "grid points"))};
  if (g.points < 1 || g.max < g.min || (g.points > 1 && g.max == g.min)) {
    throw ConfigError("empty grid '" + spec + "'");
  }
  return g;
}

PhysicalSetting resolve_setting(const RunConfig& c) {
  PhysicalSetting s = c.setting_file.empty() ? load_setting(c.setting) : load_setting_file(c.setting_file);
  s.validate();
  return s;
}

std::filesystem::path resolve_out_dir(const RunConfig& c) {
  std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output directory '" + dir.string() + "' is not writable");
  }
  return dir;
}

GateOptions gate_options(const RunConfig& c, int workers) {
  if (!(c.tol > 0.0) || c.tol >= 1e-2) throw ConfigError("--tol must be in (0, 1e-2)");
  if (!(c.decay_scale >= 0.0)) throw ConfigError("--decay-scale must be non-negative");
  GateOptions g;
  g.propagation.tolerances.rtol = c.tol;
  g.propagation.tolerances.atol = 1e-2 * c.tol;
  g.decay.rate_scale = c.decay_scale;
  g.decay.literal_branch_amplitudes = c.literal_branches;
  g.workers = workers;
  return g;
}

int cmd_design(const RunConfig& c, std::ostream& out) {
  const PhysicalSetting setting = resolve_setting(c);
  const auto kinds = resolve_pulses(c);
  const double tau_t = single_tau(c);
  const Grid grid = parse_grid(c.delta_range);
  if (!(c.step > 0.0)) throw ConfigError("--step must be positive");
  std::vector<std::pair<PulseKind, std::array<PulseShape, 3>>> designs;
  for (PulseKind k : kinds) designs.emplace_back(k, build_sequence(make_spec(c, tau_t, k), setting));
  const auto dir = resolve_out_dir(c);

  for (const auto& [kind, shapes] : designs) {
    const std::string name(to_string(kind));
    out << "# " << name << " sequence, setting " << setting.name << '\n';
    print_shape(out, "control_pi", shapes[0]);
    print_shape(out, "target_2pi", shapes[1]);
    print_shape(out, "control_minus_pi", shapes[2]);

    CsvWriter wave(dir / ("waveform_" + name + ".csv"),
                   {"segment", "t_ns", "t_local_ns", "envelope_rad_per_ns"});
    double start = 0.0;
    const char* labels[3] = {"control_pi", "target_2pi", "control_minus_pi"};
    for (int i = 0; i < 3; ++i) {
      for (const auto& s : sample_waveform(shapes[i], c.step)) {
        wave.row({std::string(labels[i]), start + s.t, s.t, s.value});
      }
      start += shapes[i].duration;
    }

    CsvWriter spec_csv(dir / ("spectrum_" + name + ".csv"),
                       {"delta_GHz", "abs_S_control", "abs_S_target", "rel_S_control", "rel_S_target"});
    const double s0c = std::abs(spectrum(shapes[0], 0.0));
    const double s0t = std::abs(spectrum(shapes[1], 0.0));
    for (double d : grid.values()) {
      const double sc = std::abs(spectrum(shapes[0], ghz_to_angular(d)));
      const double st = std::abs(spectrum(shapes[1], ghz_to_angular(d)));
      spec_csv.row({d, sc, st, sc / s0c, st / s0t});
    }
    out << "wrote " << wave.path().string() << ", " << spec_csv.path().string() << '\n';
  }
  return kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const PhysicalSetting setting = resolve_setting(c);
  const auto kinds = resolve_pulses(c);
  const Model model = resolve_model(c);
  const double tau_t = single_tau(c);
  const MetricFlags flags = resolve_metrics(c);
  const GateOptions gate = gate_options(c, c.workers);
  std::optional<Eigen::Vector4cd> traj;
  if (!c.trajectory.empty()) {
    traj = trajectory_input(c.trajectory);
    if (!traj) throw ConfigError("unknown trajectory input '" + c.trajectory + "' (00, 01, 10, 11, bell)");
    if (!(c.stride > 0.0)) throw ConfigError("--stride must be positive");
  }
  const auto dir = resolve_out_dir(c);
  OptimumCache cache(dir / "optimize_cache.json");

  CsvWriter csv(dir / "simulate.csv", kMetricHeader);
  for (PulseKind kind : kinds) {
    SequenceSpec spec = make_spec(c, tau_t, kind);
    spec.lambda_target = mhz_to_angular(c.lambda_mhz);
    spec.amp_scales = {c.scale_control, c.scale_target, c.scale_control};
    if (c.optimize) {
      const auto key = OptimumCache::key(setting.name, tau_t, kind, effective_ratio(spec));
      auto hit = c.use_cache ? cache.find(key) : std::nullopt;
      if (!hit) {
        hit = optimize_point(spec, setting, gate);
        cache.store(key, *hit);
        cache.save();
      }
      apply(*hit, spec);
    }
    const GateMetrics m = evaluate_gate(spec, setting, model, gate, {flags.pop, flags.bell});
    csv.row(metric_row(spec, m, flags, ""));
    out << to_string(kind) << ": t_g=" << format_number(spec.gate_time())
        << " ns lambda=" << format_number(angular_to_mhz(spec.lambda_target)) << " MHz";
    if (flags.pop) out << " pop_error=" << format_number(m.population_error);
    if (flags.bell) out << " bell_infidelity=" << format_number(1.0 - m.bell_fidelity);
    out << " phi_ent=" << format_number(m.entangling_phase) << (m.phase_warning ? " (phase warning)" : "")
        << '\n';

    if (traj) {
      PropagationOptions popt = gate.propagation;
      popt.sample_stride = c.stride;
      const Schedule schedule = build_schedule(spec, setting);
      const Eigen::VectorXcd psi0 = [&] {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kCompositeDim));
        const auto idx = computational_indices();
        for (int k = 0; k < 4; ++k) v(idx[k]) = (*traj)(k);
        return v;
      }();
      PropagationResult r;
      if (model == Model::unitary) {
        r = propagate_schrodinger(schedule, psi0, popt);
      } else {
        const CollapseSet collapse = build_collapse_set(setting, build_basis(setting), gate.decay);
        r = propagate_lindblad(schedule, collapse, psi0 * psi0.adjoint(), popt);
      }
      const auto path = dir / ("trajectory_" + std::string(to_string(kind)) + "_" + c.trajectory + ".csv");
      write_trajectory(path, r.trajectory);
      out << "wrote " << path.string() << '\n';
    }
  }
  out << "wrote " << csv.path().string() << '\n';
  return kOk;
}

int cmd_sweep_time(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PhysicalSetting setting = resolve_setting(c);
  const auto kinds = resolve_pulses(c);
  const Model model = resolve_model(c);
  const auto taus = parse_tau_list(c.tau_t);
  const MetricFlags flags = resolve_metrics(c);
  const GateOptions gate = gate_options(c, 1);
  const auto dir = resolve_out_dir(c);
  OptimumCache cache(dir / "optimize_cache.json");

  struct Point {
    SequenceSpec spec;
    std::string key;
    std::optional<CachedOptimum> cached;
  };
  std::vector<Point> points;
  for (double tau : taus) {
    for (PulseKind k : kinds) {
      SequenceSpec spec = make_spec(c, tau, k);
      spec.lambda_target = mhz_to_angular(c.lambda_mhz);
      spec.amp_scales = {c.scale_control, c.scale_target, c.scale_control};
      Point p{spec, OptimumCache::key(setting.name, tau, k, effective_ratio(spec)), std::nullopt};
      if (c.optimize && c.use_cache) p.cached = cache.find(p.key);
      points.push_back(std::move(p));
    }
  }

  struct Outcome {
    SequenceSpec spec;
    std::optional<GateMetrics> metrics;
    std::optional<CachedOptimum> fresh;
    std::string error;
  };
  const auto results = parallel_map(points.size(), c.workers, [&](std::size_t i) {
    Outcome o{points[i].spec, std::nullopt, std::nullopt, {}};
    try {
      if (c.optimize) {
        if (points[i].cached) {
          apply(*points[i].cached, o.spec);
        } else {
          o.fresh = optimize_point(o.spec, setting, gate);
          apply(*o.fresh, o.spec);
        }
      }
      o.metrics = evaluate_gate(o.spec, setting, model, gate, {flags.pop, flags.bell});
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  CsvWriter csv(dir / "sweep_time.csv", kMetricHeader);
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& o = results[i];
    if (o.fresh) cache.store(points[i].key, *o.fresh);
    if (!o.error.empty()) {
      ++failures;
      err << "t_g=" << format_number(o.spec.gate_time()) << " " << to_string(o.spec.kinds[1]) << ": "
          << o.error << '\n';
    }
    csv.row(metric_row(o.spec, o.metrics, flags, o.error));
  }
  if (c.optimize) cache.save();
  out << "wrote " << csv.path().string() << " (" << results.size() << " rows, " << failures
      << " failed)\n";
  return kOk;
}

int cmd_sweep_blockade(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PhysicalSetting setting = resolve_setting(c);
  const auto kinds = resolve_pulses(c);
  const Model model = resolve_model(c);
  const double tau_t = single_tau(c);
  const GateOptions gate = gate_options(c, 1);
  const LeakModel leak = LeakModel::from_setting(setting);
  Grid grid;
  if (c.b0_range.empty()) {
    const auto [lo, hi] = default_bracket(leak);
    grid = {0.2, angular_to_ghz(hi), 41};
    if (grid.max <= grid.min) grid.min = angular_to_ghz(lo);
  } else {
    grid = parse_grid(c.b0_range);
    if (!(grid.min > 0.0)) throw ConfigError("blockade grid must be positive");
  }
  const auto dir = resolve_out_dir(c);

  struct Job {
    PulseKind kind;
    double b0_ghz;
  };
  std::vector<Job> jobs;
  for (double b : grid.values()) {
    for (PulseKind k : kinds) jobs.push_back({k, b});
  }
  struct Outcome {
    std::optional<double> pop;
    std::string error;
  };
  const auto results = parallel_map(jobs.size(), c.workers, [&](std::size_t i) {
    Outcome o;
    try {
      PhysicalSetting s = setting;
      s.b0 = ghz_to_angular(jobs[i].b0_ghz);
      SequenceSpec spec = make_spec(c, tau_t, jobs[i].kind);
      spec.lambda_target = mhz_to_angular(c.lambda_mhz);
      spec.amp_scales = {c.scale_control, c.scale_target, c.scale_control};
      o.pop = population_error(spec, s, model, gate);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });

  CsvWriter csv(dir / "sweep_blockade.csv", {"b0_GHz", "pulse_kind", "pop_error", "p_leak_rel", "error"});
  int failures = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Cell p_leak = std::string();
    try {
      p_leak = leak_probability(leak, ghz_to_angular(jobs[i].b0_ghz));
    } catch (const ConfigError&) {
      // on a resonance of the analytic model
    }
    const auto& o = results[i];
    if (!o.error.empty()) {
      ++failures;
      err << "b0=" << format_number(jobs[i].b0_ghz) << " GHz: " << o.error << '\n';
    }
    csv.row({jobs[i].b0_ghz, std::string(to_string(jobs[i].kind)),
             o.pop ? Cell{*o.pop} : Cell{std::string()}, p_leak, o.error});
  }
  out << "wrote " << csv.path().string() << " (" << jobs.size() << " rows, " << failures << " failed)\n";
  return kOk;
}

int cmd_optimal_blockade(const RunConfig& c, std::ostream& out) {
  const PhysicalSetting setting = resolve_setting(c);
  const LeakModel leak = LeakModel::from_setting(setting);
  auto bracket = default_bracket(leak);
  if (!c.bracket.empty()) {
    const auto p = split(c.bracket, ':');
    if (p.size() != 2) throw ConfigError("--bracket must be lo:hi in GHz");
    bracket = {ghz_to_angular(parse_double(p[0], "bracket")), ghz_to_angular(parse_double(p[1], "bracket"))};
  }
  if (c.scan_points < 2) throw ConfigError("--scan-points must be at least 2");
  const OptimalBlockade opt = optimal_blockade(leak, bracket);
  const auto dir = resolve_out_dir(c);
  CsvWriter csv(dir / "optimal_blockade_scan.csv", {"b0_GHz", "p_leak_rel"});
  for (const auto& s : scan_leak_probability(leak, bracket.first, bracket.second, c.scan_points)) {
    csv.row({angular_to_ghz(s.b0), s.p});
  }
  out << "setting " << setting.name << ": delta1=" << format_number(angular_to_ghz(leak.delta1))
      << " GHz delta2=" << format_number(angular_to_ghz(leak.delta2)) << " GHz\n"
      << "optimal B0 = " << format_number(angular_to_ghz(opt.b0)) << " GHz (P = " << format_number(opt.p_min)
      << ")\n"
      << "P <= 1.1 P_min on [" << format_number(angular_to_ghz(opt.flat.lo)) << ", "
      << format_number(angular_to_ghz(opt.flat.hi)) << "] GHz, width "
      << format_number(angular_to_ghz(opt.flat.width())) << " GHz\n"
      << "wrote " << csv.path().string() << '\n';
  return kOk;
}

int cmd_optimize(const RunConfig& c, std::ostream& out) {
  const PhysicalSetting setting = resolve_setting(c);
  const auto kinds = resolve_pulses(c);
  const double tau_t = single_tau(c);
  const GateOptions gate = gate_options(c, c.workers);
  const auto dir = resolve_out_dir(c);
  OptimumCache cache(dir / "optimize_cache.json");
  for (PulseKind kind : kinds) {
    SequenceSpec spec = make_spec(c, tau_t, kind);
    spec.lambda_target = mhz_to_angular(c.lambda_mhz);
    spec.amp_scales = {c.scale_control, c.scale_target, c.scale_control};
    OptimizeOptions opts;
    opts.gate = gate;
    const OptimizationResult r = optimize_gate(spec, setting, opts);
    const std::string name(to_string(kind));
    CsvWriter csv(dir / ("optimize_trace_" + name + ".csv"),
                  {"round", "coordinate", "lambda_MHz", "scale_target", "scale_control", "objective",
                   "evaluations"});
    for (const auto& s : r.trace) {
      csv.row({static_cast<long>(s.round), std::string(to_string(s.coordinate)), angular_to_mhz(s.lambda_target),
               s.scale_target, s.scale_control, s.objective, static_cast<long>(s.evaluations)});
    }
    cache.store(OptimumCache::key(setting.name, tau_t, kind, effective_ratio(spec)),
                {r.spec.lambda_target, r.spec.amp_scales[1], r.spec.amp_scales[0], r.objective, r.no_progress});
    out << name << ": t_g=" << format_number(spec.gate_time())
        << " ns lambda=" << format_number(angular_to_mhz(r.spec.lambda_target))
        << " MHz scale_target=" << format_number(r.spec.amp_scales[1])
        << " scale_control=" << format_number(r.spec.amp_scales[0])
        << " bell_infidelity=" << format_number(r.objective) << " (start " << format_number(r.initial_objective)
        << ", " << r.rounds << " rounds, " << r.evaluations << " evaluations"
        << (r.no_progress ? ", no progress" : "") << ")\n"
        << "wrote " << csv.path().string() << '\n';
  }
  cache.save();
  return kOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rydberg blockade gate design and simulation"};
  app.name("rydgate");
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;

  app.add_option("--setting", c.setting, "Built-in physical setting (S1, S2)")->capture_default_str();
  app.add_option("--setting-file", c.setting_file, "Setting file (key = value lines, see README)");
  app.add_option("--pulse", c.pulses, "Pulse kind(s): square, gaussian, drag (comma separated or repeated)")
      ->capture_default_str();
  app.add_option("--model", c.model, "Dynamics model: unitary or lindblad")->capture_default_str();
  app.add_option("--tau-t", c.tau_t, "Target pulse duration in ns: value, list a,b,c or range start:stop:step")
      ->capture_default_str();
  app.add_option("--tau-c-ratio", c.tau_c_ratio, "Control duration as a fraction of tau_t (1/2, 1/3, ...)")
      ->capture_default_str();
  app.add_option("--tau-c", c.tau_c, "Explicit control pulse duration in ns (overrides the ratio)");
  app.add_option("--out", c.out, "Output directory")->envname("RYDGATE_OUT_DIR");
  app.add_option("--tol", c.tol, "Integrator relative tolerance (absolute = 0.01 x relative)")
      ->capture_default_str();
  app.add_option("--workers", c.workers, "Worker threads (0 = one per core)")->capture_default_str();

  auto add_drive_options = [&](CLI::App* sub) {
    sub->add_option("--lambda-mhz", c.lambda_mhz, "Target pulse detuning Lambda/2pi in MHz");
    sub->add_option("--scale-target", c.scale_target, "Target pulse amplitude scale");
    sub->add_option("--scale-control", c.scale_control, "Control pulse amplitude scale");
  };
  auto add_decay_options = [&](CLI::App* sub) {
    sub->add_option("--decay-scale", c.decay_scale, "Multiply all decay rates (0.01 ~ 4 K environment)");
    sub->add_flag("--literal-branches", c.literal_branches,
                  "Use branch fractions as collapse amplitudes (sensitivity study)");
  };

  auto* design = app.add_subcommand("design", "Write pulse waveforms and spectra, print DRAG coefficients");
  design->add_option("--step", c.step, "Waveform sampling step in ns")->capture_default_str();
  design->add_option("--delta-range", c.delta_range, "Spectrum grid in GHz, min:max:points")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Simulate one gate and report its metrics");
  add_drive_options(simulate);
  add_decay_options(simulate);
  simulate->add_flag("--optimize", c.optimize, "Optimize lambda and amplitude scales first");
  simulate->add_flag("--no-cache{false}", c.use_cache, "Ignore cached optimizer results");
  simulate->add_option("--metrics", c.metrics, "Metrics: pop, bell (comma separated)")->capture_default_str();
  simulate->add_option("--trajectory", c.trajectory, "Dump level populations for input 00, 01, 10, 11 or bell");
  simulate->add_option("--stride", c.stride, "Trajectory sampling stride in ns")->capture_default_str();

  auto* sweep_time = app.add_subcommand("sweep-time", "Metrics as a function of gate time");
  add_drive_options(sweep_time);
  add_decay_options(sweep_time);
  sweep_time->add_flag("--optimize", c.optimize, "Optimize lambda and amplitude scales at each point");
  sweep_time->add_flag("--no-cache{false}", c.use_cache, "Ignore cached optimizer results");
  sweep_time->add_option("--metrics", c.metrics, "Metrics: pop, bell (comma separated)")->capture_default_str();

  auto* sweep_blockade = app.add_subcommand("sweep-blockade", "Population error as a function of B0");
  add_drive_options(sweep_blockade);
  add_decay_options(sweep_blockade);
  sweep_blockade->add_option("--b0-range", c.b0_range,
                             "Blockade grid in GHz, min:max:points (default 0.2 to the first leakage resonance)");

  auto* optimal = app.add_subcommand("optimal-blockade", "Analytic optimal blockade shift");
  optimal->add_option("--bracket", c.bracket, "Search interval in GHz, lo:hi");
  optimal->add_option("--scan-points", c.scan_points, "Points in the exported scan")->capture_default_str();

  auto* optimize = app.add_subcommand("optimize", "Optimize lambda and amplitude scales for one gate time");
  add_drive_options(optimize);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*design) return cmd_design(c, out);
    if (*simulate) return cmd_simulate(c, out);
    if (*sweep_time) return cmd_sweep_time(c, out, err);
    if (*sweep_blockade) return cmd_sweep_blockade(c, out, err);
    if (*optimal) return cmd_optimal_blockade(c, out);
    if (*optimize) return cmd_optimize(c, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigFailure;
  }
  return kConfigFailure;
}

}  // namespace rydgate::cli
