#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "cavcool/csv.hpp"
#include "cavcool/effective.hpp"
#include "cavcool/errors.hpp"
#include "cavcool/opalg.hpp"
#include "cavcool/oracle.hpp"
#include "cavcool/rates.hpp"
#include "cavcool/stability.hpp"

namespace cavcool::cli {
namespace {

using csv::format;

// Output sink: stdout for "-", a file otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  bool is_stdout() const { return !file_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

SystemParams checked_params(const RunConfig& cfg) {
  const SystemParams p = cfg.params();
  warn_all(cfg.param_warnings());
  return p;
}

int eta_order(const RunConfig& cfg) {
  const long o = cfg.integer("eta_order");
  if (o < 0 || o > 2) throw ConfigError("eta_order must be 0, 1 or 2");
  return static_cast<int>(o);
}

std::vector<double> sample_times(const RunConfig& cfg) {
  const double t_end = cfg.real("t_end");
  const long n = cfg.integer("samples");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (n < 2) throw ConfigError("samples must be at least 2");
  return uniform_times(t_end, static_cast<std::size_t>(n));
}

double initial_m0(const RunConfig& cfg) {
  const double m0 = cfg.real("m0");
  if (!(m0 >= 0.0)) throw ConfigError("m0 must be non-negative");
  return m0;
}

rates::AssembledSystem assemble(const RunConfig& cfg, const SystemParams& p) {
  auto sys = rates::assemble(p, eta_order(cfg));
  std::size_t dropped = 0;
  for (const auto& r : sys.residuals) dropped += r.dropped.terms().size();
  if (dropped > 0) {
    std::cerr << "note: " << dropped << " unnamed moment terms dropped at the working eta order"
              << " (see 'cavcool derive')\n";
  }
  return sys;
}

std::string regime_name(const SystemParams& p) {
  if (p.nu <= 0.1 * p.kappa) return "weak confinement (nu << kappa)";
  if (p.kappa < p.nu && p.kappa < p.delta_eff) return "strong confinement (kappa < nu, delta_eff)";
  return "intermediate confinement";
}

std::string coupling_name(const SystemParams& p) {
  return std::abs(p.g_eff) >= 0.3 * p.kappa ? "strongly coupled cavity" : "weakly coupled cavity";
}

oracle::OracleRun run_oracle(const RunConfig& cfg, const SystemParams& p, std::span<const double> times) {
  const auto space = cfg.space();
  const double m0 = initial_m0(cfg);
  oracle::Occupation occ;
  if (cfg.text("initial") == "fock") {
    if (m0 != std::floor(m0)) throw ConfigError("initial = fock needs an integer m0");
    occ = oracle::Occupation::fock(static_cast<int>(m0));
  } else {
    occ = oracle::Occupation::thermal(m0);
  }
  const auto rho0 = oracle::initial_state(space, occ);
  oracle::EvolveOptions opts;
  opts.policy = cfg.step_policy();
  opts.saturation_threshold = cfg.real("saturation");
  return oracle::lindblad_evolve(rho0, p, times, opts);
}

void print_identities(std::ostream& os, const RunConfig& cfg, const SystemParams& p) {
  oracle::IdentityOptions opts;
  opts.pad_phn = static_cast<int>(cfg.integer("identity_pad"));
  const auto rep = oracle::verify_identities(cfg.space(), p, opts);
  os << "operator identities on (" << rep.requested.n_cav << ", " << rep.requested.n_phn
     << "), working space (" << rep.working.n_cav << ", " << rep.working.n_phn << ")\n";
  for (const auto& c : rep.checks) {
    os << "  " << std::left << std::setw(48) << c.name << std::right << std::setw(10) << std::setprecision(3)
       << c.max_deviation << (c.whole_space ? "  (whole space)" : "") << '\n';
  }
}

// Decimal rendering of an eta-graded coefficient, e.g. "-0.5 - 0.05 eta^2".
std::string eta_str(const opalg::EtaCoefficient& c) {
  std::ostringstream s;
  s << std::setprecision(12);
  bool first = true;
  for (const auto& [power, value] : c.terms()) {
    const auto z = value.to_complex();
    std::ostringstream term;
    term << std::setprecision(12);
    double mag = 0.0;
    bool negative = false;
    if (z.imag() == 0.0) {
      mag = std::abs(z.real());
      negative = z.real() < 0;
      term << mag;
    } else if (z.real() == 0.0) {
      mag = std::abs(z.imag());
      negative = z.imag() < 0;
      term << mag << "i";
    } else {
      term << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i)";
    }
    s << (first ? (negative ? "-" : "") : (negative ? " - " : " + ")) << term.str();
    if (power == 1) s << " eta";
    if (power > 1) s << " eta^" << power;
    first = false;
  }
  return first ? "0" : s.str();
}

std::string polynomial_str(const opalg::OperatorPolynomial& p) {
  std::string out;
  for (const auto& [mono, coeff] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + eta_str(coeff) + ") " + mono.str();
  }
  return out;
}

std::string complex_str(std::complex<double> z) {
  std::ostringstream s;
  s << std::setprecision(10) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return s.str();
}

std::vector<double> axis_values(double lo, double hi, long points, bool log_scale, const std::string& name) {
  if (points < 2) throw ConfigError("sweep axis '" + name + "' needs at least 2 points");
  if (!(hi > lo)) throw ConfigError("sweep axis '" + name + "' needs max > min");
  if (log_scale && !(lo > 0.0)) throw ConfigError("log sweep axis '" + name + "' needs min > 0");
  std::vector<double> v(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    v[static_cast<std::size_t>(i)] = log_scale ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                               : lo + f * (hi - lo);
  }
  v.back() = hi;
  return v;
}

void set_param(SystemParams& p, const std::string& name, double value) {
  if (name == "nu") p.nu = value;
  else if (name == "delta_eff") p.delta_eff = value;
  else if (name == "g_eff") p.g_eff = value;
  else if (name == "eta") p.eta = value;
}

}  // namespace

void write_provenance(std::ostream& os, const std::string& command, const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> entries{{"cavcool", kVersion}, {"command", command}};
  for (auto& kv : cfg.resolved()) entries.push_back(std::move(kv));
  const SystemParams p = cfg.params();
  if (p.raw) {
    entries.emplace_back("resolved.g_eff", format(p.g_eff));
    entries.emplace_back("resolved.delta_eff", format(p.delta_eff));
  }
  csv::write_comment_block(os, entries);
}

int cmd_derive(const RunConfig& cfg) {
  const SystemParams p = checked_params(cfg);
  const int order = eta_order(cfg);
  const auto rows = opalg::derive_symbolic_rows(p, order);
  std::ostream& os = std::cout;
  os << "# moment equations, coefficients truncated beyond eta^" << order << " (eta kept symbolic)\n";
  std::size_t open_rows = 0;
  for (const auto& row : rows) {
    os << "d/dt " << moment_name(row.target) << " =";
    bool first = true;
    if (!row.drive.is_zero()) {
      os << " (" << eta_str(row.drive) << ")";
      first = false;
    }
    for (const auto& [m, c] : row.linear_part) {
      os << (first ? " " : " + ") << "(" << eta_str(c) << ") " << moment_name(m);
      first = false;
    }
    if (first) os << " 0";
    os << '\n';
    if (!row.closed()) {
      ++open_rows;
      os << "    dropped unnamed moments: " << polynomial_str(row.residual) << '\n';
    }
  }
  os << "# " << open_rows << " of " << rows.size() << " rows couple to unnamed moments at this order\n";

  const std::string out = cfg.text("output");
  if (out != "-") {
    const auto sys = opalg::derive_rate_system(p, order).system;
    Sink sink(out);
    write_provenance(sink.os(), "derive", cfg);
    std::string header = "row,drive";
    for (Moment m : all_moments()) header += "," + std::string(moment_name(m));
    sink.os() << header << '\n';
    for (Moment r : all_moments()) {
      sink.os() << moment_name(r) << ',' << format(sys.drive_of(r));
      for (Moment c : all_moments()) sink.os() << ',' << format(sys.coefficient(r, c));
      sink.os() << '\n';
    }
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  const std::string model = cfg.text("model");
  if (model == "oracle") return cmd_oracle(cfg);
  const SystemParams p = checked_params(cfg);
  const auto times = sample_times(cfg);
  const double m0 = initial_m0(cfg);
  Sink sink(cfg.text("output"));
  write_provenance(sink.os(), "simulate", cfg);

  if (model == "full25") {
    const auto sys = assemble(cfg, p);
    const auto traj = rates::integrate(sys.system, default_initial(m0, p), times, cfg.step_policy());
    sink.os() << csv::trajectory_header() << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      csv::write_trajectory_row(sink.os(), traj.times[i], traj.mean_phonon[i], traj.states[i]);
    }
  } else if (model == "weak5") {
    const auto wm = effective::weak_model(p);
    if (wm.regime_warning) std::cerr << "warning: " << *wm.regime_warning << '\n';
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(5);
    x0(0) = m0;
    const auto states = integrate_linear(wm.matrix, wm.beta, x0, times, cfg.step_policy(), p.fastest_rate());
    sink.os() << "t,m,n2,k7,k8,k9,k10\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto& s = states[i];
      csv::write_row(sink.os(), {times[i], s(0), s(0), s(1), s(2), s(3), s(4)});
    }
  } else {
    const auto sm = effective::strong_model(p);
    sink.os() << "t,m\n";
    for (double t : times) csv::write_row(sink.os(), {t, effective::m_of_t(sm, m0, t)});
  }
  return 0;
}

int cmd_steady(const RunConfig& cfg) {
  const SystemParams p = checked_params(cfg);
  const std::string model = cfg.text("model");
  Sink sink(cfg.text("output"));
  std::ostream& os = sink.os();
  write_provenance(os, "steady", cfg);
  if (model == "full25") {
    const auto sys = assemble(cfg, p);
    const auto v = rates::stationary(sys.system);
    os << "m = " << format(mean_phonon(v, p.eta)) << '\n';
    for (Moment m : all_moments()) os << moment_name(m) << " = " << format(v[m]) << '\n';
    const auto phys = v.check_physical();
    for (const auto& issue : phys.violations) std::cerr << "advisory: " << issue << '\n';
  } else if (model == "weak5") {
    const auto wm = effective::weak_model(p);
    if (wm.regime_warning) std::cerr << "warning: " << *wm.regime_warning << '\n';
    const auto v = effective::weak_stationary(wm);
    const char* names[] = {"n2", "k7", "k8", "k9", "k10"};
    os << "m = " << format(v(0)) << '\n';
    for (int i = 0; i < 5; ++i) os << names[i] << " = " << format(v(i)) << '\n';
  } else if (model == "strong1") {
    const auto sm = effective::strong_model(p);
    if (!sm.m_ss) throw NonPositiveRate("no stationary state for delta_eff <= 0 (heating)");
    os << "m = " << format(*sm.m_ss) << '\n'
       << "gamma_c = " << format(sm.gamma_c) << '\n'
       << "c = " << format(sm.c_drive) << '\n';
  } else {
    throw ConfigError("steady supports model = full25, weak5 or strong1");
  }
  return 0;
}

int cmd_analyze(const RunConfig& cfg) {
  const SystemParams p = checked_params(cfg);
  const auto sm = effective::strong_model(p);
  std::ostream& os = std::cout;
  os << std::setprecision(10);
  os << "regime           " << regime_name(p) << ", " << coupling_name(p) << '\n';
  os << "A_plus           " << sm.A_plus << '\n';
  os << "A_minus          " << sm.A_minus << '\n';
  os << "gamma_c          " << sm.gamma_c << '\n';
  os << "c                " << sm.c_drive << '\n';
  os << "gamma_c/(2g^2)   " << (p.g_eff != 0.0 ? sm.gamma_c / (2 * p.g_eff * p.g_eff / p.kappa) : 0.0) << '\n';
  os << "process          " << (sm.gamma_c > 0 ? "cooling" : sm.gamma_c < 0 ? "heating" : "none") << '\n';
  if (sm.m_ss) {
    os << "m_ss             " << *sm.m_ss << '\n';
    os << "cooling time     " << 1.0 / sm.gamma_c << '\n';
  } else {
    os << "m_ss             undefined (delta_eff <= 0)\n";
  }
  const auto weak = effective::optimal_detuning(p, effective::Regime::Weak);
  const auto strong = effective::optimal_detuning(p, effective::Regime::Strong);
  os << "delta_opt weak   " << weak.delta_closed_form << "  (m_ss limit " << weak.m_ss_closed_form << ")\n";
  os << "delta_opt strong " << strong.delta_closed_form << "  (m_ss limit " << strong.m_ss_closed_form << ")\n";
  os << "delta_opt exact  " << weak.delta_exact << "  (m_ss " << weak.m_ss_exact << ")\n";
  os << "delta_opt search " << weak.delta_numeric << "  (m_ss " << weak.m_ss_numeric << ")\n";
  return 0;
}

int cmd_stability(const RunConfig& cfg) {
  const SystemParams p = checked_params(cfg);
  std::ostream& os = std::cout;
  for (int order = 0; order <= 2; ++order) {
    const auto rep = stability::spectrum(p, order);
    os << "order " << order << ": " << stability::classification_name(rep.classification);
    if (rep.damping_time) os << ", damping time " << std::setprecision(10) << *rep.damping_time;
    os << '\n';
    for (const auto& l : rep.eigenvalues) os << "  " << complex_str(l) << '\n';
  }
  os << "closed form (order 2):\n";
  for (const auto& l : stability::closed_form_eigenvalues(p)) os << "  " << complex_str(l) << '\n';

  const std::string out = cfg.text("output");
  if (out != "-") {
    const long order = cfg.integer("stability.order");
    if (order < 0 || order > 2) throw ConfigError("stability.order must be 0, 1 or 2");
    const auto wm = effective::weak_model(p);
    effective::Vector5 v0 = effective::Vector5::Zero();
    v0(0) = initial_m0(cfg);
    // Shifted variables need an invertible M; at lower orders use v itself.
    const effective::Vector5 init = order == 2 ? stability::shift_to_tilde(wm, v0) : v0;
    const auto times = sample_times(cfg);
    const auto tr = stability::tilde_trajectory(wm, static_cast<int>(order), init, times.back(), times.size(),
                                                cfg.step_policy());
    Sink sink(out);
    write_provenance(sink.os(), "stability", cfg);
    sink.os() << "t,n2t,k7t,k8t,k9t,k10t\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto& s = tr.states[i];
      csv::write_row(sink.os(), {tr.times[i], s(0), s(1), s(2), s(3), s(4)});
    }
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const SystemParams base = checked_params(cfg);
  const std::string xname = cfg.text("sweep.x"), yname = cfg.text("sweep.y");
  const bool two_d = yname != "none";
  if (two_d && xname == yname) throw ConfigError("sweep.x and sweep.y must differ");
  const auto xs = axis_values(cfg.real("sweep.x_min"), cfg.real("sweep.x_max"), cfg.integer("sweep.x_points"),
                              cfg.text("sweep.x_scale") == "log", xname);
  const auto ys = two_d ? axis_values(cfg.real("sweep.y_min"), cfg.real("sweep.y_max"), cfg.integer("sweep.y_points"),
                                      cfg.text("sweep.y_scale") == "log", yname)
                        : std::vector<double>{0.0};
  const bool full25 = cfg.flag("sweep.full25");
  const int order = eta_order(cfg);

  struct Point {
    double x, y, m_ss, gamma, gamma_norm, m_full;
    std::string error;
  };
  std::vector<Point> points(xs.size() * ys.size());
  auto compute = [&](std::size_t i) {
    Point& pt = points[i];
    pt.x = xs[i / ys.size()];
    pt.y = ys[i % ys.size()];
    SystemParams p = base;
    set_param(p, xname, pt.x);
    if (two_d) set_param(p, yname, pt.y);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto sm = effective::strong_model(p);
    pt.m_ss = sm.m_ss.value_or(nan);
    pt.gamma = sm.gamma_c;
    pt.gamma_norm = p.g_eff != 0.0 ? sm.gamma_c / (2 * p.g_eff * p.g_eff / p.kappa) : nan;
    pt.m_full = nan;
    if (full25) {
      try {
        const auto sys = rates::assemble(p, order);
        pt.m_full = mean_phonon(rates::stationary(sys.system), p.eta);
      } catch (const Error& e) {
        pt.error = e.what();
      }
    }
  };

  long threads = cfg.integer("threads");
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<long>(threads, static_cast<long>(points.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (long t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) compute(i);
    });
  }
  for (auto& th : pool) th.join();

  Sink sink(cfg.text("output"));
  write_provenance(sink.os(), "sweep", cfg);
  std::string header = xname;
  if (two_d) header += "," + yname;
  header += ",m_ss,gamma_c,gamma_c_norm";
  if (full25) header += ",m_full25";
  sink.os() << header << '\n';
  const Point* best = nullptr;
  for (const auto& pt : points) {
    std::vector<double> row{pt.x};
    if (two_d) row.push_back(pt.y);
    row.insert(row.end(), {pt.m_ss, pt.gamma, pt.gamma_norm});
    if (full25) row.push_back(pt.m_full);
    csv::write_row(sink.os(), row);
    if (!pt.error.empty()) std::cerr << "warning: full25 failed at " << pt.x << ", " << pt.y << ": " << pt.error << '\n';
    if (std::isfinite(pt.m_ss) && (!best || pt.m_ss < best->m_ss)) best = &pt;
  }
  if (best) {
    std::cerr << "grid minimum m_ss = " << best->m_ss << " at " << xname << " = " << best->x;
    if (two_d) std::cerr << ", " << yname << " = " << best->y;
    std::cerr << '\n';
  }
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const SystemParams p = checked_params(cfg);
  if (cfg.flag("oracle.identities")) print_identities(std::cerr, cfg, p);
  const auto times = sample_times(cfg);
  const auto run = run_oracle(cfg, p, times);
  Sink sink(cfg.text("output"));
  write_provenance(sink.os(), "oracle", cfg);
  sink.os() << csv::trajectory_header({"trace_error", "cavity_edge_population", "phonon_edge_population",
                                       "max_moment_imag"})
            << '\n';
  for (const auto& s : run.samples) {
    csv::write_trajectory_row(sink.os(), s.t, s.mean_phonon, s.moments,
                              {s.trace_error, s.cav_edge_population, s.phn_edge_population, s.max_moment_imag});
  }
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  const SystemParams p = checked_params(cfg);
  const auto times = sample_times(cfg);
  const double m0 = initial_m0(cfg);
  const auto sys = assemble(cfg, p);
  const auto traj = rates::integrate(sys.system, default_initial(m0, p), times, cfg.step_policy());
  const auto sm = effective::strong_model(p);
  const bool with_oracle = cfg.flag("compare.oracle");
  std::optional<oracle::OracleRun> orun;
  if (with_oracle) orun = run_oracle(cfg, p, times);

  Sink sink(cfg.text("output"));
  write_provenance(sink.os(), "compare", cfg);
  sink.os() << "t,m_full25,m_strong1" << (with_oracle ? ",m_oracle" : "") << ",rel_dev_strong1"
            << (with_oracle ? ",abs_dev_oracle" : "") << '\n';
  double max_rel = 0.0, max_oracle = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double full = traj.mean_phonon[i];
    const double analytic = sm.m_ss ? effective::m_of_t(sm, m0, times[i]) : std::numeric_limits<double>::quiet_NaN();
    const double rel = analytic / full - 1.0;
    std::vector<double> row{times[i], full, analytic};
    if (with_oracle) row.push_back(orun->samples[i].mean_phonon);
    row.push_back(rel);
    if (with_oracle) {
      row.push_back(orun->samples[i].mean_phonon - full);
      max_oracle = std::max(max_oracle, std::abs(orun->samples[i].mean_phonon - full));
    }
    if (times[i] > 5.0 / p.kappa && std::isfinite(rel)) max_rel = std::max(max_rel, std::abs(rel));
    csv::write_row(sink.os(), row);
  }

  std::ostream& rep = std::cerr;
  rep << std::setprecision(6);
  rep << "regime: " << regime_name(p) << ", " << coupling_name(p) << '\n';
  rep << "final m: full25 " << traj.mean_phonon.back();
  if (sm.m_ss) {
    const double a = effective::m_of_t(sm, m0, times.back());
    rep << ", strong1 " << a << ", relative deviation " << a / traj.mean_phonon.back() - 1.0;
  }
  rep << '\n';
  rep << "max relative deviation strong1 vs full25 after t > 5/kappa: " << max_rel << '\n';
  if (with_oracle) rep << "max absolute deviation oracle vs full25: " << max_oracle << '\n';
  if (sm.m_ss) {
    try {
      const double m_full = mean_phonon(rates::stationary(sys.system), p.eta);
      const double ratio = m_full / *sm.m_ss;
      rep << "steady state: full25 " << m_full << ", analytic " << *sm.m_ss << ", ratio " << ratio << '\n';
      if (std::abs(ratio - 1.0) > 0.1) {
        rep << "flag: analytic steady state " << (ratio > 1.0 ? "underestimates" : "overestimates")
            << " the 25-moment result by a factor " << (ratio > 1.0 ? ratio : 1.0 / ratio) << '\n';
      }
    } catch (const SingularSystem& e) {
      rep << "steady state: " << e.what() << '\n';
    }
  }
  if (std::abs(p.g_eff) >= 0.3 * p.kappa) {
    rep << "flag: g_eff/kappa = " << p.g_eff / p.kappa
        << "; the reduced models hold only for a weakly coupled cavity\n";
  }
  return 0;
}

int cmd_keys(std::ostream& os) {
  for (const auto& k : key_table()) {
    os << std::left << std::setw(22) << k.name << std::setw(10) << (k.fallback.empty() ? "(unset)" : k.fallback);
    if (!k.help.empty()) os << ' ' << k.help;
    if (!k.choices.empty()) {
      os << " [";
      for (std::size_t i = 0; i < k.choices.size(); ++i) os << (i ? "|" : "") << k.choices[i];
      os << ']';
    }
    os << '\n';
  }
  return 0;
}

}  // namespace cavcool::cli
