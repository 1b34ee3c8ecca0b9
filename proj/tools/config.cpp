#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cavcool::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const KeySpec* find_key(const std::string& name) {
  for (const auto& k : key_table())
    if (k.name == name) return &k;
  return nullptr;
}

std::optional<double> parse_real(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long> parse_integer(const std::string& s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> parse_flag(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

const char* type_name(KeyType t) {
  switch (t) {
    case KeyType::Real: return "a number";
    case KeyType::Integer: return "an integer";
    case KeyType::Flag: return "true or false";
    case KeyType::Text: return "text";
  }
  return "";
}

}  // namespace

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> keys = {
      {"eta", KeyType::Real, "0.1", "Lamb-Dicke parameter", {}},
      {"nu", KeyType::Real, "0.1", "phonon frequency (units of kappa)", {}},
      {"kappa", KeyType::Real, "1", "cavity decay rate; 1 fixes the unit of rate", {}},
      {"delta_eff", KeyType::Real, "0.5", "effective detuning (units of kappa)", {}},
      {"g_eff", KeyType::Real, "0.1", "effective coupling (units of kappa)", {}},
      {"raw.Omega", KeyType::Real, "", "laser Rabi frequency; with raw.g, raw.Delta, raw.delta replaces g_eff, delta_eff", {}},
      {"raw.g", KeyType::Real, "", "atom-cavity coupling", {}},
      {"raw.Delta", KeyType::Real, "", "cavity detuning from the atomic transition", {}},
      {"raw.delta", KeyType::Real, "", "laser-cavity detuning", {}},
      {"raw.dominance_factor", KeyType::Real, "10", "|Delta| must exceed every other raw rate by this factor", {}},
      {"model", KeyType::Text, "full25", "simulate/steady model", {"full25", "weak5", "strong1", "oracle"}},
      {"eta_order", KeyType::Integer, "2", "eta truncation of the rate equations (0, 1 or 2)", {}},
      {"t_end", KeyType::Real, "100", "final time (units of 1/kappa)", {}},
      {"samples", KeyType::Integer, "101", "number of output samples including t = 0", {}},
      {"m0", KeyType::Real, "100", "initial mean phonon number (cavity in vacuum)", {}},
      {"step", KeyType::Text, "adaptive", "integrator step control", {"adaptive", "fixed"}},
      {"rel_tol", KeyType::Real, "1e-9", "adaptive relative tolerance", {}},
      {"abs_tol", KeyType::Real, "1e-12", "adaptive absolute tolerance", {}},
      {"fixed_step", KeyType::Real, "0", "fixed step size; 0 picks 0.01 / fastest rate", {}},
      {"max_step", KeyType::Real, "0", "adaptive step ceiling; 0 means none", {}},
      {"n_cav", KeyType::Integer, "6", "oracle photon cutoff", {}},
      {"n_phn", KeyType::Integer, "24", "oracle phonon cutoff", {}},
      {"max_dim", KeyType::Integer, "4096", "oracle Hilbert space dimension bound", {}},
      {"initial", KeyType::Text, "fock", "oracle initial phonon state", {"fock", "thermal"}},
      {"saturation", KeyType::Real, "1e-6", "oracle edge population that invalidates a run", {}},
      {"oracle.identities", KeyType::Flag, "false", "also print the operator identity report", {}},
      {"identity_pad", KeyType::Integer, "30", "phonon padding used by the identity checks", {}},
      {"stability.order", KeyType::Integer, "2", "eta order of the tilde trajectory", {}},
      {"sweep.x", KeyType::Text, "nu", "first swept parameter", {"nu", "delta_eff", "g_eff", "eta"}},
      {"sweep.x_min", KeyType::Real, "0.01", "", {}},
      {"sweep.x_max", KeyType::Real, "100", "", {}},
      {"sweep.x_points", KeyType::Integer, "41", "", {}},
      {"sweep.x_scale", KeyType::Text, "log", "", {"log", "linear"}},
      {"sweep.y", KeyType::Text, "delta_eff", "second swept parameter or none", {"nu", "delta_eff", "g_eff", "eta", "none"}},
      {"sweep.y_min", KeyType::Real, "0.01", "", {}},
      {"sweep.y_max", KeyType::Real, "100", "", {}},
      {"sweep.y_points", KeyType::Integer, "41", "", {}},
      {"sweep.y_scale", KeyType::Text, "log", "", {"log", "linear"}},
      {"sweep.full25", KeyType::Flag, "false", "also solve the 25-moment steady state at each point", {}},
      {"threads", KeyType::Integer, "0", "sweep worker threads; 0 uses the hardware count", {}},
      {"compare.oracle", KeyType::Flag, "false", "include the master-equation oracle in compare", {}},
      {"output", KeyType::Text, "-", "output file; - writes to stdout", {}},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& k : key_table()) {
    if (!k.fallback.empty()) {
      values_[k.name] = k.fallback;
      origin_[k.name] = "default";
    }
  }
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError(origin + ": unknown key '" + key + "' (run 'cavcool keys' for the list)");
  bool ok = true;
  switch (spec->type) {
    case KeyType::Real: ok = parse_real(value).has_value(); break;
    case KeyType::Integer: ok = parse_integer(value).has_value(); break;
    case KeyType::Flag: ok = parse_flag(value).has_value(); break;
    case KeyType::Text:
      ok = spec->choices.empty() || std::find(spec->choices.begin(), spec->choices.end(), value) != spec->choices.end();
      break;
  }
  if (!ok) {
    std::string expected = type_name(spec->type);
    if (!spec->choices.empty()) {
      expected = "one of";
      for (const auto& c : spec->choices) expected += " " + c;
    }
    throw ConfigError(origin + ": key '" + key + "' expects " + expected + ", got '" + value + "'");
  }
  values_[key] = value;
  origin_[key] = origin;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = path + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    set(trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)), where);
  }
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set '" + assignment + "': expected key=value");
  set(trim(std::string_view(assignment).substr(0, eq)), trim(std::string_view(assignment).substr(eq + 1)),
      "--set " + trim(std::string_view(assignment).substr(0, eq)));
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

double RunConfig::real(const std::string& key) const {
  if (!has(key)) throw ConfigError("key '" + key + "' is not set");
  return *parse_real(values_.at(key));
}

long RunConfig::integer(const std::string& key) const {
  if (!has(key)) throw ConfigError("key '" + key + "' is not set");
  return *parse_integer(values_.at(key));
}

const std::string& RunConfig::text(const std::string& key) const {
  if (!has(key)) throw ConfigError("key '" + key + "' is not set");
  return values_.at(key);
}

bool RunConfig::flag(const std::string& key) const {
  if (!has(key)) throw ConfigError("key '" + key + "' is not set");
  return *parse_flag(values_.at(key));
}

SystemParams RunConfig::params() const {
  SystemParams p;
  p.eta = real("eta");
  p.nu = real("nu");
  p.kappa = real("kappa");
  p.delta_eff = real("delta_eff");
  p.g_eff = real("g_eff");
  const char* raw_keys[] = {"raw.Omega", "raw.g", "raw.Delta", "raw.delta"};
  const auto given = std::count_if(std::begin(raw_keys), std::end(raw_keys), [&](const char* k) { return has(k); });
  if (given > 0) {
    if (given < 4) throw ConfigError("raw parameters need all of raw.Omega, raw.g, raw.Delta, raw.delta");
    for (const char* k : {"g_eff", "delta_eff"}) {
      if (origin_.at(k) != "default") {
        throw ConfigError(origin_.at(k) + ": '" + k + "' conflicts with raw parameters");
      }
    }
    RawParams raw{real("raw.Omega"), real("raw.g"), real("raw.Delta"), real("raw.delta")};
    EffectiveParamsOptions opts;
    opts.dominance_factor = real("raw.dominance_factor");
    opts.nu = p.nu;
    opts.kappa = p.kappa;
    const auto eff = effective_params(raw, opts);
    p.g_eff = eff.g_eff;
    p.delta_eff = eff.delta_eff;
    p.raw = raw;
  }
  return p;
}

std::vector<std::string> RunConfig::param_warnings() const {
  std::vector<std::string> w;
  const SystemParams p = params();
  if (p.raw) {
    RawParams raw = *p.raw;
    EffectiveParamsOptions opts;
    opts.dominance_factor = real("raw.dominance_factor");
    opts.nu = p.nu;
    opts.kappa = p.kappa;
    w = effective_params(raw, opts).warnings;
  }
  // Raw-parameter warnings above honour the configured dominance factor.
  SystemParams plain = p;
  plain.raw.reset();
  for (auto& s : plain.validate()) w.push_back(std::move(s));
  return w;
}

StepPolicy RunConfig::step_policy() const {
  StepPolicy s;
  s.mode = text("step") == "fixed" ? StepMode::Fixed : StepMode::Adaptive;
  s.rel_tol = real("rel_tol");
  s.abs_tol = real("abs_tol");
  s.fixed_step = real("fixed_step");
  s.max_step = real("max_step");
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0)) throw ConfigError("rel_tol and abs_tol must be positive");
  return s;
}

oracle::TruncatedSpace RunConfig::space() const {
  oracle::TruncatedSpace s;
  s.n_cav = static_cast<int>(integer("n_cav"));
  s.n_phn = static_cast<int>(integer("n_phn"));
  const long max_dim = integer("max_dim");
  if (max_dim <= 0) throw ConfigError("max_dim must be positive");
  s.max_dim = static_cast<std::size_t>(max_dim);
  return s;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : key_table())
    if (has(k.name)) out.emplace_back(k.name, values_.at(k.name));
  return out;
}

}  // namespace cavcool::cli
