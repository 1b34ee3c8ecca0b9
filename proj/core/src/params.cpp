#include "cavcool/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavcool/errors.hpp"

namespace cavcool {

std::vector<std::string> SystemParams::validate() const {
  for (double v : {eta, nu, kappa, delta_eff, g_eff}) {
    if (!std::isfinite(v)) throw InvalidParams("system parameters must be finite");
  }
  if (kappa <= 0.0) throw InvalidParams("kappa must be > 0");
  if (eta < 0.0) throw InvalidParams("eta must be >= 0");
  if (nu <= 0.0) throw InvalidParams("nu must be > 0");

  std::vector<std::string> warnings;
  if (eta > 0.2) {
    std::ostringstream w;
    w << "eta = " << eta << " is outside the Lamb-Dicke regime (eta << 1)";
    warnings.push_back(w.str());
  }
  if (raw) {
    EffectiveParamsOptions opts;
    opts.nu = nu;
    opts.kappa = kappa;
    auto mapped = effective_params(*raw, opts);
    warnings.insert(warnings.end(), mapped.warnings.begin(), mapped.warnings.end());
  }
  return warnings;
}

double SystemParams::fastest_rate() const {
  return std::max({kappa, std::abs(nu), std::abs(delta_eff), std::abs(g_eff)});
}

EffectiveCoupling effective_params(const RawParams& raw, const EffectiveParamsOptions& options) {
  if (raw.Delta == 0.0) throw DivisionByZero("effective_params: Delta must be nonzero");
  EffectiveCoupling out;
  out.g_eff = -raw.g * raw.Omega / (2.0 * raw.Delta);
  out.delta_eff = raw.delta - raw.g * raw.g / raw.Delta;

  const double bound = std::abs(raw.Delta) / options.dominance_factor;
  auto check = [&](const char* name, double value) {
    if (std::abs(value) > bound) {
      std::ostringstream w;
      w << "|Delta| = " << std::abs(raw.Delta) << " does not dominate " << name << " = " << value << " by a factor "
        << options.dominance_factor << "; adiabatic elimination may be inaccurate";
      out.warnings.push_back(w.str());
    }
  };
  check("Omega", raw.Omega);
  check("delta", raw.delta);
  check("g", raw.g);
  if (options.nu) check("nu", *options.nu);
  if (options.kappa) check("kappa", *options.kappa);
  if (options.Gamma) check("Gamma", *options.Gamma);
  return out;
}

}  // namespace cavcool
