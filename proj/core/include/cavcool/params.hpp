#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cavcool {

/// Pre-elimination laser/cavity parameters, absolute rate units.
struct RawParams {
  double Omega = 0.0;  // laser Rabi frequency
  double g = 0.0;      // atom-cavity coupling
  double Delta = 0.0;  // cavity detuning from the atomic transition
  double delta = 0.0;  // laser-cavity detuning
};

/// Effective cavity-phonon model parameters. Rates are in units of kappa.
struct SystemParams {
  double eta = 0.0;        // Lamb-Dicke parameter
  double nu = 0.0;         // phonon frequency
  double kappa = 1.0;      // cavity decay rate (unit of rate)
  double delta_eff = 0.0;  // effective detuning
  double g_eff = 0.0;      // effective coupling
  std::optional<RawParams> raw;

  /// Throws InvalidParams for hard violations (kappa <= 0, eta < 0, nu <= 0,
  /// non-finite values); returns soft regime warnings.
  std::vector<std::string> validate() const;

  /// Appropriate time scale for resolving the fastest dynamics.
  double fastest_rate() const;
};

struct EffectiveParamsOptions {
  double dominance_factor = 10.0;
  // Also checked against |Delta| when present.
  std::optional<double> nu;
  std::optional<double> kappa;
  std::optional<double> Gamma;
};

struct EffectiveCoupling {
  double g_eff = 0.0;
  double delta_eff = 0.0;
  std::vector<std::string> warnings;
};

/// Maps (Omega, g, Delta, delta) onto g_eff = -g Omega / (2 Delta) and
/// delta_eff = delta - g^2 / Delta. Throws DivisionByZero when Delta == 0.
EffectiveCoupling effective_params(const RawParams& raw, const EffectiveParamsOptions& options = {});

}  // namespace cavcool
