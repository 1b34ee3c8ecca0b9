#pragma once

#include <span>
#include <vector>

#include "cavcool/linear_ode.hpp"
#include "cavcool/moments.hpp"
#include "cavcool/opalg.hpp"
#include "cavcool/params.hpp"

/// The 25-moment linear rate equations: assembly, integration, steady state.
namespace cavcool::rates {

struct Trajectory {
  std::vector<double> times;
  std::vector<MomentVector> states;
  std::vector<double> mean_phonon;
};

struct AssembledSystem {
  RateSystem system;
  std::vector<opalg::ResidualReport> residuals;
  std::vector<std::string> warnings;
};

/// Derives and numerically exports the rate system at the given eta order.
AssembledSystem assemble(const SystemParams& params, int eta_order = 2, const opalg::DeriveOptions& options = {});

Trajectory integrate(const RateSystem& system, const MomentVector& v0, std::span<const double> times,
                     const StepPolicy& policy = {});

Trajectory integrate(const RateSystem& system, const MomentVector& v0, double t_end, std::size_t samples,
                     const StepPolicy& policy = {});

/// Solves matrix v = -drive. Throws SingularSystem when the steady state is
/// not unique (always the case at eta = 0).
MomentVector stationary(const RateSystem& system);

}  // namespace cavcool::rates
