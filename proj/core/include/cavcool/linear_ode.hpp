#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cavcool {

enum class StepMode { Adaptive, Fixed };

struct StepPolicy {
  StepMode mode = StepMode::Adaptive;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Fixed-mode step; <= 0 selects 0.01 / fastest rate.
  double fixed_step = 0.0;
  /// Adaptive mode upper bound on the step; <= 0 means unbounded.
  double max_step = 0.0;
  /// Adaptive mode aborts with StepUnderflow below this step.
  double min_step = 1e-12;
  std::size_t max_steps = 200'000'000;
};

/// Sample times 0, t_end/(n-1), ..., t_end.
std::vector<double> uniform_times(double t_end, std::size_t samples);

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState& x, OdeState& dxdt, double t)>;
using OdeObserver = std::function<void(std::size_t sample, const OdeState& x)>;

/// Integrates d/dt x = f(x, t) from t = 0 and hands the state at each
/// requested time to `observe`. Same stepping rules as integrate_linear.
void integrate_samples(const OdeRhs& rhs, OdeState x, std::span<const double> times, const StepPolicy& policy,
                       double fastest_rate, const OdeObserver& observe);

/// Integrates d/dt x = A x + b, returning the state at each requested time.
/// `times` must be non-decreasing and start at or after 0 (the initial time).
/// Adaptive mode uses Dormand-Prince 5(4) with dense output; fixed mode uses
/// classical RK4 with equal sub-steps between samples.
std::vector<Eigen::VectorXd> integrate_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                              const Eigen::VectorXd& x0, std::span<const double> times,
                                              const StepPolicy& policy, double fastest_rate);

}  // namespace cavcool
