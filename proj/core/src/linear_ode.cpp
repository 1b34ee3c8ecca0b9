#include "cavcool/linear_ode.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "cavcool/errors.hpp"

namespace cavcool {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

struct AffineRhs {
  const Eigen::MatrixXd* a;
  const Eigen::VectorXd* b;

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
    Eigen::Map<Eigen::VectorXd> dv(dxdt.data(), n);
    dv.noalias() = (*a) * xv;
    dv += *b;
  }
};

Eigen::VectorXd to_eigen(const State& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

}  // namespace

std::vector<double> uniform_times(double t_end, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("uniform_times: need at least 2 samples");
  std::vector<double> t(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  t.back() = t_end;
  return t;
}

void integrate_samples(const OdeRhs& rhs, OdeState x, std::span<const double> times, const StepPolicy& policy,
                       double fastest_rate, const OdeObserver& observe) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("integrate: sample times must be non-negative and ordered");
    }
  }
  const double rate = fastest_rate > 0.0 ? fastest_rate : 1.0;

  if (policy.mode == StepMode::Fixed) {
    const double h = policy.fixed_step > 0.0 ? policy.fixed_step : 0.01 / rate;
    odeint::runge_kutta4<State> stepper;
    double t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double span = times[i] - t;
      if (span > 0.0) {
        const auto n = static_cast<std::size_t>(std::ceil(span / h - 1e-12));
        const double dt = span / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) stepper.do_step(rhs, x, t + dt * static_cast<double>(k), dt);
        t = times[i];
      }
      for (double v : x) {
        if (!std::isfinite(v)) throw StepUnderflow("integrate: non-finite state");
      }
      observe(i, x);
    }
    return;
  }

  using Dopri = odeint::runge_kutta_dopri5<State>;
  auto stepper = policy.max_step > 0.0
                     ? odeint::make_dense_output(policy.abs_tol, policy.rel_tol, policy.max_step, Dopri{})
                     : odeint::make_dense_output(policy.abs_tol, policy.rel_tol, Dopri{});
  const double dt0 = std::min(0.01 / rate, policy.max_step > 0.0 ? policy.max_step : 0.01 / rate);
  stepper.initialize(x, 0.0, dt0);
  std::size_t steps = 0;
  State sample(x.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double target = times[i];
    while (stepper.current_time() < target) {
      stepper.do_step(rhs);
      if (++steps > policy.max_steps) throw StepUnderflow("integrate: step budget exhausted");
      if (stepper.current_time_step() < policy.min_step) {
        throw StepUnderflow("integrate: adaptive step fell below minimum");
      }
    }
    if (target == 0.0 && stepper.current_time() == 0.0) {
      sample = x;
    } else {
      stepper.calc_state(target, sample);
    }
    for (double v : sample) {
      if (!std::isfinite(v)) throw StepUnderflow("integrate: non-finite state");
    }
    observe(i, sample);
  }
}

std::vector<Eigen::VectorXd> integrate_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                              const Eigen::VectorXd& x0, std::span<const double> times,
                                              const StepPolicy& policy, double fastest_rate) {
  if (a.rows() != a.cols() || a.rows() != b.size() || b.size() != x0.size()) {
    throw std::invalid_argument("integrate_linear: dimension mismatch");
  }
  const AffineRhs affine{&a, &b};
  std::vector<Eigen::VectorXd> out(times.size());
  integrate_samples(affine, State(x0.data(), x0.data() + x0.size()), times, policy, fastest_rate,
                    [&](std::size_t i, const State& x) { out[i] = to_eigen(x); });
  return out;
}

}  // namespace cavcool
