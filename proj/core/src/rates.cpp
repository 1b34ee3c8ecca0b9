#include "cavcool/rates.hpp"

#include <sstream>

#include "cavcool/errors.hpp"

namespace cavcool::rates {

AssembledSystem assemble(const SystemParams& params, int eta_order, const opalg::DeriveOptions& options) {
  AssembledSystem out;
  out.warnings = params.validate();
  auto derived = opalg::derive_rate_system(params, eta_order, options);
  out.system = std::move(derived.system);
  out.residuals = std::move(derived.residuals);
  return out;
}

Trajectory integrate(const RateSystem& system, const MomentVector& v0, std::span<const double> times,
                     const StepPolicy& policy) {
  if (times.empty() || times.back() <= 0.0) throw std::invalid_argument("integrate: t_end must be > 0");
  if (!v0.all_finite()) throw InvalidParams("integrate: initial moments must be finite");
  const Eigen::MatrixXd a = system.matrix;
  const Eigen::VectorXd b = system.drive;
  const Eigen::VectorXd x0 = v0.values;
  const auto states = integrate_linear(a, b, x0, times, policy, system.params.fastest_rate());

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(states.size());
  traj.mean_phonon.reserve(states.size());
  for (const auto& s : states) {
    MomentVector v;
    v.values = s;
    traj.mean_phonon.push_back(mean_phonon(v, system.params.eta));
    traj.states.push_back(v);
  }
  return traj;
}

Trajectory integrate(const RateSystem& system, const MomentVector& v0, double t_end, std::size_t samples,
                     const StepPolicy& policy) {
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be > 0");
  const auto times = uniform_times(t_end, samples);
  return integrate(system, v0, times, policy);
}

MomentVector stationary(const RateSystem& system) {
  Eigen::FullPivLU<Eigen::Matrix<double, kMomentCount, kMomentCount>> lu(system.matrix);
  lu.setThreshold(1e-13);
  if (lu.rank() < static_cast<Eigen::Index>(kMomentCount)) {
    std::ostringstream msg;
    msg << "rate matrix has rank " << lu.rank() << " < " << kMomentCount
        << "; stationary state is not unique";
    if (system.params.eta == 0.0) msg << " (eta = 0: n2 is conserved, no cooling)";
    throw SingularSystem(msg.str());
  }
  MomentVector v;
  v.values = lu.solve(-system.drive);
  const double residual = (system.matrix * v.values + system.drive).norm();
  const double scale = system.matrix.norm() * v.values.norm() + system.drive.norm();
  if (!v.all_finite() || residual > 1e-10 * scale) {
    throw SingularSystem("stationary solve is ill-conditioned (residual check failed)");
  }
  return v;
}

}  // namespace cavcool::rates
