#include "cavcool/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cavcool/errors.hpp"

namespace cavcool::stability {
namespace {

using cd = std::complex<double>;

// Sorts by real part, then orders runs of (numerically) equal real parts by
// imaginary part so conjugate pairs come out in a stable order.
template <class Key>
void sort_spectrum(std::vector<int>& idx, Key key) {
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a).real() < key(b).real(); });
  double scale = 0.0;
  for (int i : idx) scale = std::max(scale, std::abs(key(i)));
  const double tol = 1e-9 * scale;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= idx.size(); ++i) {
    if (i == idx.size() || key(idx[i]).real() - key(idx[i - 1]).real() > tol) {
      std::sort(idx.begin() + static_cast<long>(start), idx.begin() + static_cast<long>(i),
                [&](int a, int b) { return key(a).imag() < key(b).imag(); });
      start = i;
    }
  }
}

}  // namespace

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Cooling: return "cooling";
    case Classification::Heating: return "heating";
    case Classification::Marginal: return "marginal";
  }
  return "unknown";
}

SpectrumReport spectrum(const SystemParams& params, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("spectrum: order must be 0, 1 or 2");
  const auto model = effective::weak_model(params);
  const effective::Matrix5 m = model.matrix_at_order(order);
  Eigen::EigenSolver<effective::Matrix5> solver(m, true);
  if (solver.info() != Eigen::Success) throw SingularSystem("eigen decomposition failed");

  std::vector<int> idx(5);
  std::iota(idx.begin(), idx.end(), 0);
  const auto values = solver.eigenvalues();
  sort_spectrum(idx, [&](int i) { return values(i); });

  SpectrumReport r;
  r.order = order;
  for (int i = 0; i < 5; ++i) {
    r.eigenvalues[i] = values(idx[i]);
    r.eigenvectors.col(i) = solver.eigenvectors().col(idx[i]);
  }
  const double marginal = 1e-12 * params.nu;
  bool any_marginal = false, all_negative = true;
  double slowest = -std::numeric_limits<double>::infinity();
  for (const auto& l : r.eigenvalues) {
    if (std::abs(l.real()) < marginal) any_marginal = true;
    if (!(l.real() < 0.0)) all_negative = false;
    slowest = std::max(slowest, l.real());
  }
  if (any_marginal) {
    r.classification = Classification::Marginal;
  } else if (all_negative) {
    r.classification = Classification::Cooling;
    r.damping_time = 1.0 / std::abs(slowest);
  } else {
    r.classification = Classification::Heating;
  }
  return r;
}

std::array<std::complex<double>, 5> closed_form_eigenvalues(const SystemParams& params) {
  const auto c = effective::weak_coefficients(params);
  const double a = c.alpha11_2, nu = params.nu;
  // sqrt of a possibly negative radicand stays meaningful as complex
  const cd r23 = std::sqrt(cd(4 * nu * nu - a * a, 0.0));
  const cd r45 = std::sqrt(cd(4 * nu * nu - c.alpha14_2 * c.alpha41_2, 0.0));
  const cd i(0.0, 1.0);
  const std::array<cd, 5> l{cd(a, 0.0), 0.5 * a - 0.5 * i * r23, 0.5 * a + 0.5 * i * r23, a - i * r45, a + i * r45};
  std::vector<int> idx(5);
  std::iota(idx.begin(), idx.end(), 0);
  sort_spectrum(idx, [&](int k) { return l[static_cast<std::size_t>(k)]; });
  std::array<cd, 5> out;
  for (std::size_t k = 0; k < 5; ++k) out[k] = l[static_cast<std::size_t>(idx[k])];
  return out;
}

effective::Vector5 eta0_solution(const effective::Vector5& init, double nu, double t) {
  const double c1 = std::cos(nu * t), s1 = std::sin(nu * t);
  const double c2 = std::cos(2 * nu * t), s2 = std::sin(2 * nu * t);
  effective::Vector5 v;
  v(0) = init(0);
  v(1) = c1 * init(1) - s1 * init(2);
  v(2) = s1 * init(1) + c1 * init(2);
  v(3) = c2 * init(3) - s2 * init(4);
  v(4) = s2 * init(3) + c2 * init(4);
  return v;
}

effective::Vector5 shift_to_tilde(const effective::WeakModel& model, const effective::Vector5& v) {
  // M^-1 beta = -(weak stationary state)
  return v - effective::weak_stationary(model);
}

TildeTrajectory tilde_trajectory(const effective::WeakModel& model, int order, const effective::Vector5& init,
                                 double t_end, std::size_t samples, const StepPolicy& policy) {
  const Eigen::MatrixXd a = model.matrix_at_order(order);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(5);
  const Eigen::VectorXd x0 = init;
  TildeTrajectory out;
  out.times = uniform_times(t_end, samples);
  const double fastest = std::max({model.params.kappa, 2 * model.params.nu, std::abs(model.params.delta_eff)});
  for (const auto& s : integrate_linear(a, b, x0, out.times, policy, fastest)) out.states.emplace_back(s);
  return out;
}

}  // namespace cavcool::stability
