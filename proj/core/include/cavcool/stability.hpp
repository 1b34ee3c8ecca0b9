#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "cavcool/effective.hpp"
#include "cavcool/linear_ode.hpp"

/// Eigenstructure of the weak-confinement matrix and the shifted dynamics.
namespace cavcool::stability {

enum class Classification { Cooling, Heating, Marginal };

const char* classification_name(Classification c);

struct SpectrumReport {
  std::array<std::complex<double>, 5> eigenvalues{};
  Eigen::Matrix<std::complex<double>, 5, 5> eigenvectors;
  int order = 2;
  Classification classification = Classification::Marginal;
  /// 1 / |Re lambda| of the slowest mode, only for Cooling.
  std::optional<double> damping_time;
};

/// Numeric spectrum of the weak model truncated at `order`, sorted by (Re, Im).
SpectrumReport spectrum(const SystemParams& params, int order);

/// Analytic eigenvalues of the complete weak-model matrix, same ordering.
std::array<std::complex<double>, 5> closed_form_eigenvalues(const SystemParams& params);

/// Exact eta = 0 evolution: n2 frozen, (k7, k8) rotate by nu t, (k9, k10) by 2 nu t.
effective::Vector5 eta0_solution(const effective::Vector5& init, double nu, double t);

/// v + M^-1 beta. Throws SingularSystem when M is singular.
effective::Vector5 shift_to_tilde(const effective::WeakModel& model, const effective::Vector5& v);

struct TildeTrajectory {
  std::vector<double> times;
  std::vector<effective::Vector5> states;
};

/// Integrates d/dt v = M_order v for the shifted variables.
TildeTrajectory tilde_trajectory(const effective::WeakModel& model, int order, const effective::Vector5& init,
                                 double t_end, std::size_t samples, const StepPolicy& policy = {});

}  // namespace cavcool::stability
