#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cavcool/params.hpp"

/// Closed-form reduced cooling models obtained by adiabatic elimination.
namespace cavcool::effective {

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

/// Five effective cooling equations over (n2, k7, k8, k9, k10):
/// d/dt v = matrix v + beta.
struct WeakModel {
  Matrix5 matrix = Matrix5::Zero();
  Vector5 beta = Vector5::Zero();
  SystemParams params;
  std::optional<std::string> regime_warning;

  /// Matrix restricted to entries scaling as eta^k for k <= order.
  Matrix5 matrix_at_order(int order) const;
};

/// Individual matrix elements; superscripts give the eta scaling.
struct WeakCoefficients {
  double alpha12_1, alpha13_1, alpha42_1, alpha43_1, alpha52_1, alpha53_1;
  double alpha11_2, alpha14_2, alpha41_2;
  double beta1, beta2, beta3;
};

WeakCoefficients weak_coefficients(const SystemParams& params);
WeakModel weak_model(const SystemParams& params);

/// Solves matrix v = -beta; throws SingularSystem at eta = 0.
Vector5 weak_stationary(const WeakModel& model);

/// Single-equation cooling law dm/dt = -gamma_c m + c_drive.
struct StrongModel {
  double gamma_c = 0.0;
  double c_drive = 0.0;
  double A_plus = 0.0;
  double A_minus = 0.0;
  /// c / gamma_c, zeroth order in eta; absent in the heating regime.
  std::optional<double> m_ss;
};

StrongModel strong_model(const SystemParams& params);

/// (kappa^2 + 4 (delta - nu)^2) / (16 nu delta); throws NonPositiveRate for delta <= 0.
double stationary_phonon_number(double nu, double delta_eff, double kappa = 1.0);

/// (m0 - m_ss) exp(-gamma_c t) + m_ss. Throws NonPositiveRate unless gamma_c > 0.
double m_of_t(const StrongModel& model, double m0, double t);

enum class Regime { Weak, Strong };

struct OptimalDetuning {
  double delta_closed_form;  // regime formula
  double m_ss_closed_form;   // regime limit of m_ss at that detuning
  double delta_exact;        // exact minimiser sqrt(kappa^2 + 4 nu^2) / 2
  double m_ss_exact;
  double delta_numeric;      // 1-D numeric minimiser of m_ss(delta)
  double m_ss_numeric;
};

/// Weak: delta = kappa/2, m_ss = kappa/(4 nu). Strong: delta = sqrt(kappa^2 + 4 nu^2)/2,
/// m_ss = kappa^2/(16 nu^2). Also reports the exact and numeric minimisers.
OptimalDetuning optimal_detuning(const SystemParams& params, Regime regime);

/// Golden-section minimum of m_ss over delta in [lo, hi].
double minimize_stationary_phonon(double nu, double kappa, double lo, double hi, double rel_tol = 1e-12);

struct YMoments {
  double n2 = 0, k7 = 0, k8 = 0, k9 = 0, k10 = 0;
};

/// Weak-confinement adiabatic elimination to first order in eta, with the
/// nu^2 terms neglected.
struct WeakElimination {
  double n1_0, n1_1, k11_0, k11_1, k12_0, k12_1;
  double n1() const { return n1_0 + n1_1; }
  double k11() const { return k11_0 + k11_1; }
  double k12() const { return k12_0 + k12_1; }
};

WeakElimination elim_weak(const SystemParams& params, const YMoments& y);

/// Strong-confinement elimination (no parameter hierarchy assumed).
struct StrongElimination {
  double n1_0;
  double k7_1, k8_1;
  double k11_0 = 0.0, k12_0 = 0.0;
  double k11_1, k12_1;
  double k13_0, k14_0;
  double mu4;
};

/// Throws DivisionByZero for nu == 0.
StrongElimination elim_strong(const SystemParams& params, double n2);

/// Coefficient pair (gamma, c) of dn2/dt = -gamma n2 + c obtained by
/// substituting the strong elimination into dn2/dt.
struct CoolingLaw {
  double gamma;
  double c;
};
CoolingLaw substituted_cooling_law(const SystemParams& params);

/// Exact stationary values of every closed subsystem used by the
/// eliminations, solved without neglecting nu^2.
struct SubsystemStationary {
  // zeroth order x block
  double n1_0, n3_0, k1_0, k2_0, k3_0, k4_0, k5_0, k6_0;
  // zeroth order mixed block driven by k7, k8
  double k11_0, k12_0, k15_0, k16_0, k17_0, k18_0;
  // zeroth order y^+y and y^2 mixed blocks
  double k13_0, k14_0, k19_0, k20_0, k21_0, k22_0;
  // first order x block
  double n1_1, k1_1, k2_1;
  // first order mixed block
  double k11_1, k12_1, k15_1, k16_1, k17_1, k18_1;
};

/// Weak regime: `context` supplies the slow y moments entering as drives.
SubsystemStationary appB_subsystem_stationary(const SystemParams& params, const YMoments& context);

/// Strong regime: k7..k10 eliminated as well (zero at zeroth order, first
/// order k7, k8 from their own stationarity), n2 supplied.
SubsystemStationary appC_subsystem_stationary(const SystemParams& params, double n2);

}  // namespace cavcool::effective
