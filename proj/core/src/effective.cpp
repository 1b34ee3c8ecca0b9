#include "cavcool/effective.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "cavcool/errors.hpp"

namespace cavcool::effective {
namespace {

// Lorentzian denominators kappa^2 + 4 (delta + s nu)^2.
template <class T>
T lorentz(T kappa, T delta, T shift) {
  const T d = delta + shift;
  return kappa * kappa + 4 * d * d;
}

template <class T>
T m_ss_formula(T nu, T delta, T kappa) {
  const T d = delta - nu;
  return (kappa * kappa + T(4) * d * d) / (T(16) * nu * delta);
}

struct StrongImpl {
  long double k11_slope, k11_const, k12_slope, k12_const;
  long double n1_0, k7_1, k8_1, k13_per_n2, k14_per_n2, mu4;
};

StrongImpl strong_impl(const SystemParams& p) {
  const long double eta = p.eta, nu = p.nu, kappa = p.kappa, delta = p.delta_eff, g = p.g_eff;
  if (nu == 0.0L) throw DivisionByZero("elim_strong: nu must be non-zero");
  const long double g2 = g * g, g4 = g2 * g2;
  const long double d0 = lorentz(kappa, delta, 0.0L);
  const long double dp = lorentz(kappa, delta, nu);
  const long double dm = lorentz(kappa, delta, -nu);
  const long double mu4 = dp * dm;

  StrongImpl s{};
  s.mu4 = mu4;
  s.n1_0 = 4 * g2 / d0;
  s.k7_1 = 8 * eta * kappa * g2 / (nu * d0);
  s.k8_1 = 8 * eta * g2 / d0;
  s.k13_per_n2 = -8 * delta * g / d0;
  s.k14_per_n2 = 4 * kappa * g / d0;
  s.k11_slope = -256 * eta * kappa * nu * nu * delta * g2 / (d0 * mu4);
  s.k11_const = 32 * eta * kappa * g4 / (nu * d0 * d0) + 16 * eta * kappa * nu * g2 / (d0 * dp);
  s.k12_slope = 64 * eta * nu * delta * g2 / (d0 * mu4) * (d0 - 4 * nu * nu);
  s.k12_const = 32 * eta * nu * g2 * (delta + nu) / (d0 * dp) + 32 * eta * g4 / (d0 * d0);
  return s;
}

Eigen::VectorXd solve_block(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* name) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (lu.rank() < a.rows()) throw SingularSystem(std::string("subsystem ") + name + " is singular");
  return lu.solve(-rhs);
}

struct XBlock {
  double n1, n3, k1, k2, k3, k4, k5, k6;
};

// dn1, dn3, dk1 .. dk6 at zeroth order; unknown order (n1, n3, k1, ..., k6).
XBlock x_block_zeroth(const SystemParams& p) {
  const double g = p.g_eff, d = p.delta_eff, k = p.kappa;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(8);
  enum { N1, N3, K1, K2, K3, K4, K5, K6 };
  a(N1, K2) = g;  a(N1, N1) = -k;
  a(N3, K2) = g;  a(N3, K6) = 2 * g;  a(N3, N1) = k;  a(N3, N3) = -2 * k;
  a(K1, K2) = -d; a(K1, K1) = -k / 2;
  c(K2) = 2 * g;  a(K2, K1) = d;  a(K2, K2) = -k / 2;
  a(K3, K2) = -2 * g; a(K3, K4) = -2 * d; a(K3, K3) = -k;
  a(K4, K1) = 2 * g;  a(K4, K3) = 2 * d;  a(K4, K4) = -k;
  a(K5, K4) = g;  a(K5, K6) = -d;  a(K5, K5) = -1.5 * k;
  a(K6, N1) = 4 * g;  a(K6, K3) = -g;  a(K6, K5) = d;  a(K6, K6) = -1.5 * k;
  const auto v = solve_block(a, c, "x zeroth");
  return {v(N1), v(N3), v(K1), v(K2), v(K3), v(K4), v(K5), v(K6)};
}

// k11, k12, k15 .. k18 block in the form shared by the zeroth and first order
// systems; `c` holds the inhomogeneous parts in the same order.
Eigen::VectorXd mixed_block(const SystemParams& p, const Eigen::VectorXd& c) {
  const double g = p.g_eff, d = p.delta_eff, k = p.kappa, nu = p.nu;
  enum { K11, K12, K15, K16, K17, K18 };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  a(K11, K18) = g;  a(K11, K12) = -nu; a(K11, K11) = -k;
  a(K12, K15) = -g; a(K12, K11) = nu;  a(K12, K12) = -k;
  a(K15, K16) = -d; a(K15, K18) = -nu; a(K15, K15) = -k / 2;
  a(K16, K15) = d;  a(K16, K17) = nu;  a(K16, K16) = -k / 2;
  a(K17, K18) = -d; a(K17, K16) = -nu; a(K17, K17) = -k / 2;
  a(K18, K17) = d;  a(K18, K15) = nu;  a(K18, K18) = -k / 2;
  return solve_block(a, c, "mixed");
}

struct YBlock {
  double k13, k14, k19, k20, k21, k22;
};

YBlock y_block_zeroth(const SystemParams& p, double n2, double k9, double k10) {
  const double g = p.g_eff, d = p.delta_eff, k = p.kappa, nu = p.nu;
  enum { K13, K14, K19, K20, K21, K22 };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(6);
  a(K13, K14) = -d; a(K13, K13) = -k / 2;
  c(K14) = 2 * g * n2; a(K14, K13) = d; a(K14, K14) = -k / 2;
  c(K19) = -2 * g * k10; a(K19, K20) = -d; a(K19, K22) = -2 * nu; a(K19, K19) = -k / 2;
  a(K20, K19) = d; a(K20, K21) = 2 * nu; a(K20, K20) = -k / 2;
  a(K21, K22) = -d; a(K21, K20) = -2 * nu; a(K21, K21) = -k / 2;
  c(K22) = 2 * g * k9; a(K22, K21) = d; a(K22, K19) = 2 * nu; a(K22, K22) = -k / 2;
  const auto v = solve_block(a, c, "y^+y/y^2 zeroth");
  return {v(K13), v(K14), v(K19), v(K20), v(K21), v(K22)};
}

// First order mixed block. (k7_1, k8_1) enter k15, k18 only when the y
// coherences vanish at zeroth order.
void mixed_first_order(const SystemParams& p, const XBlock& x, const YBlock& y, double k7_1, double k8_1,
                       SubsystemStationary& out) {
  const double eta = p.eta, nu = p.nu, k = p.kappa, g = p.g_eff;
  Eigen::VectorXd c(6);
  c(0) = 2 * eta * nu * x.n3;
  c(1) = 2 * eta * k * (x.n1 - x.n3);
  c(2) = -2 * g * k8_1 + eta * nu * (x.k1 + 2 * y.k13 - y.k21) + 2 * eta * k * x.k6;
  c(3) = eta * nu * (x.k2 + 2 * y.k14 - y.k22) - 2 * eta * k * x.k5;
  c(4) = eta * nu * (x.k1 + 2 * x.k5 - y.k19);
  c(5) = 2 * g * k7_1 + eta * nu * (x.k2 + 2 * x.k6 - y.k20);
  const auto v = mixed_block(p, c);
  out.k11_1 = v(0);
  out.k12_1 = v(1);
  out.k15_1 = v(2);
  out.k16_1 = v(3);
  out.k17_1 = v(4);
  out.k18_1 = v(5);
}

void fill_zeroth(SubsystemStationary& out, const XBlock& x, const YBlock& y) {
  out.n1_0 = x.n1;
  out.n3_0 = x.n3;
  out.k1_0 = x.k1;
  out.k2_0 = x.k2;
  out.k3_0 = x.k3;
  out.k4_0 = x.k4;
  out.k5_0 = x.k5;
  out.k6_0 = x.k6;
  out.k13_0 = y.k13;
  out.k14_0 = y.k14;
  out.k19_0 = y.k19;
  out.k20_0 = y.k20;
  out.k21_0 = y.k21;
  out.k22_0 = y.k22;
}

void x_first_order(const SystemParams& p, SubsystemStationary& out) {
  const double g = p.g_eff, d = p.delta_eff, k = p.kappa, eta = p.eta, nu = p.nu;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  Eigen::VectorXd c(3);
  a(0, 2) = g; a(0, 0) = -k;
  a(1, 2) = -d; a(1, 1) = -k / 2;
  a(2, 1) = d; a(2, 2) = -k / 2;
  c << 0.0, -eta * nu * out.k15_0, -eta * nu * out.k16_0;
  const auto v = solve_block(a, c, "x first order");
  out.n1_1 = v(0);
  out.k1_1 = v(1);
  out.k2_1 = v(2);
}

}  // namespace

Matrix5 WeakModel::matrix_at_order(int order) const {
  const WeakCoefficients c = weak_coefficients(params);
  Matrix5 m = Matrix5::Zero();
  const double nu = params.nu;
  m(1, 2) = -nu;
  m(2, 1) = nu;
  m(3, 4) = -2 * nu;
  m(4, 3) = 2 * nu;
  if (order >= 1) {
    m(0, 1) = c.alpha12_1;
    m(0, 2) = c.alpha13_1;
    m(3, 1) = c.alpha42_1;
    m(3, 2) = c.alpha43_1;
    m(4, 1) = c.alpha52_1;
    m(4, 2) = c.alpha53_1;
  }
  if (order >= 2) {
    m(0, 0) = m(2, 2) = m(3, 3) = m(4, 4) = c.alpha11_2;
    m(0, 3) = c.alpha14_2;
    m(3, 0) = c.alpha41_2;
  }
  return m;
}

WeakCoefficients weak_coefficients(const SystemParams& p) {
  const double eta = p.eta, nu = p.nu, k = p.kappa, d = p.delta_eff, g2 = p.g_eff * p.g_eff;
  const double l = k * k + 4 * d * d;
  const double l2 = l * l;
  WeakCoefficients c{};
  c.alpha12_1 = -8 * eta * nu * g2 * (k * k - 4 * d * d) / l2;
  c.alpha13_1 = -4 * eta * k * g2 / l;
  c.alpha42_1 = 32 * eta * k * k * nu * g2 / l2;
  c.alpha43_1 = 8 * eta * k * g2 / l;
  c.alpha52_1 = -c.alpha43_1;
  c.alpha53_1 = c.alpha42_1;
  const double second = eta * eta * k * nu * d * g2 / l2;
  c.alpha11_2 = -64 * second;
  c.alpha14_2 = 32 * second;
  c.alpha41_2 = 128 * second;
  c.beta1 = 4 * eta * eta * k * g2 / (l2 * l) * (l * (l - 8 * d * nu) + 8 * g2 * (3 * k * k - 4 * d * d));
  c.beta2 = 8 * eta * nu * g2 / l;
  c.beta3 = -8 * eta * k * g2 / l;
  return c;
}

WeakModel weak_model(const SystemParams& params) {
  WeakModel model;
  model.params = params;
  model.matrix = model.matrix_at_order(2);
  const WeakCoefficients c = weak_coefficients(params);
  model.beta << c.beta1, c.beta2, c.beta3, 0.0, 0.0;
  if (!(params.nu < 0.1 * params.kappa) || params.eta > 0.2) {
    std::ostringstream msg;
    msg << "weak confinement model outside its regime (nu/kappa = " << params.nu / params.kappa
        << ", eta = " << params.eta << "; needs nu << kappa, eta << 1)";
    model.regime_warning = msg.str();
  }
  return model;
}

Vector5 weak_stationary(const WeakModel& model) {
  Eigen::FullPivLU<Matrix5> lu(model.matrix);
  lu.setThreshold(1e-14);
  if (lu.rank() < 5) {
    throw SingularSystem("weak model matrix is singular (eta = 0 or g_eff = 0: n2 is not damped)");
  }
  return lu.solve(-model.beta);
}

double stationary_phonon_number(double nu, double delta_eff, double kappa) {
  if (!(delta_eff > 0.0)) throw NonPositiveRate("stationary phonon number undefined for delta_eff <= 0 (heating)");
  if (!(nu > 0.0)) throw InvalidParams("nu must be positive");
  return m_ss_formula(nu, delta_eff, kappa);
}

StrongModel strong_model(const SystemParams& p) {
  const long double eta = p.eta, nu = p.nu, k = p.kappa, d = p.delta_eff, g2 = p.g_eff * p.g_eff;
  const long double dp = lorentz(k, d, nu);
  const long double dm = lorentz(k, d, -nu);
  StrongModel s;
  s.A_plus = static_cast<double>(4 * k * g2 / dp);
  s.A_minus = static_cast<double>(4 * k * g2 / dm);
  s.gamma_c = static_cast<double>(64 * eta * eta * k * nu * d * g2 / (dp * dm));
  s.c_drive = static_cast<double>(4 * eta * eta * k * g2 / dp);
  if (d > 0 && nu > 0) s.m_ss = static_cast<double>(m_ss_formula(nu, d, k));
  return s;
}

double m_of_t(const StrongModel& model, double m0, double t) {
  if (!(model.gamma_c > 0.0) || !model.m_ss) {
    throw NonPositiveRate("m(t) requires a positive cooling rate (delta_eff > 0, eta > 0, g_eff != 0)");
  }
  return (m0 - *model.m_ss) * std::exp(-model.gamma_c * t) + *model.m_ss;
}

double minimize_stationary_phonon(double nu, double kappa, double lo, double hi, double rel_tol) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("minimize_stationary_phonon: need 0 < lo < hi");
  auto f = [&](double d) { return m_ss_formula(nu, d, kappa); };
  // Golden-section bracketing; the value alone only resolves the minimum to
  // about sqrt(machine epsilon).
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-6 * (std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  // Polish on the complex-step derivative, which has no cancellation error.
  auto dfdx = [&](double x) {
    const double h = 1e-30 * std::max(1.0, std::abs(x));
    return m_ss_formula(std::complex<double>(nu), std::complex<double>(x, h), std::complex<double>(kappa)).imag() / h;
  };
  double left = std::max(lo, a - (b - a)), right = std::min(hi, b + (b - a));
  if (dfdx(left) >= 0.0 || dfdx(right) <= 0.0) return 0.5 * (a + b);
  std::uintmax_t iters = 200;
  const auto tol = [rel_tol](double u, double v) { return std::abs(u - v) <= rel_tol * std::abs(u); };
  const auto root = boost::math::tools::toms748_solve(dfdx, left, right, tol, iters);
  return 0.5 * (root.first + root.second);
}

OptimalDetuning optimal_detuning(const SystemParams& p, Regime regime) {
  if (!(p.nu > 0.0)) throw InvalidParams("optimal detuning requires nu > 0");
  const double k = p.kappa, nu = p.nu;
  OptimalDetuning out{};
  out.delta_exact = 0.5 * std::sqrt(k * k + 4 * nu * nu);
  out.m_ss_exact = m_ss_formula(nu, out.delta_exact, k);
  if (regime == Regime::Weak) {
    out.delta_closed_form = 0.5 * k;
    out.m_ss_closed_form = k / (4 * nu);
  } else {
    out.delta_closed_form = out.delta_exact;
    out.m_ss_closed_form = k * k / (16 * nu * nu);
  }
  const double hi = 10.0 * (k + nu);
  out.delta_numeric = minimize_stationary_phonon(nu, k, 1e-6 * out.delta_exact, hi);
  out.m_ss_numeric = m_ss_formula(nu, out.delta_numeric, k);
  return out;
}

WeakElimination elim_weak(const SystemParams& p, const YMoments& y) {
  const double eta = p.eta, nu = p.nu, k = p.kappa, d = p.delta_eff, g2 = p.g_eff * p.g_eff;
  const double l = k * k + 4 * d * d;
  const double l2 = l * l;
  WeakElimination e{};
  e.n1_0 = 4 * g2 / l;
  const double cross = 4 * nu * g2 * (3 * k * k - 4 * d * d) / (k * l2);
  e.k11_0 = 4 * g2 / l * y.k7 - cross * y.k8;
  e.k12_0 = cross * y.k7 + 4 * g2 / l * y.k8;
  e.n1_1 = 32 * eta * nu * d * g2 / l2 * y.k8;
  e.k11_1 = 16 * eta * nu * g2 / l2 * (2 * d * y.k10 + k) +
            64 * eta * nu * g2 * g2 / (k * l2 * l2) * (5 * k * k * k * k - 16 * k * k * d * d - 16 * d * d * d * d);
  e.k12_1 = 32 * eta * nu * d * g2 / l2 * (2 * y.n2 - y.k9 + 1) - 32 * eta * g2 * g2 * (3 * k * k - 4 * d * d) / (l2 * l);
  return e;
}

StrongElimination elim_strong(const SystemParams& p, double n2) {
  const StrongImpl s = strong_impl(p);
  StrongElimination e{};
  e.n1_0 = static_cast<double>(s.n1_0);
  e.k7_1 = static_cast<double>(s.k7_1);
  e.k8_1 = static_cast<double>(s.k8_1);
  e.k11_1 = static_cast<double>(s.k11_slope * n2 + s.k11_const);
  e.k12_1 = static_cast<double>(s.k12_slope * n2 + s.k12_const);
  e.k13_0 = static_cast<double>(s.k13_per_n2 * n2);
  e.k14_0 = static_cast<double>(s.k14_per_n2 * n2);
  e.mu4 = static_cast<double>(s.mu4);
  return e;
}

CoolingLaw substituted_cooling_law(const SystemParams& p) {
  const StrongImpl s = strong_impl(p);
  const long double eta = p.eta, nu = p.nu, k = p.kappa;
  // dn2/dt = eta nu k11 - eta kappa k12 + eta^2 kappa n1
  const long double slope = eta * nu * s.k11_slope - eta * k * s.k12_slope;
  const long double constant = eta * nu * s.k11_const - eta * k * s.k12_const + eta * eta * k * s.n1_0;
  return {static_cast<double>(-slope), static_cast<double>(constant)};
}

SubsystemStationary appB_subsystem_stationary(const SystemParams& p, const YMoments& y) {
  SubsystemStationary out{};
  const XBlock x = x_block_zeroth(p);
  const YBlock yb = y_block_zeroth(p, y.n2, y.k9, y.k10);
  fill_zeroth(out, x, yb);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(6);
  c(2) = -2 * p.g_eff * y.k8;
  c(5) = 2 * p.g_eff * y.k7;
  const auto v = mixed_block(p, c);
  out.k11_0 = v(0);
  out.k12_0 = v(1);
  out.k15_0 = v(2);
  out.k16_0 = v(3);
  out.k17_0 = v(4);
  out.k18_0 = v(5);

  x_first_order(p, out);
  mixed_first_order(p, x, yb, 0.0, 0.0, out);
  return out;
}

SubsystemStationary appC_subsystem_stationary(const SystemParams& p, double n2) {
  if (p.nu == 0.0) throw DivisionByZero("strong elimination requires nu != 0");
  SubsystemStationary out{};
  const XBlock x = x_block_zeroth(p);
  const YBlock yb = y_block_zeroth(p, n2, 0.0, 0.0);
  fill_zeroth(out, x, yb);
  // Zeroth order mixed block is undriven once k7..k10 vanish.
  out.k11_0 = out.k12_0 = out.k15_0 = out.k16_0 = out.k17_0 = out.k18_0 = 0.0;
  x_first_order(p, out);
  // Stationarity of dk7 and dk8 with n1 at zeroth order.
  const double k7_1 = 2 * p.eta * p.kappa * x.n1 / p.nu;
  const double k8_1 = 2 * p.eta * x.n1;
  mixed_first_order(p, x, yb, k7_1, k8_1, out);
  return out;
}

}  // namespace cavcool::effective
