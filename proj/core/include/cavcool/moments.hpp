#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cavcool/params.hpp"

namespace cavcool {

/// The 25 named expectation values of the closed rate-equation set.
///   n1 = <x^+ x>, n2 = <y^+ y>, n3 = <x^+ x x^+ x>
///   k1..k6   x-operator coherences
///   k7..k10  y-operator coherences
///   k11..k22 mixed coherences
/// Every i-prefixed definition makes the moment the expectation of a
/// Hermitian operator, so all 25 are real.
enum class Moment : std::size_t {
  n1, n2, n3,
  k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11,
  k12, k13, k14, k15, k16, k17, k18, k19, k20, k21, k22,
};

inline constexpr std::size_t kMomentCount = 25;

constexpr std::size_t index(Moment m) { return static_cast<std::size_t>(m); }

std::string_view moment_name(Moment m);
std::optional<Moment> moment_from_name(std::string_view name);
const std::array<Moment, kMomentCount>& all_moments();

using MomentArray = Eigen::Matrix<double, kMomentCount, 1>;

struct PhysicalityReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Values of the 25 named moments, dimensionless.
struct MomentVector {
  MomentArray values = MomentArray::Zero();

  double& operator[](Moment m) { return values(static_cast<Eigen::Index>(index(m))); }
  double operator[](Moment m) const { return values(static_cast<Eigen::Index>(index(m))); }

  bool all_finite() const { return values.allFinite(); }

  /// n1 >= 0, n2 >= 0, n3 >= n1^2, n3 >= n1, k1^2 + k2^2 <= 4 n1 (up to tol).
  PhysicalityReport check_physical(double tolerance = 1e-9) const;
};

/// Mean phonon number <b^+ b> = n2 - eta k12 + eta^2 n3.
double mean_phonon(const MomentVector& v, double eta);

/// Diagonal phonon state with mean m0 and the cavity in vacuum: n2 = m0,
/// every other moment zero.
MomentVector default_initial(double m0, const SystemParams& params);

/// Linear moment dynamics d/dt v = matrix v + drive.
struct RateSystem {
  Eigen::Matrix<double, kMomentCount, kMomentCount> matrix =
      Eigen::Matrix<double, kMomentCount, kMomentCount>::Zero();
  MomentArray drive = MomentArray::Zero();
  int eta_order = 2;
  SystemParams params;

  double coefficient(Moment row, Moment col) const {
    return matrix(static_cast<Eigen::Index>(index(row)), static_cast<Eigen::Index>(index(col)));
  }
  double drive_of(Moment row) const { return drive(static_cast<Eigen::Index>(index(row))); }
};

}  // namespace cavcool
