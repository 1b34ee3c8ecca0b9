#include "cavcool/moments.hpp"

#include <cmath>
#include <sstream>

#include "cavcool/errors.hpp"

namespace cavcool {
namespace {

constexpr std::array<std::string_view, kMomentCount> kNames = {
    "n1",  "n2",  "n3",  "k1",  "k2",  "k3",  "k4",  "k5",  "k6",  "k7",  "k8",  "k9",  "k10",
    "k11", "k12", "k13", "k14", "k15", "k16", "k17", "k18", "k19", "k20", "k21", "k22",
};

std::array<Moment, kMomentCount> make_all() {
  std::array<Moment, kMomentCount> out{};
  for (std::size_t i = 0; i < kMomentCount; ++i) out[i] = static_cast<Moment>(i);
  return out;
}

}  // namespace

std::string_view moment_name(Moment m) { return kNames[index(m)]; }

std::optional<Moment> moment_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kMomentCount; ++i) {
    if (kNames[i] == name) return static_cast<Moment>(i);
  }
  return std::nullopt;
}

const std::array<Moment, kMomentCount>& all_moments() {
  static const auto all = make_all();
  return all;
}

PhysicalityReport MomentVector::check_physical(double tolerance) const {
  PhysicalityReport report;
  auto fail = [&](const std::string& what) {
    report.ok = false;
    report.violations.push_back(what);
  };
  const MomentVector& v = *this;
  if (!all_finite()) fail("non-finite entries");
  if (v[Moment::n1] < -tolerance) fail("n1 < 0");
  if (v[Moment::n2] < -tolerance) fail("n2 < 0");
  if (v[Moment::n3] < v[Moment::n1] * v[Moment::n1] - tolerance) fail("n3 < n1^2");
  if (v[Moment::n3] < v[Moment::n1] - tolerance) fail("n3 < n1");
  const double k1 = v[Moment::k1], k2 = v[Moment::k2];
  if (k1 * k1 + k2 * k2 > 4.0 * v[Moment::n1] + tolerance) fail("k1^2 + k2^2 > 4 n1");
  return report;
}

double mean_phonon(const MomentVector& v, double eta) {
  return v[Moment::n2] - eta * v[Moment::k12] + eta * eta * v[Moment::n3];
}

MomentVector default_initial(double m0, const SystemParams& /*params*/) {
  if (!(m0 >= 0.0) || !std::isfinite(m0)) throw InvalidParams("initial phonon number must be finite and >= 0");
  MomentVector v;
  v[Moment::n2] = m0;
  return v;
}

}  // namespace cavcool
