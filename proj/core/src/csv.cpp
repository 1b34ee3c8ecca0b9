#include "cavcool/csv.hpp"

#include <charconv>
#include <cmath>

namespace cavcool::csv {

std::string format(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_comment_block(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [k, v] : entries) os << "# " << k << " = " << v << '\n';
}

std::string trajectory_header(const std::vector<std::string>& extra) {
  std::string h = "t,m";
  for (Moment m : all_moments()) {
    h += ',';
    h += moment_name(m);
  }
  for (const auto& e : extra) h += ',' + e;
  return h;
}

void write_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format(values[i]);
  }
  os << '\n';
}

void write_trajectory_row(std::ostream& os, double t, double m, const MomentVector& v,
                          const std::vector<double>& extra) {
  std::vector<double> row;
  row.reserve(2 + kMomentCount + extra.size());
  row.push_back(t);
  row.push_back(m);
  for (std::size_t i = 0; i < kMomentCount; ++i) row.push_back(v.values(static_cast<Eigen::Index>(i)));
  row.insert(row.end(), extra.begin(), extra.end());
  write_row(os, row);
}

}  // namespace cavcool::csv
