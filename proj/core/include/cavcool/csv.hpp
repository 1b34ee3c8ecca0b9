#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cavcool/moments.hpp"

namespace cavcool::csv {

/// Shortest decimal that parses back to the same double.
std::string format(double v);

/// Writes "# key = value" lines.
void write_comment_block(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& entries);

/// "t,m,n1,n2,n3,k1,...,k22" followed by `extra` columns.
std::string trajectory_header(const std::vector<std::string>& extra = {});

void write_row(std::ostream& os, const std::vector<double>& values);

/// t, m, then the 25 moments in table order, then `extra`.
void write_trajectory_row(std::ostream& os, double t, double m, const MomentVector& v,
                          const std::vector<double>& extra = {});

}  // namespace cavcool::csv
