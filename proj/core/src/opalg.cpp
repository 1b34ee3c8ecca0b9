#include "cavcool/opalg.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

#include "cavcool/errors.hpp"

namespace cavcool::opalg {
namespace {

Rational binomial(int n, int k) {
  Rational r{1};
  for (int i = 1; i <= k; ++i) r = r * Rational{n - k + i} / Rational{i};
  return r;
}

Rational factorial(int n) {
  Rational r{1};
  for (int i = 2; i <= n; ++i) r *= Rational{i};
  return r;
}

// i^k for integer k >= 0, and (-i)^k.
ExactComplex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return ExactComplex{1};
    case 1: return ExactComplex::i();
    case 2: return ExactComplex{-1};
    default: return -ExactComplex::i();
  }
}

ExactComplex minus_i_power(int k) { return i_power(3 * k); }

// Normal ordering of a^n_ann (a^+)^n_cre: sum_k C(n_ann,k) C(n_cre,k) k! a^+^(n_cre-k) a^(n_ann-k).
struct Contraction {
  int removed;
  Rational weight;
};

std::vector<Contraction> contractions(int n_ann, int n_cre) {
  std::vector<Contraction> out;
  for (int k = 0; k <= std::min(n_ann, n_cre); ++k) {
    out.push_back({k, binomial(n_ann, k) * binomial(n_cre, k) * factorial(k)});
  }
  return out;
}

void check_limits(const Monomial& m, const AlgebraLimits& limits) {
  const int worst = std::max({m.px_dag, m.px, m.py_dag, m.py});
  if (worst > limits.max_exponent) {
    throw DegreeOverflow("operator monomial " + m.str() + " exceeds max exponent " +
                         std::to_string(limits.max_exponent));
  }
}

Monomial make_monomial(int a, int b, int c, int d) {
  if (std::max({a, b, c, d}) > 255) throw DegreeOverflow("exponent out of range");
  return Monomial{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
                  static_cast<std::uint8_t>(d)};
}

OperatorPolynomial multiply_monomials(const Monomial& l, const Monomial& r, const AlgebraLimits& limits) {
  OperatorPolynomial out;
  for (const auto& cx : contractions(l.px, r.px_dag)) {
    for (const auto& cy : contractions(l.py, r.py_dag)) {
      const Monomial m = make_monomial(l.px_dag + r.px_dag - cx.removed, l.px + r.px - cx.removed,
                                       l.py_dag + r.py_dag - cy.removed, l.py + r.py - cy.removed);
      check_limits(m, limits);
      out.add(m, EtaCoefficient{ExactComplex{cx.weight * cy.weight}});
    }
  }
  return out;
}

EtaCoefficient real_coeff(const Rational& r, int power = 0) { return EtaCoefficient{ExactComplex{r}, power}; }

EtaCoefficient imag_coeff(const Rational& r, int power = 0) {
  return EtaCoefficient{ExactComplex{Rational{0}, r}, power};
}

}  // namespace

std::string Monomial::str() const {
  if (is_identity()) return "1";
  std::ostringstream out;
  bool first = true;
  auto put = [&](const char* sym, int e) {
    if (e == 0) return;
    if (!first) out << " ";
    first = false;
    out << sym;
    if (e > 1) out << "^" << e;
  };
  put("x+", px_dag);
  put("x", px);
  put("y+", py_dag);
  put("y", py);
  return out.str();
}

OperatorPolynomial::OperatorPolynomial(Monomial m, EtaCoefficient c) { add(m, c); }

void OperatorPolynomial::add(const Monomial& m, const EtaCoefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

EtaCoefficient OperatorPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? EtaCoefficient{} : it->second;
}

OperatorPolynomial OperatorPolynomial::hermitian_conjugate() const {
  OperatorPolynomial out;
  for (const auto& [m, c] : terms_) out.add(m.adjoint(), c.conj());
  return out;
}

OperatorPolynomial OperatorPolynomial::truncated(int max_eta_power) const {
  OperatorPolynomial out;
  for (const auto& [m, c] : terms_) out.add(m, c.truncated(max_eta_power));
  return out;
}

OperatorPolynomial OperatorPolynomial::scaled(const EtaCoefficient& c) const {
  OperatorPolynomial out;
  for (const auto& [m, coeff] : terms_) out.add(m, coeff * c);
  return out;
}

OperatorPolynomial OperatorPolynomial::displaced() const {
  OperatorPolynomial out;
  for (const auto& [m, c] : terms_) {
    // (y^+ - i eta)^c (y + i eta)^d, expanded binomially; stays normal ordered.
    for (int j = 0; j <= m.py_dag; ++j) {
      for (int l = 0; l <= m.py; ++l) {
        const int shift_dag = m.py_dag - j;
        const int shift = m.py - l;
        ExactComplex w = ExactComplex{binomial(m.py_dag, j) * binomial(m.py, l)};
        w *= minus_i_power(shift_dag);
        w *= i_power(shift);
        out.add(make_monomial(m.px_dag, m.px, j, l), c * EtaCoefficient{w, shift_dag + shift});
      }
    }
  }
  return out;
}

OperatorPolynomial OperatorPolynomial::sandwiched_by_x() const {
  OperatorPolynomial out;
  for (const auto& [m, c] : terms_) out.add(make_monomial(m.px_dag + 1, m.px + 1, m.py_dag, m.py), c);
  return out;
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

std::string OperatorPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "[" << c.str() << "] " << m.str();
  }
  return out.str();
}

OperatorPolynomial multiply(const OperatorPolynomial& a, const OperatorPolynomial& b, const AlgebraLimits& limits) {
  OperatorPolynomial out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const EtaCoefficient c = ca * cb;
      if (c.is_zero()) continue;
      out += multiply_monomials(ma, mb, limits).scaled(c);
    }
  }
  return out;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) { return multiply(a, b); }

OperatorPolynomial normal_order(std::span<const Letter> word, const AlgebraLimits& limits) {
  OperatorPolynomial result = OperatorPolynomial::identity();
  for (Letter letter : word) {
    switch (letter) {
      case Letter::X: result = multiply(result, OperatorPolynomial::x(), limits); break;
      case Letter::Xdag: result = multiply(result, OperatorPolynomial::x_dag(), limits); break;
      case Letter::Y: result = multiply(result, OperatorPolynomial::y(), limits); break;
      case Letter::Ydag: result = multiply(result, OperatorPolynomial::y_dag(), limits); break;
    }
  }
  return result;
}

OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b, const AlgebraLimits& limits) {
  return multiply(a, b, limits) - multiply(b, a, limits);
}

ExactParams ExactParams::from(const SystemParams& p) {
  return {exact_rational(p.eta), exact_rational(p.nu), exact_rational(p.kappa), exact_rational(p.delta_eff),
          exact_rational(p.g_eff)};
}

OperatorPolynomial build_hamiltonian(const SystemParams& params) {
  const ExactParams p = ExactParams::from(params);
  using P = OperatorPolynomial;
  const P n_x = P{Monomial{1, 1, 0, 0}};
  const P n_y = P{Monomial{0, 0, 1, 1}};

  P h;
  h += P::x().scaled(real_coeff(p.g_eff));
  h += P::x_dag().scaled(real_coeff(p.g_eff));
  h += n_x.scaled(real_coeff(p.delta_eff));
  h += (n_x * n_x).scaled(real_coeff(p.nu, 2));
  h += (n_x * (P::y() - P::y_dag())).scaled(imag_coeff(-p.nu, 1));
  h += n_y.scaled(real_coeff(p.nu));
  return h;
}

OperatorPolynomial adjoint_derivative(const OperatorPolynomial& a, const SystemParams& params,
                                      const AlgebraLimits& limits) {
  const ExactParams p = ExactParams::from(params);
  const OperatorPolynomial h = build_hamiltonian(params);
  const OperatorPolynomial n_x{Monomial{1, 1, 0, 0}};

  OperatorPolynomial out = commutator(a, h, limits).scaled(imag_coeff(Rational{-1}));
  out += (multiply(a, n_x, limits) + multiply(n_x, a, limits)).scaled(real_coeff(-p.kappa / 2));
  OperatorPolynomial jump = a.displaced().sandwiched_by_x();
  for (const auto& [m, c] : jump.terms()) check_limits(m, limits);
  out += jump.scaled(real_coeff(p.kappa));
  return out;
}

namespace {

struct MomentTable {
  std::array<OperatorPolynomial, kMomentCount> operators;
  std::vector<Monomial> basis;
  // inverse[basis index][moment index]
  std::vector<std::array<ExactComplex, kMomentCount>> inverse;
};

MomentTable build_table() {
  using P = OperatorPolynomial;
  const P x = P::x(), xd = P::x_dag(), y = P::y(), yd = P::y_dag();
  const EtaCoefficient i{ExactComplex::i()};
  const P nx = xd * x;

  MomentTable t;
  auto set = [&](Moment m, P op) { t.operators[index(m)] = std::move(op); };
  set(Moment::n1, nx);
  set(Moment::n2, yd * y);
  set(Moment::n3, nx * nx);
  set(Moment::k1, x + xd);
  set(Moment::k2, (x - xd).scaled(i));
  set(Moment::k3, x * x + xd * xd);
  set(Moment::k4, (x * x - xd * xd).scaled(i));
  set(Moment::k5, xd * (x + xd) * x);
  set(Moment::k6, (xd * (x - xd) * x).scaled(i));
  set(Moment::k7, y + yd);
  set(Moment::k8, (y - yd).scaled(i));
  set(Moment::k9, y * y + yd * yd);
  set(Moment::k10, (y * y - yd * yd).scaled(i));
  set(Moment::k11, nx * (y + yd));
  set(Moment::k12, (nx * (y - yd)).scaled(i));
  set(Moment::k13, (x + xd) * (yd * y));
  set(Moment::k14, ((x - xd) * (yd * y)).scaled(i));
  set(Moment::k15, (x - xd) * (y - yd));
  set(Moment::k16, ((x + xd) * (y - yd)).scaled(i));
  set(Moment::k17, (x + xd) * (y + yd));
  set(Moment::k18, ((x - xd) * (y + yd)).scaled(i));
  set(Moment::k19, (x - xd) * (y * y - yd * yd));
  set(Moment::k20, ((x + xd) * (y * y - yd * yd)).scaled(i));
  set(Moment::k21, (x + xd) * (y * y + yd * yd));
  set(Moment::k22, ((x - xd) * (y * y + yd * yd)).scaled(i));

  for (const auto& op : t.operators) {
    for (const auto& [m, c] : op.terms()) {
      if (m.is_identity()) throw std::logic_error("moment operator with identity component");
      if (std::find(t.basis.begin(), t.basis.end(), m) == t.basis.end()) t.basis.push_back(m);
    }
  }
  std::sort(t.basis.begin(), t.basis.end());
  if (t.basis.size() != kMomentCount) throw std::logic_error("named moments do not span 25 monomials");

  // a[j][col]: moment j = sum_col a[j][col] basis[col]; invert by Gauss-Jordan.
  constexpr std::size_t n = kMomentCount;
  std::vector<std::vector<ExactComplex>> a(n, std::vector<ExactComplex>(2 * n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t col = 0; col < n; ++col) {
      const EtaCoefficient c = t.operators[j].coefficient(t.basis[col]);
      a[j][col] = c.at(0);
    }
    a[j][n + j] = ExactComplex{1};
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) throw std::logic_error("named moment map is singular");
    std::swap(a[pivot], a[col]);
    const ExactComplex inv = ExactComplex{1} / a[col][col];
    for (auto& v : a[col]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const ExactComplex f = a[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  // Rows of a now hold basis[col] = sum_j a[col][n + j] moment_j.
  t.inverse.resize(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t j = 0; j < n; ++j) t.inverse[col][j] = a[col][n + j];
  }
  return t;
}

const MomentTable& table() {
  static const MomentTable t = build_table();
  return t;
}

}  // namespace

const OperatorPolynomial& moment_operator(Moment m) { return table().operators[index(m)]; }

const std::vector<Monomial>& named_monomials() { return table().basis; }

std::map<Moment, ExactComplex> expectation_in_moments(const Monomial& m) {
  const auto& t = table();
  auto it = std::lower_bound(t.basis.begin(), t.basis.end(), m);
  std::map<Moment, ExactComplex> out;
  if (it == t.basis.end() || *it != m) return out;
  const auto& row = t.inverse[static_cast<std::size_t>(it - t.basis.begin())];
  for (std::size_t j = 0; j < kMomentCount; ++j) {
    if (!row[j].is_zero()) out.emplace(static_cast<Moment>(j), row[j]);
  }
  return out;
}

EtaCoefficient SymbolicRateRow::coefficient(Moment m) const {
  auto it = linear_part.find(m);
  return it == linear_part.end() ? EtaCoefficient{} : it->second;
}

SymbolicRateRow derive_row(Moment target, const SystemParams& params, int eta_order, const DeriveOptions& options) {
  if (eta_order < 0 || eta_order > 2) throw std::invalid_argument("eta_order must be 0, 1 or 2");
  const OperatorPolynomial derivative =
      adjoint_derivative(moment_operator(target), params, options.limits).truncated(eta_order);

  SymbolicRateRow row;
  row.target = target;
  for (const auto& [m, c] : derivative.terms()) {
    if (m.is_identity()) {
      row.drive += c;
      continue;
    }
    const auto weights = expectation_in_moments(m);
    if (weights.empty()) {
      row.residual.add(m, c);
      continue;
    }
    for (const auto& [moment, w] : weights) row.linear_part[moment] += c * EtaCoefficient{w};
  }
  std::erase_if(row.linear_part, [](const auto& kv) { return kv.second.is_zero(); });

  for (const auto& [moment, c] : row.linear_part) {
    if (!c.is_real()) {
      throw std::logic_error("non-real coefficient in row d" + std::string(moment_name(target)) + "/dt");
    }
  }
  if (!row.drive.is_real()) throw std::logic_error("non-real drive term");
  if (options.strict && !row.closed()) {
    throw ClosureError("d" + std::string(moment_name(target)) + "/dt couples to unnamed moments: " +
                       row.residual.str());
  }
  return row;
}

std::vector<SymbolicRateRow> derive_symbolic_rows(const SystemParams& params, int eta_order,
                                                  const DeriveOptions& options) {
  std::vector<SymbolicRateRow> rows;
  rows.reserve(kMomentCount);
  for (Moment m : all_moments()) rows.push_back(derive_row(m, params, eta_order, options));
  return rows;
}

DerivedSystem derive_rate_system(const SystemParams& params, int eta_order, const DeriveOptions& options) {
  const auto rows = derive_symbolic_rows(params, eta_order, options);
  const Rational eta = exact_rational(params.eta);

  DerivedSystem out;
  out.system.eta_order = eta_order;
  out.system.params = params;
  for (const auto& row : rows) {
    const auto r = static_cast<Eigen::Index>(index(row.target));
    for (const auto& [moment, c] : row.linear_part) {
      out.system.matrix(r, static_cast<Eigen::Index>(index(moment))) = c.evaluate(eta).re.convert_to<double>();
    }
    out.system.drive(r) = row.drive.evaluate(eta).re.convert_to<double>();
    if (!row.closed()) out.residuals.push_back({row.target, row.residual});
  }
  return out;
}

}  // namespace cavcool::opalg
