#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cavcool/exact.hpp"
#include "cavcool/moments.hpp"
#include "cavcool/params.hpp"

/// Exact symbolic algebra of the commuting bosonic operators x and y, and the
/// mechanical derivation of moment equations from the adjoint master equation.
namespace cavcool::opalg {

/// Exponent bound applied to each of the four exponents of a monomial.
struct AlgebraLimits {
  int max_exponent = 4;
};

/// Normal-ordered monomial x^+^px_dag x^px y^+^py_dag y^py.
struct Monomial {
  std::uint8_t px_dag = 0;
  std::uint8_t px = 0;
  std::uint8_t py_dag = 0;
  std::uint8_t py = 0;

  auto operator<=>(const Monomial&) const = default;

  bool is_identity() const { return px_dag == 0 && px == 0 && py_dag == 0 && py == 0; }
  int degree() const { return px_dag + px + py_dag + py; }
  Monomial adjoint() const { return {px, px_dag, py, py_dag}; }
  std::string str() const;
};

enum class Letter { X, Xdag, Y, Ydag };

class OperatorPolynomial {
 public:
  OperatorPolynomial() = default;
  explicit OperatorPolynomial(Monomial m, EtaCoefficient c = EtaCoefficient{1});

  static OperatorPolynomial identity() { return OperatorPolynomial{Monomial{}}; }
  static OperatorPolynomial constant(EtaCoefficient c) { return OperatorPolynomial{Monomial{}, std::move(c)}; }
  static OperatorPolynomial x() { return OperatorPolynomial{Monomial{0, 1, 0, 0}}; }
  static OperatorPolynomial x_dag() { return OperatorPolynomial{Monomial{1, 0, 0, 0}}; }
  static OperatorPolynomial y() { return OperatorPolynomial{Monomial{0, 0, 0, 1}}; }
  static OperatorPolynomial y_dag() { return OperatorPolynomial{Monomial{0, 0, 1, 0}}; }

  const std::map<Monomial, EtaCoefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  EtaCoefficient coefficient(const Monomial& m) const;

  OperatorPolynomial hermitian_conjugate() const;
  OperatorPolynomial truncated(int max_eta_power) const;
  OperatorPolynomial scaled(const EtaCoefficient& c) const;

  /// Conjugation by the displacement operator: y -> y + i eta,
  /// y^+ -> y^+ - i eta; x and x^+ unchanged.
  OperatorPolynomial displaced() const;

  /// x^+ P x (normal order is preserved trivially).
  OperatorPolynomial sandwiched_by_x() const;

  void add(const Monomial& m, const EtaCoefficient& c);

  OperatorPolynomial& operator+=(const OperatorPolynomial& o);
  OperatorPolynomial& operator-=(const OperatorPolynomial& o);

  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { return a += b; }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { return a -= b; }
  friend OperatorPolynomial operator*(const EtaCoefficient& c, const OperatorPolynomial& p) { return p.scaled(c); }
  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  std::map<Monomial, EtaCoefficient> terms_;
};

/// Normal-ordered product of two normal-ordered polynomials.
OperatorPolynomial multiply(const OperatorPolynomial& a, const OperatorPolynomial& b,
                            const AlgebraLimits& limits = {});
OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);

/// Normal ordering of an arbitrary product of x, x^+, y, y^+.
OperatorPolynomial normal_order(std::span<const Letter> word, const AlgebraLimits& limits = {});

/// normal_order(ab - ba).
OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b,
                              const AlgebraLimits& limits = {});

/// Exact parameter values used as coefficients (inputs converted exactly).
struct ExactParams {
  Rational eta, nu, kappa, delta_eff, g_eff;
  static ExactParams from(const SystemParams& p);
};

/// Transformed interaction Hamiltonian (units of hbar):
///   g x + g* x^+ + delta x^+x + eta^2 nu (x^+x)^2 - i eta nu x^+x (y - y^+) + nu y^+y
/// with eta kept symbolic through the grading.
OperatorPolynomial build_hamiltonian(const SystemParams& params);

/// Heisenberg-picture generator of the master equation:
///   -i[a, H] - (kappa/2)(a x^+x + x^+x a) + kappa x^+ D(a) x
/// where D conjugates by the displacement operator.
OperatorPolynomial adjoint_derivative(const OperatorPolynomial& a, const SystemParams& params,
                                      const AlgebraLimits& limits = {});

/// The operator whose expectation is the named moment.
const OperatorPolynomial& moment_operator(Moment m);

/// Normal-ordered monomials spanned by the named moments (25 entries, no identity).
const std::vector<Monomial>& named_monomials();

/// <monomial> as a complex linear combination of named moments; empty when
/// the monomial is not spanned by them.
std::map<Moment, ExactComplex> expectation_in_moments(const Monomial& m);

struct SymbolicRateRow {
  Moment target{};
  std::map<Moment, EtaCoefficient> linear_part;
  EtaCoefficient drive;
  /// Terms whose expectation is not one of the 25 named moments.
  OperatorPolynomial residual;

  bool closed() const { return residual.is_zero(); }
  EtaCoefficient coefficient(Moment m) const;
};

struct DeriveOptions {
  AlgebraLimits limits;
  /// Throw ClosureError instead of dropping unnamed moments.
  bool strict = false;
};

/// Symbolic rows for all 25 moments with coefficients truncated beyond
/// eta^eta_order.
std::vector<SymbolicRateRow> derive_symbolic_rows(const SystemParams& params, int eta_order,
                                                  const DeriveOptions& options = {});

SymbolicRateRow derive_row(Moment target, const SystemParams& params, int eta_order,
                           const DeriveOptions& options = {});

struct ResidualReport {
  Moment target{};
  OperatorPolynomial dropped;
};

struct DerivedSystem {
  RateSystem system;
  std::vector<ResidualReport> residuals;
};

/// Numeric export of the symbolic rows (each entry correctly rounded from
/// its exact value). Open couplings are dropped and reported.
DerivedSystem derive_rate_system(const SystemParams& params, int eta_order,
                                 const DeriveOptions& options = {});

}  // namespace cavcool::opalg
