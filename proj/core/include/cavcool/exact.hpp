#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <string>

namespace cavcool::opalg {

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a finite double (every finite double is a dyadic
/// rational).
Rational exact_rational(double value);

/// Complex number with exact rational real and imaginary parts.
struct ExactComplex {
  Rational re{0};
  Rational im{0};

  ExactComplex() = default;
  ExactComplex(Rational r, Rational i = Rational{0}) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(long long r) : re(r) {}

  static ExactComplex i() { return {Rational{0}, Rational{1}}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  ExactComplex conj() const { return {re, -im}; }

  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::complex<double> to_complex() const;
  std::string str() const;
};

/// Coefficient graded by powers of the Lamb-Dicke parameter: sum_k c_k eta^k.
/// Zero entries are never stored.
class EtaCoefficient {
 public:
  EtaCoefficient() = default;
  EtaCoefficient(ExactComplex value, int eta_power = 0);
  EtaCoefficient(long long value) : EtaCoefficient(ExactComplex{value}) {}

  const std::map<int, ExactComplex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_real() const;
  int max_power() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }

  /// Coefficient of eta^power (zero if absent).
  ExactComplex at(int power) const;

  EtaCoefficient conj() const;
  EtaCoefficient truncated(int max_power) const;

  /// sum_k c_k eta^k evaluated exactly for the given eta.
  ExactComplex evaluate(const Rational& eta) const;
  std::complex<double> evaluate(double eta) const;

  EtaCoefficient& operator+=(const EtaCoefficient& o);
  EtaCoefficient& operator-=(const EtaCoefficient& o);
  EtaCoefficient& operator*=(const EtaCoefficient& o);

  friend EtaCoefficient operator+(EtaCoefficient a, const EtaCoefficient& b) { return a += b; }
  friend EtaCoefficient operator-(EtaCoefficient a, const EtaCoefficient& b) { return a -= b; }
  friend EtaCoefficient operator*(EtaCoefficient a, const EtaCoefficient& b) { return a *= b; }
  friend EtaCoefficient operator-(const EtaCoefficient& a) { return EtaCoefficient{} - a; }
  friend bool operator==(const EtaCoefficient& a, const EtaCoefficient& b) {
    return a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  void add_term(int power, const ExactComplex& value);
  std::map<int, ExactComplex> terms_;
};

}  // namespace cavcool::opalg
