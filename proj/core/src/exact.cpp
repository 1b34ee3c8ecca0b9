#include "cavcool/exact.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cavcool::opalg {

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("exact_rational: non-finite value");
  if (value == 0.0) return Rational{0};
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // 53 significant bits fit exactly into an int64 after scaling.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational result{scaled};
  boost::multiprecision::cpp_int power = 1;
  power <<= std::abs(exponent);
  if (exponent >= 0) {
    result *= Rational{power};
  } else {
    result /= Rational{power};
  }
  return result;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
  const Rational denom = o.re * o.re + o.im * o.im;
  if (denom == 0) throw std::domain_error("ExactComplex: division by zero");
  Rational r = (re * o.re + im * o.im) / denom;
  im = (im * o.re - re * o.im) / denom;
  re = std::move(r);
  return *this;
}

std::complex<double> ExactComplex::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

std::string ExactComplex::str() const {
  std::ostringstream out;
  if (im == 0) {
    out << re;
  } else if (re == 0) {
    out << im << "i";
  } else {
    out << "(" << re << (im > 0 ? "+" : "-") << abs(im) << "i)";
  }
  return out.str();
}

EtaCoefficient::EtaCoefficient(ExactComplex value, int eta_power) {
  add_term(eta_power, value);
}

void EtaCoefficient::add_term(int power, const ExactComplex& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(power, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool EtaCoefficient::is_real() const {
  for (const auto& [power, value] : terms_) {
    if (!value.is_real()) return false;
  }
  return true;
}

ExactComplex EtaCoefficient::at(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? ExactComplex{} : it->second;
}

EtaCoefficient EtaCoefficient::conj() const {
  EtaCoefficient out;
  for (const auto& [power, value] : terms_) out.terms_.emplace(power, value.conj());
  return out;
}

EtaCoefficient EtaCoefficient::truncated(int max_power) const {
  EtaCoefficient out;
  for (const auto& [power, value] : terms_) {
    if (power <= max_power) out.terms_.emplace(power, value);
  }
  return out;
}

ExactComplex EtaCoefficient::evaluate(const Rational& eta) const {
  ExactComplex sum;
  for (const auto& [power, value] : terms_) {
    Rational scale{1};
    for (int k = 0; k < power; ++k) scale *= eta;
    sum += value * ExactComplex{scale};
  }
  return sum;
}

std::complex<double> EtaCoefficient::evaluate(double eta) const {
  return evaluate(exact_rational(eta)).to_complex();
}

EtaCoefficient& EtaCoefficient::operator+=(const EtaCoefficient& o) {
  for (const auto& [power, value] : o.terms_) add_term(power, value);
  return *this;
}

EtaCoefficient& EtaCoefficient::operator-=(const EtaCoefficient& o) {
  for (const auto& [power, value] : o.terms_) add_term(power, -value);
  return *this;
}

EtaCoefficient& EtaCoefficient::operator*=(const EtaCoefficient& o) {
  EtaCoefficient product;
  for (const auto& [pa, va] : terms_) {
    for (const auto& [pb, vb] : o.terms_) product.add_term(pa + pb, va * vb);
  }
  *this = std::move(product);
  return *this;
}

std::string EtaCoefficient::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [power, value] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << value.str();
    if (power == 1) out << "*eta";
    if (power > 1) out << "*eta^" << power;
  }
  return out.str();
}

}  // namespace cavcool::opalg
