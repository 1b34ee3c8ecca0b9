#include <gtest/gtest.h>

#include <random>

#include "cavcool/errors.hpp"
#include "cavcool/opalg.hpp"
#include "cavcool/oracle.hpp"

using namespace cavcool;
using namespace cavcool::opalg;

namespace {

using L = Letter;

OperatorPolynomial mono(int xd, int x, int yd, int y, EtaCoefficient c = EtaCoefficient{1}) {
  return OperatorPolynomial{Monomial{static_cast<std::uint8_t>(xd), static_cast<std::uint8_t>(x),
                                     static_cast<std::uint8_t>(yd), static_cast<std::uint8_t>(y)},
                            std::move(c)};
}

EtaCoefficient eta_term(ExactComplex v, int power) { return EtaCoefficient{std::move(v), power}; }

SystemParams weak() {
  SystemParams p;
  p.eta = 0.1;
  p.nu = 0.1;
  p.delta_eff = 0.5;
  p.g_eff = 0.1;
  return p;
}

}  // namespace

TEST(NormalOrder, CanonicalCommutator) {
  const std::vector<L> word{L::X, L::Xdag};
  EXPECT_EQ(normal_order(word), mono(1, 1, 0, 0) + OperatorPolynomial::identity());
}

TEST(NormalOrder, XAndYCommute) {
  const std::vector<L> word{L::Y, L::X};
  EXPECT_EQ(normal_order(word), mono(0, 1, 0, 1));
}

TEST(NormalOrder, NumberSquared) {
  const std::vector<L> word{L::Xdag, L::X, L::Xdag, L::X};
  const auto expected = mono(2, 2, 0, 0) + mono(1, 1, 0, 0);
  EXPECT_EQ(normal_order(word), expected);
  // Already normal ordered input is a fixed point.
  EXPECT_EQ(multiply(expected, OperatorPolynomial::identity()), expected);
}

TEST(Commutator, Examples) {
  EXPECT_TRUE(commutator(mono(1, 1, 0, 0), OperatorPolynomial::y()).is_zero());
  EXPECT_EQ(commutator(OperatorPolynomial::y(), OperatorPolynomial::y_dag()), OperatorPolynomial::identity());
  EXPECT_TRUE(commutator(OperatorPolynomial::x(), OperatorPolynomial::x()).is_zero());
}

TEST(Commutator, Antisymmetric) {
  const auto a = mono(1, 2, 0, 1) + mono(0, 1, 1, 0);
  const auto b = mono(2, 0, 1, 1);
  EXPECT_EQ(commutator(a, b), OperatorPolynomial{} - commutator(b, a));
}

TEST(Multiply, DegreeLimitIsEnforced) {
  AlgebraLimits tight;
  tight.max_exponent = 2;
  EXPECT_THROW(multiply(mono(0, 2, 0, 0), OperatorPolynomial::x(), tight), DegreeOverflow);
  EXPECT_NO_THROW(multiply(mono(0, 2, 0, 0), OperatorPolynomial::x(), AlgebraLimits{}));
}

// Matrix representation of random words against the symbolic normal form.
// At eta = 0 x and y are the plain ladder operators, so truncation only
// corrupts levels within `degree` of the cutoff.
TEST(NormalOrder, MatchesMatrixProductOnProtectedBlock) {
  oracle::TruncatedSpace space;
  space.n_cav = 9;
  space.n_phn = 9;
  SystemParams p = weak();
  p.eta = 0.0;
  const auto ops = oracle::build_operators(space, p);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> letter(0, 3), length(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<L> word(static_cast<std::size_t>(length(rng)));
    oracle::SparseOp product(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
    product.setIdentity();
    for (auto& l : word) {
      l = static_cast<L>(letter(rng));
      const oracle::SparseOp& m = l == L::X ? ops.x : l == L::Xdag ? oracle::SparseOp(ops.x.adjoint())
                                 : l == L::Y ? ops.y : oracle::SparseOp(ops.y.adjoint());
      product = product * m;
    }
    const oracle::DenseOp symbolic = oracle::DenseOp(oracle::represent(normal_order(word), ops, 0.0));
    const oracle::DenseOp direct = oracle::DenseOp(product);
    const int guard = static_cast<int>(word.size());
    double dev = 0.0;
    for (int ic = 0; ic <= space.n_cav - guard; ++ic)
      for (int ip = 0; ip <= space.n_phn - guard; ++ip)
        for (int jc = 0; jc <= space.n_cav - guard; ++jc)
          for (int jp = 0; jp <= space.n_phn - guard; ++jp)
            dev = std::max(dev, std::abs(symbolic(space.index(ic, ip), space.index(jc, jp)) -
                                         direct(space.index(ic, ip), space.index(jc, jp))));
    EXPECT_LT(dev, 1e-12) << "trial " << trial;
  }
}

TEST(Hamiltonian, ZerothOrderSlice) {
  const SystemParams p = weak();
  const auto e = ExactParams::from(p);
  const auto h0 = build_hamiltonian(p).truncated(0);
  const auto expected = EtaCoefficient{ExactComplex{e.g_eff}} * (OperatorPolynomial::x() + OperatorPolynomial::x_dag()) +
                        EtaCoefficient{ExactComplex{e.delta_eff}} * mono(1, 1, 0, 0) +
                        EtaCoefficient{ExactComplex{e.nu}} * mono(0, 0, 1, 1);
  EXPECT_EQ(h0, expected);
}

TEST(Hamiltonian, DriveFree) {
  SystemParams p = weak();
  p.g_eff = 0.0;
  const auto e = ExactParams::from(p);
  const ExactComplex nu{e.nu}, i = ExactComplex::i();
  const auto expected = EtaCoefficient{ExactComplex{e.delta_eff}} * mono(1, 1, 0, 0) +
                        eta_term(nu, 2) * (mono(2, 2, 0, 0) + mono(1, 1, 0, 0)) -
                        eta_term(i * nu, 1) * (mono(1, 1, 0, 1) - mono(1, 1, 1, 0)) +
                        EtaCoefficient{nu} * mono(0, 0, 1, 1);
  EXPECT_EQ(build_hamiltonian(p), expected);
}

TEST(AdjointDerivative, IdentityIsConserved) {
  EXPECT_TRUE(adjoint_derivative(OperatorPolynomial::identity(), weak()).is_zero());
}

TEST(AdjointDerivative, PhaseQuadrature) {
  const SystemParams p = weak();
  const auto e = ExactParams::from(p);
  const ExactComplex nu{e.nu}, i = ExactComplex::i();
  const auto got = adjoint_derivative(OperatorPolynomial::y() + OperatorPolynomial::y_dag(), p);
  const auto expected = eta_term(2 * nu, 1) * mono(1, 1, 0, 0) -
                        EtaCoefficient{i * nu} * (OperatorPolynomial::y() - OperatorPolynomial::y_dag());
  EXPECT_EQ(got, expected);
}

TEST(DeriveRow, PhononRowIsExact) {
  const SystemParams p = weak();
  const auto e = ExactParams::from(p);
  const auto row = derive_row(Moment::n2, p, 2);
  EXPECT_TRUE(row.closed());
  EXPECT_TRUE(row.drive.is_zero());
  EXPECT_EQ(row.coefficient(Moment::k11), eta_term(ExactComplex{e.nu}, 1));
  EXPECT_EQ(row.coefficient(Moment::k12), eta_term(ExactComplex{-e.kappa}, 1));
  EXPECT_EQ(row.coefficient(Moment::n1), eta_term(ExactComplex{e.kappa}, 2));
  for (Moment m : all_moments()) {
    if (m != Moment::k11 && m != Moment::k12 && m != Moment::n1) EXPECT_TRUE(row.coefficient(m).is_zero());
  }
}

TEST(DeriveRow, ZerothOrderXRow) {
  const auto e = ExactParams::from(weak());
  const auto row = derive_row(Moment::k2, weak(), 0);
  EXPECT_EQ(row.drive, EtaCoefficient{ExactComplex{2 * e.g_eff}});
  EXPECT_EQ(row.coefficient(Moment::k1), EtaCoefficient{ExactComplex{e.delta_eff}});
  EXPECT_EQ(row.coefficient(Moment::k2), EtaCoefficient{ExactComplex{-e.kappa / 2}});
}

TEST(DeriveRow, TruncationRespectsOrder) {
  for (const auto& row : derive_symbolic_rows(weak(), 1)) {
    for (Moment m : all_moments()) EXPECT_LE(row.coefficient(m).max_power(), 1);
    EXPECT_LE(row.drive.max_power(), 1);
  }
}

TEST(DeriveRow, StrictClosureThrows) {
  DeriveOptions strict;
  strict.strict = true;
  EXPECT_THROW(derive_row(Moment::k3, weak(), 2, strict), ClosureError);
  EXPECT_NO_THROW(derive_row(Moment::n2, weak(), 2, strict));
}

TEST(DeriveRateSystem, NoCoolingWithoutLambDicke) {
  SystemParams p = weak();
  p.eta = 0.0;
  const auto sys = derive_rate_system(p, 2).system;
  for (Moment m : all_moments()) EXPECT_EQ(sys.coefficient(Moment::n2, m), 0.0);
  EXPECT_EQ(sys.drive_of(Moment::n2), 0.0);
}

TEST(DeriveRateSystem, NoDriveWithoutCoupling) {
  SystemParams p = weak();
  p.g_eff = 0.0;
  const auto sys = derive_rate_system(p, 2).system;
  EXPECT_TRUE(sys.drive.isZero(0.0));
}

TEST(MomentOperators, ExpectationRoundTrip) {
  for (Moment m : all_moments()) {
    const auto& op = moment_operator(m);
    // The operator of a named moment maps back onto that moment only.
    std::map<Moment, ExactComplex> total;
    for (const auto& [mono, coeff] : op.terms()) {
      for (const auto& [target, weight] : expectation_in_moments(mono)) total[target] += coeff.at(0) * weight;
    }
    for (const auto& [target, weight] : total) {
      if (target == m) EXPECT_EQ(weight, ExactComplex(1)) << moment_name(m);
      else EXPECT_TRUE(weight.is_zero()) << moment_name(m) << " leaks into " << moment_name(target);
    }
  }
}
