#include "cavcool/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "cavcool/errors.hpp"

namespace cavcool::oracle {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;

SparseOp identity(Index n) {
  SparseOp id(n, n);
  id.setIdentity();
  return id;
}

// Annihilation operator on levels 0..n.
MatrixXd annihilation(int n) {
  MatrixXd a = MatrixXd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

SparseOp kron(const DenseOp& a, const DenseOp& b) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) == Complex{}) continue;
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) {
          const Complex v = a(i, j) * b(k, l);
          if (v != Complex{}) t.emplace_back(i * b.rows() + k, j * b.cols() + l, v);
        }
    }
  SparseOp out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// exp(i s (b + b^+)) on the truncated phonon space via the eigenbasis of the
// truncated generator.
struct PositionExponential {
  Eigen::VectorXd lambda;
  MatrixXd vectors;

  explicit PositionExponential(int n_phn) {
    const MatrixXd b = annihilation(n_phn);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b + b.transpose());
    lambda = eig.eigenvalues();
    vectors = eig.eigenvectors();
  }

  DenseOp operator()(double s) const {
    const Eigen::VectorXcd phase = (Complex(0.0, s) * lambda.cast<Complex>()).array().exp();
    return vectors.cast<Complex>() * phase.asDiagonal() * vectors.transpose().cast<Complex>();
  }
};

std::vector<Index> protected_indices(const TruncatedSpace& requested, const TruncatedSpace& working) {
  std::vector<Index> idx;
  for (int ic = 0; ic <= requested.n_cav - 2; ++ic)
    for (int ip = 0; ip <= requested.n_phn - 2; ++ip) idx.push_back(working.index(ic, ip));
  return idx;
}

double max_abs_on(const SparseOp& m, const std::vector<Index>& idx, Index dim) {
  std::vector<char> keep(static_cast<std::size_t>(dim), 0);
  for (Index i : idx) keep[static_cast<std::size_t>(i)] = 1;
  double worst = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) {
      if (keep[static_cast<std::size_t>(it.row())] && keep[static_cast<std::size_t>(it.col())]) {
        worst = std::max(worst, std::abs(it.value()));
      }
    }
  return worst;
}

double max_abs(const SparseOp& m) {
  double worst = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

SparseOp comm(const SparseOp& a, const SparseOp& b) {
  SparseOp ab = a * b;
  SparseOp ba = b * a;
  return ab - ba;
}

SparseOp power(const SparseOp& m, int k, Index dim) {
  SparseOp out = identity(dim);
  for (int i = 0; i < k; ++i) out = SparseOp(out * m);
  return out;
}

double phonon_norm_estimate(const TruncatedSpace& s, const SystemParams& p) {
  return p.nu * s.n_phn + std::abs(p.delta_eff) * s.n_cav + 2.0 * std::abs(p.g_eff) * std::sqrt(s.n_cav + 1.0) +
         p.kappa * s.n_cav;
}

}  // namespace

void TruncatedSpace::validate() const {
  if (n_cav < 2 || n_phn < 2) throw InvalidParams("truncated space needs cutoffs n_cav >= 2 and n_phn >= 2");
  if (dim() > max_dim) {
    std::ostringstream msg;
    msg << "truncated space dimension " << dim() << " exceeds the configured bound " << max_dim;
    throw DimensionOverflow(msg.str());
  }
}

OperatorSet build_operators(const TruncatedSpace& space, const SystemParams& p) {
  space.validate();
  if (p.eta < 0.0) throw InvalidParams("eta must be non-negative");
  const int dc = space.cav_dim(), dp = space.phn_dim();
  const auto dim = static_cast<Index>(space.dim());
  const DenseOp ic = DenseOp::Identity(dc, dc), ip = DenseOp::Identity(dp, dp);
  const DenseOp a_c = annihilation(space.n_cav).cast<Complex>();
  const DenseOp a_p = annihilation(space.n_phn).cast<Complex>();
  const PositionExponential expo(space.n_phn);
  const DenseOp d_p = expo(-p.eta);

  OperatorSet ops;
  ops.space = space;
  ops.b = kron(ic, a_p);
  ops.c = kron(a_c, ip);
  ops.D = kron(ic, d_p);
  ops.x = kron(a_c, d_p);
  const SparseOp n_c = kron(a_c.adjoint() * a_c, ip);
  ops.y = ops.b - Complex(0.0, p.eta) * n_c;

  std::vector<Eigen::Triplet<Complex>> u;
  for (int n = 0; n < dc; ++n) {
    const DenseOp block = expo(p.eta * n);
    for (int i = 0; i < dp; ++i)
      for (int j = 0; j < dp; ++j)
        if (block(i, j) != Complex{}) u.emplace_back(space.index(n, i), space.index(n, j), block(i, j));
  }
  ops.U = SparseOp(dim, dim);
  ops.U.setFromTriplets(u.begin(), u.end());

  const Complex g(p.g_eff, 0.0);
  const SparseOp xd = ops.x.adjoint();
  const SparseOp yd = ops.y.adjoint();
  const SparseOp n_b = kron(ic, a_p.adjoint() * a_p);
  ops.H_eff = g * ops.x + std::conj(g) * xd + p.nu * n_b + p.delta_eff * n_c;

  const SparseOp nx = xd * ops.x;
  const SparseOp nx2 = nx * nx;
  const SparseOp ydy = yd * ops.y;
  const SparseOp ymy = ops.y - yd;
  const SparseOp mixed = nx * ymy;
  ops.H_xy = g * ops.x + std::conj(g) * xd + p.delta_eff * nx + (p.eta * p.eta * p.nu) * nx2 -
             Complex(0.0, p.eta * p.nu) * mixed + p.nu * ydy;
  return ops;
}

SparseOp represent(const opalg::OperatorPolynomial& poly, const OperatorSet& ops, double eta) {
  const auto dim = static_cast<Index>(ops.space.dim());
  const SparseOp xd = ops.x.adjoint(), yd = ops.y.adjoint();
  SparseOp out(dim, dim);
  for (const auto& [mono, coeff] : poly.terms()) {
    const Complex c = coeff.evaluate(eta);
    if (c == Complex{}) continue;
    SparseOp term = power(xd, mono.px_dag, dim);
    term = SparseOp(term * power(ops.x, mono.px, dim));
    term = SparseOp(term * power(yd, mono.py_dag, dim));
    term = SparseOp(term * power(ops.y, mono.py, dim));
    out += c * term;
  }
  return out;
}

double IdentityReport::max_deviation() const {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, c.max_deviation);
  return worst;
}

IdentityReport verify_identities(const TruncatedSpace& space, const SystemParams& p, const IdentityOptions& opt) {
  space.validate();
  TruncatedSpace working = space;
  working.n_cav += std::max(0, opt.pad_cav);
  working.n_phn += std::max(0, opt.pad_phn);
  working.max_dim = std::max(working.max_dim, working.dim());
  const OperatorSet o = build_operators(working, p);
  const auto dim = static_cast<Index>(working.dim());
  const auto idx = protected_indices(space, working);
  const SparseOp id = identity(dim);
  const Complex ie(0.0, p.eta);
  const double e2 = p.eta * p.eta;

  const SparseOp bd = o.b.adjoint(), cd = o.c.adjoint(), xd = o.x.adjoint(), yd = o.y.adjoint();
  const SparseOp Dd = o.D.adjoint(), Ud = o.U.adjoint();
  const SparseOp nb = bd * o.b;
  const SparseOp nx = xd * o.x;
  const SparseOp bmb = o.b - bd;

  IdentityReport r;
  r.requested = space;
  r.working = working;
  auto whole = [&](std::string name, const SparseOp& diff) {
    r.checks.push_back({std::move(name), max_abs(diff), true});
  };
  auto prot = [&](std::string name, const SparseOp& diff) {
    r.checks.push_back({std::move(name), max_abs_on(diff, idx, dim), false});
  };

  whole("D^+ D = 1", SparseOp(Dd * o.D) - id);
  whole("D D^+ = 1", SparseOp(o.D * Dd) - id);
  whole("U^+ U = 1", SparseOp(Ud * o.U) - id);
  whole("U U^+ = 1", SparseOp(o.U * Ud) - id);
  prot("D b D^+ = b + i eta", SparseOp(SparseOp(o.D * o.b) * Dd) - o.b - ie * id);
  prot("D^+ b D = b - i eta", SparseOp(SparseOp(Dd * o.b) * o.D) - o.b + ie * id);
  prot("[x, x^+] = 1", comm(o.x, xd) - id);
  prot("[y, y^+] = 1", comm(o.y, yd) - id);
  prot("[x, y] = 0", comm(o.x, o.y));
  prot("[x^+, y] = 0", comm(xd, o.y));
  prot("[x, b] = i eta x", comm(o.x, o.b) - ie * o.x);
  prot("[x, b^+] = -i eta x", comm(o.x, bd) + ie * o.x);
  prot("[x^+, b] = -i eta x^+", comm(xd, o.b) + ie * xd);
  prot("[x^+, b^+] = i eta x^+", comm(xd, bd) - ie * xd);
  prot("[x, b^+b] = -i eta x (b - b^+) - eta^2 x", comm(o.x, nb) + ie * SparseOp(o.x * bmb) + e2 * o.x);
  prot("[x^+, b^+b] = i eta (b - b^+) x^+ + eta^2 x^+", comm(xd, nb) - ie * SparseOp(bmb * xd) - e2 * xd);
  prot("[x^+x, b] = 0", comm(nx, o.b));
  prot("[x^+x, b^+] = 0", comm(nx, bd));
  prot("[x^+x, b^+b] = 0", comm(nx, nb));
  prot("x^+x = c^+c", nx - SparseOp(cd * o.c));
  prot("x = U c U^+", o.x - SparseOp(SparseOp(o.U * o.c) * Ud));
  prot("y = U b U^+", o.y - SparseOp(SparseOp(o.U * o.b) * Ud));
  prot("H_eff = H_xy", o.H_eff - o.H_xy);
  return r;
}

double DensityMatrix::trace_error() const { return std::abs(rho.trace() - Complex(1.0, 0.0)); }

std::vector<std::string> DensityMatrix::validate() const {
  std::vector<std::string> issues;
  const auto n = static_cast<Index>(space.dim());
  if (rho.rows() != n || rho.cols() != n) {
    issues.emplace_back("density matrix dimension does not match the space");
    return issues;
  }
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) issues.push_back("not Hermitian (max |rho - rho^+| = " + std::to_string(herm) + ")");
  if (trace_error() > 1e-10) issues.push_back("trace differs from 1 by " + std::to_string(trace_error()));
  const DenseOp h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOp> eig(h, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-8) {
    issues.push_back("not positive (min eigenvalue " + std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
  return issues;
}

DensityMatrix initial_state(const TruncatedSpace& space, const Occupation& occ) {
  space.validate();
  if (!(occ.value >= 0.0) || !std::isfinite(occ.value)) throw InvalidParams("phonon occupation must be >= 0");
  if (occ.value > space.n_phn - 3) {
    std::ostringstream msg;
    msg << "phonon occupation " << occ.value << " needs a cutoff of at least " << std::ceil(occ.value) + 3
        << " (have " << space.n_phn << ")";
    throw CutoffTooSmall(msg.str());
  }
  const int dp = space.phn_dim();
  Eigen::VectorXd pops = Eigen::VectorXd::Zero(dp);
  if (occ.kind == Occupation::Kind::Fock) {
    if (occ.value != std::floor(occ.value)) throw InvalidParams("Fock level must be an integer");
    pops(static_cast<Index>(occ.value)) = 1.0;
  } else if (occ.value == 0.0) {
    pops(0) = 1.0;
  } else {
    // Truncated geometric weights r^n, with r chosen so the truncated mean is exact.
    auto weights = [dp](double r) {
      Eigen::VectorXd w(dp);
      w(0) = 1.0;
      for (int k = 1; k < dp; ++k) w(k) = w(k - 1) * r;
      return Eigen::VectorXd(w / w.sum());
    };
    auto mean_gap = [&](double r) {
      const Eigen::VectorXd w = weights(r);
      return w.dot(Eigen::VectorXd::LinSpaced(dp, 0.0, dp - 1.0)) - occ.value;
    };
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); };
    const double guess = occ.value / (1.0 + occ.value);
    const auto root = boost::math::tools::toms748_solve(mean_gap, 1e-12, std::max(2.0, 4.0 * guess), tol, iters);
    pops = weights(0.5 * (root.first + root.second));
  }
  DensityMatrix d;
  d.space = space;
  const auto n = static_cast<Index>(space.dim());
  d.rho = DenseOp::Zero(n, n);
  for (int k = 0; k < dp; ++k) d.rho(space.index(0, k), space.index(0, k)) = pops(k);
  return d;
}

MomentEvaluator::MomentEvaluator(const OperatorSet& ops, double eta) : space_(ops.space) {
  for (Moment m : all_moments()) moment_ops_.push_back(represent(opalg::moment_operator(m), ops, eta));
  phonon_number_ = SparseOp(ops.b.adjoint() * ops.b);
}

OracleSample MomentEvaluator::evaluate(const DenseOp& rho) const {
  auto expect = [&rho](const SparseOp& a) {
    Complex s{};
    for (Index k = 0; k < a.outerSize(); ++k)
      for (SparseOp::InnerIterator it(a, k); it; ++it) s += it.value() * rho(it.col(), it.row());
    return s;
  };
  OracleSample out;
  for (std::size_t i = 0; i < moment_ops_.size(); ++i) {
    const Complex v = expect(moment_ops_[i]);
    out.moments.values(static_cast<Index>(i)) = v.real();
    out.max_moment_imag = std::max(out.max_moment_imag, std::abs(v.imag()));
  }
  out.mean_phonon = expect(phonon_number_).real();
  out.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  for (int ic = 0; ic < space_.cav_dim(); ++ic)
    for (int ip = 0; ip < space_.phn_dim(); ++ip) {
      const double pop = rho(space_.index(ic, ip), space_.index(ic, ip)).real();
      if (ic >= space_.n_cav - 1) out.cav_edge_population += pop;
      if (ip >= space_.n_phn - 1) out.phn_edge_population += pop;
    }
  return out;
}

OracleRun lindblad_evolve(const DensityMatrix& rho0, const SystemParams& params, std::span<const double> times,
                          const EvolveOptions& options) {
  const auto issues = rho0.validate();
  if (!issues.empty()) throw InvalidParams("initial density matrix invalid: " + issues.front());
  const TruncatedSpace& space = rho0.space;
  const OperatorSet ops = build_operators(space, params);
  const auto n = static_cast<Index>(space.dim());
  const SparseOp nc = SparseOp(ops.c.adjoint() * ops.c);
  const SparseOp k_op = ops.H_eff - Complex(0.0, 0.5 * params.kappa) * nc;
  const SparseOp c = ops.c;
  const SparseOp c_dag = ops.c.adjoint();
  const double kappa = params.kappa;
  const MomentEvaluator moments(ops, params.eta);

  OdeRhs rhs = [&, tmp = DenseOp(n, n), jump = DenseOp(n, n)](const OdeState& x, OdeState& dxdt, double) mutable {
    Eigen::Map<const DenseOp> r(reinterpret_cast<const Complex*>(x.data()), n, n);
    Eigen::Map<DenseOp> dr(reinterpret_cast<Complex*>(dxdt.data()), n, n);
    tmp.noalias() = k_op * r;
    jump.noalias() = c * r;
    dr.noalias() = jump * c_dag;
    dr *= kappa;
    dr.noalias() += Complex(0.0, -1.0) * tmp;
    dr.noalias() += Complex(0.0, 1.0) * tmp.adjoint();
  };

  OdeState x0(static_cast<std::size_t>(2 * n * n));
  Eigen::Map<DenseOp>(reinterpret_cast<Complex*>(x0.data()), n, n) = rho0.rho;

  OracleRun run;
  run.samples.resize(times.size());
  integrate_samples(rhs, std::move(x0), times, options.policy, phonon_norm_estimate(space, params),
                    [&](std::size_t i, const OdeState& x) {
                      Eigen::Map<const DenseOp> r(reinterpret_cast<const Complex*>(x.data()), n, n);
                      OracleSample s = moments.evaluate(r);
                      s.t = times[i];
                      const double edge = std::max(s.cav_edge_population, s.phn_edge_population);
                      if (edge > options.saturation_threshold) {
                        std::ostringstream msg;
                        msg << "cutoff saturation at t = " << s.t << ": population " << edge
                            << " within two levels of a cutoff (cavity " << s.cav_edge_population << ", phonon "
                            << s.phn_edge_population << ")";
                        throw CutoffSaturation(msg.str());
                      }
                      run.samples[i] = s;
                      if (options.keep_states) run.states.push_back({space, DenseOp(r)});
                    });
  return run;
}

}  // namespace cavcool::oracle
