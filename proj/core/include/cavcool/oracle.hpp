#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "cavcool/linear_ode.hpp"
#include "cavcool/moments.hpp"
#include "cavcool/opalg.hpp"
#include "cavcool/params.hpp"

/// Ground truth: the cavity-phonon master equation on a truncated two-mode
/// Fock space, and matrix checks of the x/y operator identities.
namespace cavcool::oracle {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using DenseOp = Eigen::MatrixXcd;

/// Cavity levels 0..n_cav, phonon levels 0..n_phn; basis index
/// ic * (n_phn + 1) + ip.
struct TruncatedSpace {
  int n_cav = 6;
  int n_phn = 24;
  std::size_t max_dim = 4096;

  int cav_dim() const { return n_cav + 1; }
  int phn_dim() const { return n_phn + 1; }
  std::size_t dim() const { return static_cast<std::size_t>(cav_dim()) * static_cast<std::size_t>(phn_dim()); }
  Eigen::Index index(int ic, int ip) const { return static_cast<Eigen::Index>(ic) * phn_dim() + ip; }

  /// Throws InvalidParams for cutoffs below 2, DimensionOverflow above max_dim.
  void validate() const;
};

struct OperatorSet {
  TruncatedSpace space;
  SparseOp b, c, D, x, y, U;
  SparseOp H_eff;  // g D c + h.c. + nu b^+b + delta c^+c
  SparseOp H_xy;   // the same Hamiltonian written in x and y
};

/// D and U come from the eigendecomposition of the truncated b + b^+, so
/// they are unitary on the truncated space to rounding.
OperatorSet build_operators(const TruncatedSpace& space, const SystemParams& params);

/// Matrix of a normal-ordered polynomial, with eta substituted.
SparseOp represent(const opalg::OperatorPolynomial& p, const OperatorSet& ops, double eta);

struct IdentityCheck {
  std::string name;
  double max_deviation = 0.0;
  /// Whether the deviation was measured on the whole working space.
  bool whole_space = false;
};

struct IdentityReport {
  TruncatedSpace requested;
  TruncatedSpace working;
  std::vector<IdentityCheck> checks;
  double max_deviation() const;
};

struct IdentityOptions {
  /// Extra levels per mode beyond the requested cutoffs. The displacement
  /// operators couple every phonon level, so a truncated exponential is only
  /// accurate well below the cutoff; padding pushes that error below rounding
  /// on the requested space.
  int pad_phn = 30;
  int pad_cav = 4;
};

/// Checks every operator identity on matrix elements between requested
/// basis states at least two quanta below both requested cutoffs.
IdentityReport verify_identities(const TruncatedSpace& space, const SystemParams& params,
                                 const IdentityOptions& options = {});

struct DensityMatrix {
  TruncatedSpace space;
  DenseOp rho;

  /// Hermitian to 1e-12, unit trace to 1e-10, min eigenvalue >= -1e-8.
  std::vector<std::string> validate() const;
  double trace_error() const;
};

struct Occupation {
  enum class Kind { Fock, Thermal } kind = Kind::Fock;
  double value = 0.0;

  static Occupation fock(int n) { return {Kind::Fock, static_cast<double>(n)}; }
  static Occupation thermal(double mean) { return {Kind::Thermal, mean}; }
};

/// Cavity vacuum times a phonon Fock state or a truncated thermal state whose
/// mean is exactly `value`. Throws CutoffTooSmall unless the occupation sits at
/// least three levels below the phonon cutoff.
DensityMatrix initial_state(const TruncatedSpace& space, const Occupation& occupation);

struct OracleSample {
  double t = 0.0;
  MomentVector moments;
  double mean_phonon = 0.0;  // <b^+ b>
  double trace_error = 0.0;
  double cav_edge_population = 0.0;  // top two cavity levels
  double phn_edge_population = 0.0;  // top two phonon levels
  double max_moment_imag = 0.0;
};

struct OracleRun {
  std::vector<OracleSample> samples;
  std::vector<DensityMatrix> states;  // only when requested
};

struct EvolveOptions {
  StepPolicy policy{};
  double saturation_threshold = 1e-6;
  bool keep_states = false;
};

/// Integrates  rho' = -i[H, rho] - (kappa/2){c^+c, rho} + kappa c rho c^+.
/// Throws CutoffSaturation when population within two levels of a cutoff
/// exceeds the threshold at any sample.
OracleRun lindblad_evolve(const DensityMatrix& rho0, const SystemParams& params, std::span<const double> times,
                          const EvolveOptions& options = {});

/// The 25 named moments, <b^+ b>, and the largest imaginary part of any moment.
struct MomentEvaluator {
  explicit MomentEvaluator(const OperatorSet& ops, double eta);
  OracleSample evaluate(const DenseOp& rho) const;

 private:
  std::vector<SparseOp> moment_ops_;
  SparseOp phonon_number_;
  TruncatedSpace space_;
};

}  // namespace cavcool::oracle
