#pragma once

// Eigenvalues of non-Hermitian operator matrices, real symmetric spectra,
// and the filter separating bound states of the truncated problem from the
// discretized continuum along [0, inf).

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ltlab/discretize.hpp"

namespace ltlab {

struct ComplexSpectrum {
  /// All N eigenvalues; algebraic multiplicity appears as repetition.
  std::vector<cplx> values;
  /// Backward-error estimate: the values are exact for some M + E with
  /// ||E||_F <= residual_bound.
  double residual_bound = 0.0;
};

struct DenseSolverOptions {
  bool balance = true;
  /// Total QR sweep cap is sweeps_per_dimension * N.
  int sweeps_per_dimension = 30;
  /// Exceptional shift after this many sweeps without deflation.
  int exceptional_shift_period = 10;
};

/// Balancing, Householder reduction to Hessenberg form and single-shift
/// complex QR with deflation. Throws SolverError when the sweep cap is hit.
ComplexSpectrum eigenvalues_dense(const Eigen::MatrixXcd& m, const DenseSolverOptions& options = {});

/// Eigenvalues of a complex symmetric tridiagonal matrix (diagonal `diag`,
/// sub/super-diagonal `offdiag`) by implicit QL with complex orthogonal
/// rotations. Returns std::nullopt when a rotation breaks down or the
/// transformation growth becomes too large to trust.
std::optional<ComplexSpectrum> eigenvalues_symmetric_tridiagonal(const Eigen::VectorXcd& diag,
                                                                 const Eigen::VectorXcd& offdiag);

/// Structure-aware solve: tridiagonal operators use the QL path (falling back
/// to the dense path), everything else the dense path.
ComplexSpectrum eigenvalues(const OperatorMatrix& m, const DenseSolverOptions& options = {});

/// Ascending eigenvalues of a real symmetric matrix. Throws DomainError if
/// the input is not symmetric to 1e-12 times its largest entry.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXd& h);

/// Spectrum of K + diag(Re V + alpha Im V) without forming a dense matrix
/// when the operator is tridiagonal.
std::vector<double> hermitian_combination_eigenvalues(const OperatorMatrix& m, double alpha);

/// sum_j (v_j)_-^gamma; gamma = 0 counts strictly negative values.
double riesz_mean_neg(std::span<const double> values, double gamma);

/// Normalized eigenvector for an (approximate) eigenvalue by inverse iteration.
Eigen::VectorXcd eigenvector(const OperatorMatrix& m, cplx lambda);

enum class RejectReason { NearHalfLine, Unresolved, Delocalized, Unstable };

std::string to_string(RejectReason reason);

struct RejectedEigenvalue {
  cplx value;
  RejectReason reason;
};

struct FilterPolicy {
  /// Distance-to-[0, inf) threshold; when unset the default
  /// max(10 residual_bound, 1e-3 max|V|) is used.
  std::optional<double> tau;
  /// Largest admissible k h, where k = sqrt|lambda| for the Laplacian and
  /// |lambda| for |p|. Larger values mean fewer than about six nodes per
  /// wavelength: a lattice mode, not an approximation of a continuum
  /// eigenvalue. Unset disables the check.
  std::optional<double> resolution_max = 1.0;
  /// Largest eigenvector mass allowed in the outer 10% shell of the box;
  /// unset disables the check.
  std::optional<double> boundary_fraction_max = 0.01;
  bool stability_check = false;
  double stability_rel_tol = 1e-3;
  /// Box enlargement used by the stability check (mesh width fixed).
  double stability_enlargement = 1.25;
};

struct FilteredSpectrum {
  std::vector<cplx> kept;
  std::vector<RejectedEigenvalue> rejected;
  FilterPolicy policy;
  /// tau actually applied.
  double tau = 0.0;
};

/// Builds the operator for an arbitrary grid (same potential, same kinetic).
using OperatorFactory = std::function<OperatorMatrix(const GridSpec&)>;

struct FilterContext {
  /// Source of eigenvectors (inverse iteration) and of the potential scale.
  const OperatorMatrix* op = nullptr;
  /// Eigenvectors aligned with the spectrum values; takes precedence over `op`.
  std::vector<Eigen::VectorXcd> vectors;
  /// Needed when policy.stability_check is set.
  OperatorFactory rebuild;
};

FilteredSpectrum filter_spectrum(const ComplexSpectrum& spectrum, const GridSpec& grid,
                                 const FilterPolicy& policy, const FilterContext& context = {});

/// Convenience: eigenvalues + filter for one operator; `rebuild` may be empty
/// when the policy does not ask for stability checks.
FilteredSpectrum solve_and_filter(const OperatorMatrix& m, const FilterPolicy& policy,
                                  const OperatorFactory& rebuild = {}, ComplexSpectrum* full = nullptr);

/// Fraction of |psi|^2 on nodes with some |x_i| > 0.9 L.
double boundary_mass_fraction(const GridSpec& grid, const Eigen::VectorXcd& psi);

/// Greedy nearest-neighbour pairing (ties by index); returns the largest
/// pair distance. Inputs must have equal length.
double max_pairing_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace ltlab
