#pragma once

// Lattice discretization of H = K + V on a box: grids, complex potentials,
// their integrals, and the operator matrix (finite-difference Laplacian with
// Dirichlet walls, or the Fourier multiplier |p| on a periodic interval).

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ltlab {

using cplx = std::complex<double>;

enum class Boundary { Dirichlet, Periodic };

struct GridSpec {
  static constexpr std::size_t kDefaultMaxDimension = 5000;

  int dim = 1;
  double half_length = 1.0;  // box is [-L, L]^dim
  int points_per_dim = 2;
  Boundary boundary = Boundary::Dirichlet;
  /// Largest admissible matrix dimension n^dim.
  std::size_t max_dimension = kDefaultMaxDimension;

  /// 2L/(n+1) for Dirichlet (interior nodes only), 2L/n for Periodic.
  double mesh() const;
  std::size_t size() const;
  /// Coordinate of node k along one axis.
  double node(int k) const;
  /// Throws DomainError on any violated invariant.
  void validate() const;

  /// Box enlarged by roughly `factor` at identical mesh width.
  GridSpec enlarged(double factor) const;

  bool operator==(const GridSpec&) const = default;
};

enum class TermKind { Gaussian, Box, Sampled };

struct PotentialTerm {
  TermKind kind = TermKind::Gaussian;
  cplx amplitude{1.0, 0.0};
  std::vector<double> center;  // length dim (Gaussian, Box)
  /// Gaussian standard width w_i, or Box half-width a_i; length dim.
  std::vector<double> width;
  /// Lattice values for Sampled terms (row-major node order), scaled by amplitude.
  std::vector<cplx> samples;
  std::string path;  // provenance of `samples`, informational

  static PotentialTerm gaussian(cplx amplitude, std::vector<double> center, std::vector<double> width);
  static PotentialTerm box(cplx amplitude, std::vector<double> center, std::vector<double> half_width);
};

struct PotentialSpec {
  int dim = 1;
  std::vector<PotentialTerm> terms;

  /// Pointwise value of the analytic terms at x (Sampled terms are ignored).
  cplx value_at(std::span<const double> x) const;
  PotentialSpec conj() const;
  PotentialSpec scaled(cplx factor) const;
  void validate() const;
};

/// Narrow box approximating -c delta(x) in d = 1: amplitude -c/(2w) on [-w, w].
PotentialSpec delta_like(cplx strength, double half_width, double center = 0.0);

enum class Sampling {
  Pointwise,    // V(x_k)
  CellAverage,  // average of V over the lattice cell around x_k
};

struct SampledPotential {
  GridSpec grid;
  std::vector<cplx> values;  // row-major lattice order, length grid.size()

  SampledPotential conj() const;
  double max_abs() const;
};

SampledPotential sample_potential(const PotentialSpec& spec, const GridSpec& grid,
                                  Sampling rule = Sampling::Pointwise);

/// Lattice node coordinates of flat index `index`.
std::vector<double> node_coordinates(const GridSpec& grid, std::size_t index);

enum class IntegrandPart {
  Abs,      // |V|^p
  ReNeg,    // ((Re V)_-)^p
  Refined,  // (((Re V)_- + |Im V|) / sqrt 2)^p
};

/// h^d-weighted lattice sum of the chosen integrand.
double potential_integral(const SampledPotential& v, double p, IntegrandPart part);

enum class Kinetic { Laplacian, Relativistic };

/// K + diag(V) with K real symmetric. Holds the kinetic part in structured
/// form; `dense()` materializes the full complex matrix.
class OperatorMatrix {
 public:
  OperatorMatrix(GridSpec grid, Kinetic kind, std::vector<cplx> potential,
                 Eigen::MatrixXd relativistic_kinetic = {});

  const GridSpec& grid() const { return grid_; }
  Kinetic kinetic_kind() const { return kind_; }
  std::size_t dimension() const { return potential_.size(); }
  std::span<const cplx> potential() const { return potential_; }

  /// Real symmetric kinetic matrix K.
  Eigen::MatrixXd kinetic_dense() const;
  Eigen::MatrixXcd dense() const;
  Eigen::SparseMatrix<cplx> sparse() const;

  /// d = 1 Dirichlet Laplacian operators are tridiagonal.
  bool is_tridiagonal() const { return kind_ == Kinetic::Laplacian && grid_.dim == 1; }
  /// Main diagonal 2/h^2 + V_k (tridiagonal case).
  Eigen::VectorXcd tridiagonal_diagonal() const;
  /// Constant off-diagonal -1/h^2 (tridiagonal case).
  double tridiagonal_offdiagonal() const;

  cplx trace() const;
  double norm_frobenius() const;

  /// Entrywise conjugate, i.e. the operator with conj(V).
  OperatorMatrix conj() const;
  /// Operator with V + t (spectrum shifted by t).
  OperatorMatrix shifted(double t) const;
  /// Same kinetic part with a replaced potential.
  OperatorMatrix with_potential(std::vector<cplx> potential) const;

 private:
  GridSpec grid_;
  Kinetic kind_;
  std::vector<cplx> potential_;
  Eigen::MatrixXd relativistic_;  // empty for Laplacian
};

/// Laplacian requires Dirichlet; Relativistic requires dim = 1 and Periodic.
OperatorMatrix build_operator(const GridSpec& grid, const SampledPotential& v, Kinetic kinetic);

/// Real symmetric K + diag(Re V + alpha Im V).
Eigen::MatrixXd hermitian_combination(const OperatorMatrix& m, double alpha);

/// (M + M*)/2 + alpha (M - M*)/(2i) from a dense matrix; Hermitian for any M.
Eigen::MatrixXcd hermitian_part_tilted(const Eigen::MatrixXcd& m, double alpha);

}  // namespace ltlab
