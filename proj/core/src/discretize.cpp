#include "ltlab/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

std::size_t ipow(std::size_t base, int exponent) {
  std::size_t value = 1;
  for (int i = 0; i < exponent; ++i) value *= base;
  return value;
}

// Lattice multi-index of flat index (row-major: first axis slowest).
void unflatten(std::size_t index, int n, int dim, int* out) {
  for (int axis = dim - 1; axis >= 0; --axis) {
    out[axis] = static_cast<int>(index % static_cast<std::size_t>(n));
    index /= static_cast<std::size_t>(n);
  }
}

double box_overlap_fraction(double x, double h, double center, double half_width) {
  const double lo = std::max(x - 0.5 * h, center - half_width);
  const double hi = std::min(x + 0.5 * h, center + half_width);
  return std::max(0.0, hi - lo) / h;
}

double gaussian_cell_average(double x, double h, double center, double width) {
  const double scale = std::numbers::sqrt2 * width;
  const double upper = std::erf((x + 0.5 * h - center) / scale);
  const double lower = std::erf((x - 0.5 * h - center) / scale);
  return 0.5 * std::sqrt(std::numbers::pi) * scale * (upper - lower) / h;
}

cplx term_value(const PotentialTerm& term, std::span<const double> x, double h, Sampling rule) {
  double factor = 1.0;
  for (std::size_t axis = 0; axis < x.size(); ++axis) {
    const double c = term.center[axis];
    const double w = term.width[axis];
    if (term.kind == TermKind::Gaussian) {
      if (rule == Sampling::CellAverage) {
        factor *= gaussian_cell_average(x[axis], h, c, w);
      } else {
        const double z = (x[axis] - c) / w;
        factor *= std::exp(-0.5 * z * z);
      }
    } else {
      if (rule == Sampling::CellAverage) {
        factor *= box_overlap_fraction(x[axis], h, c, w);
      } else if (std::abs(x[axis] - c) > w) {
        return {0.0, 0.0};
      }
    }
  }
  return term.amplitude * factor;
}

// First row of the circulant |p| matrix: c(k) = (1/n) sum_m |kappa_m| cos(2 pi m k / n).
std::vector<double> relativistic_symbol_row(const GridSpec& grid) {
  const int n = grid.points_per_dim;
  const double L = grid.half_length;
  const int m_lo = -(n / 2);
  const int m_hi = (n % 2 == 0) ? n / 2 - 1 : n / 2;
  std::vector<double> row(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int m = m_lo; m <= m_hi; ++m) {
      const double kappa = std::numbers::pi * m / L;
      // Reduce m*k mod n before the trig call so phases stay exact.
      const long phase = (static_cast<long>(m) * k) % n;
      sum += std::abs(kappa) * std::cos(2.0 * std::numbers::pi * static_cast<double>(phase) / n);
    }
    row[static_cast<std::size_t>(k)] = sum / n;
  }
  return row;
}

}  // namespace

double GridSpec::mesh() const {
  return boundary == Boundary::Dirichlet ? 2.0 * half_length / (points_per_dim + 1)
                                         : 2.0 * half_length / points_per_dim;
}

std::size_t GridSpec::size() const { return ipow(static_cast<std::size_t>(std::max(points_per_dim, 0)), dim); }

double GridSpec::node(int k) const {
  const double h = mesh();
  return boundary == Boundary::Dirichlet ? -half_length + (k + 1) * h : -half_length + k * h;
}

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw DomainError("grid dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  if (!(half_length > 0.0) || !std::isfinite(half_length)) throw DomainError("grid half_length must be positive");
  const int min_points = boundary == Boundary::Periodic ? 2 : 1;
  if (points_per_dim < min_points) {
    throw DomainError("grid points_per_dim must be >= " + std::to_string(min_points));
  }
  if (size() > max_dimension) {
    throw DomainError("grid dimension n^d = " + std::to_string(size()) + " exceeds cap " +
                      std::to_string(max_dimension));
  }
}

GridSpec GridSpec::enlarged(double factor) const {
  // Grow by the same whole number of cells on each side so that every old
  // node is still a node; otherwise narrow features get resampled.
  GridSpec bigger = *this;
  const double h = mesh();
  const int cells = boundary == Boundary::Dirichlet ? points_per_dim + 1 : points_per_dim;
  const int m = std::max(1, static_cast<int>(std::lround(0.5 * (factor - 1.0) * cells)));
  bigger.points_per_dim = points_per_dim + 2 * m;
  bigger.half_length = half_length + m * h;
  bigger.max_dimension = std::max(max_dimension, bigger.size());
  return bigger;
}

PotentialTerm PotentialTerm::gaussian(cplx amplitude, std::vector<double> center, std::vector<double> width) {
  PotentialTerm t;
  t.kind = TermKind::Gaussian;
  t.amplitude = amplitude;
  t.center = std::move(center);
  t.width = std::move(width);
  return t;
}

PotentialTerm PotentialTerm::box(cplx amplitude, std::vector<double> center, std::vector<double> half_width) {
  PotentialTerm t;
  t.kind = TermKind::Box;
  t.amplitude = amplitude;
  t.center = std::move(center);
  t.width = std::move(half_width);
  return t;
}

cplx PotentialSpec::value_at(std::span<const double> x) const {
  cplx sum{0.0, 0.0};
  for (const auto& term : terms) {
    if (term.kind == TermKind::Sampled) continue;
    sum += term_value(term, x, 1.0, Sampling::Pointwise);
  }
  return sum;
}

PotentialSpec PotentialSpec::conj() const {
  PotentialSpec out = *this;
  for (auto& term : out.terms) {
    term.amplitude = std::conj(term.amplitude);
    for (auto& s : term.samples) s = std::conj(s);
  }
  return out;
}

PotentialSpec PotentialSpec::scaled(cplx factor) const {
  PotentialSpec out = *this;
  for (auto& term : out.terms) term.amplitude *= factor;
  return out;
}

void PotentialSpec::validate() const {
  if (dim < 1 || dim > 3) throw FormatError("potential dim must be 1, 2 or 3");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& term = terms[i];
    const std::string where = "potential term " + std::to_string(i);
    if (!std::isfinite(term.amplitude.real()) || !std::isfinite(term.amplitude.imag())) {
      throw FormatError(where + ": non-finite amplitude");
    }
    if (term.kind == TermKind::Sampled) continue;
    if (term.center.size() != static_cast<std::size_t>(dim) || term.width.size() != static_cast<std::size_t>(dim)) {
      throw FormatError(where + ": center and width need " + std::to_string(dim) + " entries");
    }
    for (double w : term.width) {
      if (!(w > 0.0) || !std::isfinite(w)) throw FormatError(where + ": widths must be positive");
    }
  }
}

PotentialSpec delta_like(cplx strength, double half_width, double center) {
  if (!(half_width > 0.0)) throw DomainError("delta_like: half_width must be positive");
  PotentialSpec spec;
  spec.dim = 1;
  spec.terms.push_back(PotentialTerm::box(-strength / (2.0 * half_width), {center}, {half_width}));
  return spec;
}

SampledPotential SampledPotential::conj() const {
  SampledPotential out = *this;
  for (auto& v : out.values) v = std::conj(v);
  return out;
}

double SampledPotential::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> node_coordinates(const GridSpec& grid, std::size_t index) {
  int idx[3] = {0, 0, 0};
  unflatten(index, grid.points_per_dim, grid.dim, idx);
  std::vector<double> x(static_cast<std::size_t>(grid.dim));
  for (int axis = 0; axis < grid.dim; ++axis) x[static_cast<std::size_t>(axis)] = grid.node(idx[axis]);
  return x;
}

SampledPotential sample_potential(const PotentialSpec& spec, const GridSpec& grid, Sampling rule) {
  grid.validate();
  spec.validate();
  if (spec.dim != grid.dim) {
    throw DomainError("potential dim " + std::to_string(spec.dim) + " does not match grid dim " +
                      std::to_string(grid.dim));
  }
  const std::size_t n_total = grid.size();
  SampledPotential out{grid, std::vector<cplx>(n_total, cplx{0.0, 0.0})};
  const double h = grid.mesh();
  for (const auto& term : spec.terms) {
    if (term.kind == TermKind::Sampled && term.samples.size() != n_total) {
      throw FormatError("sampled potential term has " + std::to_string(term.samples.size()) +
                        " values but the grid has " + std::to_string(n_total) + " nodes");
    }
  }
  std::vector<double> x(static_cast<std::size_t>(grid.dim));
  int idx[3] = {0, 0, 0};
  for (std::size_t k = 0; k < n_total; ++k) {
    unflatten(k, grid.points_per_dim, grid.dim, idx);
    for (int axis = 0; axis < grid.dim; ++axis) x[static_cast<std::size_t>(axis)] = grid.node(idx[axis]);
    cplx value{0.0, 0.0};
    for (const auto& term : spec.terms) {
      value += term.kind == TermKind::Sampled ? term.amplitude * term.samples[k] : term_value(term, x, h, rule);
    }
    out.values[k] = value;
  }
  return out;
}

double potential_integral(const SampledPotential& v, double p, IntegrandPart part) {
  if (!(p > 0.0)) throw DomainError("potential_integral: exponent must be positive");
  const double cell = std::pow(v.grid.mesh(), v.grid.dim);
  double sum = 0.0;
  for (const auto& value : v.values) {
    double base = 0.0;
    switch (part) {
      case IntegrandPart::Abs: base = std::abs(value); break;
      case IntegrandPart::ReNeg: base = std::max(0.0, -value.real()); break;
      case IntegrandPart::Refined:
        base = (std::max(0.0, -value.real()) + std::abs(value.imag())) / std::numbers::sqrt2;
        break;
    }
    if (base > 0.0) sum += std::pow(base, p);
  }
  return cell * sum;
}

OperatorMatrix::OperatorMatrix(GridSpec grid, Kinetic kind, std::vector<cplx> potential,
                               Eigen::MatrixXd relativistic_kinetic)
    : grid_(grid), kind_(kind), potential_(std::move(potential)), relativistic_(std::move(relativistic_kinetic)) {
  if (potential_.size() != grid_.size()) throw DomainError("operator potential length does not match grid");
  if (kind_ == Kinetic::Relativistic &&
      (relativistic_.rows() != static_cast<Eigen::Index>(potential_.size()) || relativistic_.cols() != relativistic_.rows())) {
    throw DomainError("relativistic operator needs an N x N kinetic matrix");
  }
}

Eigen::MatrixXd OperatorMatrix::kinetic_dense() const {
  if (kind_ == Kinetic::Relativistic) return relativistic_;
  const auto n_total = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_total, n_total);
  const double inv_h2 = 1.0 / (grid_.mesh() * grid_.mesh());
  const int n = grid_.points_per_dim;
  int idx[3] = {0, 0, 0};
  for (Eigen::Index row = 0; row < n_total; ++row) {
    k(row, row) = 2.0 * grid_.dim * inv_h2;
    unflatten(static_cast<std::size_t>(row), n, grid_.dim, idx);
    Eigen::Index stride = 1;
    for (int axis = grid_.dim - 1; axis >= 0; --axis) {
      if (idx[axis] + 1 < n) k(row, row + stride) = -inv_h2;
      if (idx[axis] > 0) k(row, row - stride) = -inv_h2;
      stride *= n;
    }
  }
  return k;
}

Eigen::MatrixXcd OperatorMatrix::dense() const {
  Eigen::MatrixXcd m = kinetic_dense().cast<cplx>();
  for (std::size_t i = 0; i < potential_.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += potential_[i];
  }
  return m;
}

Eigen::SparseMatrix<cplx> OperatorMatrix::sparse() const {
  const auto n_total = static_cast<Eigen::Index>(dimension());
  std::vector<Eigen::Triplet<cplx>> triplets;
  if (kind_ == Kinetic::Relativistic) {
    triplets.reserve(static_cast<std::size_t>(n_total * n_total));
    for (Eigen::Index j = 0; j < n_total; ++j) {
      for (Eigen::Index i = 0; i < n_total; ++i) {
        cplx value = relativistic_(i, j);
        if (i == j) value += potential_[static_cast<std::size_t>(i)];
        triplets.emplace_back(i, j, value);
      }
    }
  } else {
    const double inv_h2 = 1.0 / (grid_.mesh() * grid_.mesh());
    const int n = grid_.points_per_dim;
    int idx[3] = {0, 0, 0};
    triplets.reserve(static_cast<std::size_t>(n_total) * static_cast<std::size_t>(2 * grid_.dim + 1));
    for (Eigen::Index row = 0; row < n_total; ++row) {
      triplets.emplace_back(row, row, 2.0 * grid_.dim * inv_h2 + potential_[static_cast<std::size_t>(row)]);
      unflatten(static_cast<std::size_t>(row), n, grid_.dim, idx);
      Eigen::Index stride = 1;
      for (int axis = grid_.dim - 1; axis >= 0; --axis) {
        if (idx[axis] + 1 < n) triplets.emplace_back(row, row + stride, -inv_h2);
        if (idx[axis] > 0) triplets.emplace_back(row, row - stride, -inv_h2);
        stride *= n;
      }
    }
  }
  Eigen::SparseMatrix<cplx> s(n_total, n_total);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

Eigen::VectorXcd OperatorMatrix::tridiagonal_diagonal() const {
  if (!is_tridiagonal()) throw DomainError("operator is not tridiagonal");
  const double diag = 2.0 / (grid_.mesh() * grid_.mesh());
  Eigen::VectorXcd d(static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < potential_.size(); ++i) d(static_cast<Eigen::Index>(i)) = diag + potential_[i];
  return d;
}

double OperatorMatrix::tridiagonal_offdiagonal() const {
  if (!is_tridiagonal()) throw DomainError("operator is not tridiagonal");
  return -1.0 / (grid_.mesh() * grid_.mesh());
}

cplx OperatorMatrix::trace() const {
  cplx t{0.0, 0.0};
  if (kind_ == Kinetic::Relativistic) {
    t = relativistic_.trace();
  } else {
    t = static_cast<double>(dimension()) * 2.0 * grid_.dim / (grid_.mesh() * grid_.mesh());
  }
  for (const auto& v : potential_) t += v;
  return t;
}

double OperatorMatrix::norm_frobenius() const {
  double sum = 0.0;
  if (kind_ == Kinetic::Relativistic) {
    for (Eigen::Index i = 0; i < relativistic_.rows(); ++i) {
      for (Eigen::Index j = 0; j < relativistic_.cols(); ++j) {
        cplx value = relativistic_(i, j);
        if (i == j) value += potential_[static_cast<std::size_t>(i)];
        sum += std::norm(value);
      }
    }
    return std::sqrt(sum);
  }
  const double inv_h2 = 1.0 / (grid_.mesh() * grid_.mesh());
  const double diag = 2.0 * grid_.dim * inv_h2;
  for (const auto& v : potential_) sum += std::norm(diag + v);
  // Each axis contributes 2 n^{d-1} (n-1) off-diagonal entries.
  const auto n = static_cast<double>(grid_.points_per_dim);
  const double offdiag_count = 2.0 * grid_.dim * std::pow(n, grid_.dim - 1) * (n - 1.0);
  sum += offdiag_count * inv_h2 * inv_h2;
  return std::sqrt(sum);
}

OperatorMatrix OperatorMatrix::conj() const {
  std::vector<cplx> v(potential_.size());
  std::transform(potential_.begin(), potential_.end(), v.begin(), [](cplx z) { return std::conj(z); });
  return with_potential(std::move(v));
}

OperatorMatrix OperatorMatrix::shifted(double t) const {
  std::vector<cplx> v = potential_;
  for (auto& z : v) z += t;
  return with_potential(std::move(v));
}

OperatorMatrix OperatorMatrix::with_potential(std::vector<cplx> potential) const {
  return OperatorMatrix(grid_, kind_, std::move(potential), relativistic_);
}

OperatorMatrix build_operator(const GridSpec& grid, const SampledPotential& v, Kinetic kinetic) {
  grid.validate();
  if (v.grid.dim != grid.dim || v.grid.points_per_dim != grid.points_per_dim || v.values.size() != grid.size()) {
    throw DomainError("sampled potential was taken on a different grid");
  }
  if (kinetic == Kinetic::Laplacian) {
    if (grid.boundary != Boundary::Dirichlet) throw DomainError("Laplacian kinetic requires a Dirichlet grid");
    return OperatorMatrix(grid, kinetic, v.values);
  }
  if (grid.dim != 1 || grid.boundary != Boundary::Periodic) {
    throw DomainError("relativistic kinetic requires dim = 1 and a periodic grid");
  }
  const int n = grid.points_per_dim;
  const auto row = relativistic_symbol_row(grid);
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      k(i, j) = row[static_cast<std::size_t>(((i - j) % n + n) % n)];
    }
  }
  return OperatorMatrix(grid, kinetic, v.values, std::move(k));
}

Eigen::MatrixXd hermitian_combination(const OperatorMatrix& m, double alpha) {
  Eigen::MatrixXd h = m.kinetic_dense();
  const auto v = m.potential();
  for (std::size_t i = 0; i < v.size(); ++i) {
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += v[i].real() + alpha * v[i].imag();
  }
  return h;
}

Eigen::MatrixXcd hermitian_part_tilted(const Eigen::MatrixXcd& m, double alpha) {
  const Eigen::MatrixXcd adj = m.adjoint();
  const cplx two_i{0.0, 2.0};
  return 0.5 * (m + adj) + alpha * (m - adj) / two_i;
}

}  // namespace ltlab
