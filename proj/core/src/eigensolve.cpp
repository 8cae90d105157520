#include "ltlab/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

constexpr int kInverseIterations = 3;

bool is_tridiagonal(const Eigen::MatrixXd& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(i - j) > 1 && h(i, j) != 0.0) return false;
    }
  }
  return true;
}

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

double distance_to_half_line(cplx z) { return z.real() >= 0.0 ? std::abs(z.imag()) : std::abs(z); }

Eigen::VectorXcd start_vector(Eigen::Index n) {
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Deterministic, with no special symmetry.
    x(i) = cplx{1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i)), 0.11 * std::cos(0.7 * static_cast<double>(i))};
  }
  return x.normalized();
}

template <typename Solver>
Eigen::VectorXcd iterate(const Solver& solver, Eigen::Index n) {
  Eigen::VectorXcd x = start_vector(n);
  for (int it = 0; it < kInverseIterations; ++it) {
    Eigen::VectorXcd y = solver.solve(x);
    const double norm = y.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) break;
    x = y / norm;
  }
  return x;
}

}  // namespace

ComplexSpectrum eigenvalues(const OperatorMatrix& m, const DenseSolverOptions& options) {
  if (m.is_tridiagonal()) {
    const Eigen::Index n = static_cast<Eigen::Index>(m.dimension());
    const Eigen::VectorXcd off = Eigen::VectorXcd::Constant(std::max<Eigen::Index>(n - 1, 0), m.tridiagonal_offdiagonal());
    if (auto fast = eigenvalues_symmetric_tridiagonal(m.tridiagonal_diagonal(), off)) return *std::move(fast);
  }
  return eigenvalues_dense(m.dense(), options);
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXd& h) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n) throw DomainError("hermitian_eigenvalues needs a non-empty square matrix");
  const double scale = h.cwiseAbs().maxCoeff();
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, std::numeric_limits<double>::min())) {
    throw DomainError("hermitian_eigenvalues: matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (is_tridiagonal(h)) {
    const Eigen::VectorXd diag = h.diagonal();
    const Eigen::VectorXd sub = n > 1 ? Eigen::VectorXd(h.diagonal(-1)) : Eigen::VectorXd();
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  } else {
    solver.compute(h, Eigen::EigenvaluesOnly);
  }
  if (solver.info() != Eigen::Success) throw SolverError("symmetric eigensolver did not converge", 0);
  return sorted(solver.eigenvalues());
}

std::vector<double> hermitian_combination_eigenvalues(const OperatorMatrix& m, double alpha) {
  if (!m.is_tridiagonal()) return hermitian_eigenvalues(hermitian_combination(m, alpha));
  const Eigen::Index n = static_cast<Eigen::Index>(m.dimension());
  Eigen::VectorXd diag(n);
  const auto v = m.potential();
  const double base = 2.0 / (m.grid().mesh() * m.grid().mesh());
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx z = v[static_cast<std::size_t>(i)];
    diag(i) = base + z.real() + alpha * z.imag();
  }
  const Eigen::VectorXd sub = Eigen::VectorXd::Constant(std::max<Eigen::Index>(n - 1, 0), m.tridiagonal_offdiagonal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("symmetric tridiagonal eigensolver did not converge", 0);
  return sorted(solver.eigenvalues());
}

double riesz_mean_neg(std::span<const double> values, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("riesz_mean_neg requires gamma >= 0");
  double sum = 0.0;
  for (double v : values) {
    if (v < 0.0) sum += gamma == 0.0 ? 1.0 : std::pow(-v, gamma);
  }
  return sum;
}

Eigen::VectorXcd eigenvector(const OperatorMatrix& m, cplx lambda) {
  const auto n = static_cast<Eigen::Index>(m.dimension());
  // Offset the shift slightly so the factorization is never exactly singular.
  const double offset = 1e-10 * (1.0 + std::abs(lambda));
  const cplx shift = lambda + cplx{offset, offset};
  if (m.kinetic_kind() == Kinetic::Relativistic) {
    Eigen::MatrixXcd a = m.dense();
    a.diagonal().array() -= shift;
    return iterate(Eigen::PartialPivLU<Eigen::MatrixXcd>(a), n);
  }
  Eigen::SparseMatrix<cplx> a = m.sparse();
  for (Eigen::Index i = 0; i < n; ++i) a.coeffRef(i, i) -= shift;
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> solver;
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw SolverError("inverse iteration: factorization failed", 0);
  return iterate(solver, n);
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::NearHalfLine: return "near_half_line";
    case RejectReason::Unresolved: return "unresolved";
    case RejectReason::Delocalized: return "delocalized";
    case RejectReason::Unstable: return "unstable";
  }
  return "unknown";
}

double boundary_mass_fraction(const GridSpec& grid, const Eigen::VectorXcd& psi) {
  const double edge = 0.9 * grid.half_length;
  double shell = 0.0;
  double total = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    const double w = std::norm(psi(k));
    total += w;
    const auto x = node_coordinates(grid, static_cast<std::size_t>(k));
    if (std::any_of(x.begin(), x.end(), [edge](double xi) { return std::abs(xi) > edge; })) shell += w;
  }
  return total > 0.0 ? shell / total : 0.0;
}

FilteredSpectrum filter_spectrum(const ComplexSpectrum& spectrum, const GridSpec& grid, const FilterPolicy& policy,
                                 const FilterContext& context) {
  FilteredSpectrum out;
  out.policy = policy;
  const double potential_scale = [&] {
    if (context.op == nullptr) return 0.0;
    double s = 0.0;
    for (const auto& v : context.op->potential()) s = std::max(s, std::abs(v));
    return s;
  }();
  out.tau = policy.tau.value_or(std::max(10.0 * spectrum.residual_bound, 1e-3 * potential_scale));

  const bool have_vectors = !context.vectors.empty();
  if (have_vectors && context.vectors.size() != spectrum.values.size()) {
    throw DomainError("filter_spectrum: eigenvector count does not match the spectrum");
  }
  if (policy.boundary_fraction_max && !have_vectors && context.op == nullptr) {
    throw DomainError("filter_spectrum: delocalization check needs eigenvectors or the operator");
  }
  if (policy.stability_check && !context.rebuild) {
    throw DomainError("filter_spectrum: stability check needs an operator factory");
  }

  const bool relativistic = context.op != nullptr && context.op->kinetic_kind() == Kinetic::Relativistic;
  const double h = grid.mesh();
  auto mesh_product = [&](cplx z) { return relativistic ? std::abs(z) * h : std::sqrt(std::abs(z)) * h; };

  std::vector<cplx> candidates;
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    const cplx z = spectrum.values[i];
    if (distance_to_half_line(z) <= out.tau) {
      out.rejected.push_back({z, RejectReason::NearHalfLine});
      continue;
    }
    if (policy.resolution_max && mesh_product(z) > *policy.resolution_max) {
      out.rejected.push_back({z, RejectReason::Unresolved});
      continue;
    }
    if (policy.boundary_fraction_max) {
      const Eigen::VectorXcd psi = have_vectors ? context.vectors[i] : eigenvector(*context.op, z);
      if (boundary_mass_fraction(grid, psi) > *policy.boundary_fraction_max) {
        out.rejected.push_back({z, RejectReason::Delocalized});
        continue;
      }
    }
    candidates.push_back(z);
  }

  if (policy.stability_check && !candidates.empty()) {
    const OperatorMatrix bigger = context.rebuild(grid.enlarged(policy.stability_enlargement));
    const ComplexSpectrum reference = eigenvalues(bigger);
    for (const cplx z : candidates) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const cplx w : reference.values) nearest = std::min(nearest, std::abs(w - z));
      if (nearest > policy.stability_rel_tol * std::abs(z)) {
        out.rejected.push_back({z, RejectReason::Unstable});
      } else {
        out.kept.push_back(z);
      }
    }
  } else {
    out.kept = std::move(candidates);
  }
  return out;
}

FilteredSpectrum solve_and_filter(const OperatorMatrix& m, const FilterPolicy& policy, const OperatorFactory& rebuild,
                                  ComplexSpectrum* full) {
  ComplexSpectrum spectrum = eigenvalues(m);
  FilterContext context;
  context.op = &m;
  context.rebuild = rebuild;
  FilteredSpectrum filtered = filter_spectrum(spectrum, m.grid(), policy, context);
  if (full != nullptr) *full = std::move(spectrum);
  return filtered;
}

double max_pairing_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DomainError("max_pairing_distance: spectra differ in length");
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const cplx z : a) {
    std::size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(b[j] - z);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

}  // namespace ltlab
