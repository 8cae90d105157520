#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "ltlab/eigensolve.hpp"
#include "ltlab/error.hpp"

namespace ltlab {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Radix-2 diagonal scaling so that off-diagonal row and column norms match.
void balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double col = 0.0;
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        col += abs1(a(j, i));
        row += abs1(a(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      const double total = col + row;
      double f = 1.0;
      double g = row / radix;
      while (col < g) {
        f *= radix;
        col *= radix_sq;
      }
      g = row * radix;
      while (col > g) {
        f /= radix;
        col /= radix_sq;
      }
      if ((col + row) / f < 0.95 * total) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

struct Givens {
  double c = 1.0;
  cplx s{0.0, 0.0};
};

// [c s; -conj(s) c] [f; g] = [r; 0]
Givens make_givens(cplx f, cplx g, cplx* r) {
  if (g == cplx{0.0, 0.0}) {
    *r = f;
    return {1.0, {0.0, 0.0}};
  }
  if (f == cplx{0.0, 0.0}) {
    const double gn = std::abs(g);
    *r = gn;
    return {0.0, std::conj(g) / gn};
  }
  const double fn = std::abs(f);
  const double norm = std::hypot(fn, std::abs(g));
  const cplx phase = f / fn;
  *r = phase * norm;
  return {fn / norm, phase * std::conj(g) / norm};
}

void rotate_rows(Eigen::MatrixXcd& h, const Givens& rot, Eigen::Index i, Eigen::Index col_begin, Eigen::Index col_end) {
  for (Eigen::Index j = col_begin; j <= col_end; ++j) {
    const cplx x = h(i, j);
    const cplx y = h(i + 1, j);
    h(i, j) = rot.c * x + rot.s * y;
    h(i + 1, j) = -std::conj(rot.s) * x + rot.c * y;
  }
}

void rotate_cols(Eigen::MatrixXcd& h, const Givens& rot, Eigen::Index i, Eigen::Index row_begin, Eigen::Index row_end) {
  for (Eigen::Index k = row_begin; k <= row_end; ++k) {
    const cplx x = h(k, i);
    const cplx y = h(k, i + 1);
    h(k, i) = rot.c * x + std::conj(rot.s) * y;
    h(k, i + 1) = -rot.s * x + rot.c * y;
  }
}

// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
cplx wilkinson_shift(const Eigen::MatrixXcd& h, Eigen::Index iu) {
  const cplx a = h(iu - 1, iu - 1);
  const cplx b = h(iu - 1, iu);
  const cplx c = h(iu, iu - 1);
  const cplx d = h(iu, iu);
  const cplx p = 0.5 * (a - d);
  const cplx bc = b * c;
  cplx s = std::sqrt(p * p + bc);
  if (std::abs(p - s) > std::abs(p + s)) s = -s;
  const cplx denom = p + s;
  if (denom == cplx{0.0, 0.0}) return d;
  return d - bc / denom;
}

}  // namespace

ComplexSpectrum eigenvalues_dense(const Eigen::MatrixXcd& m, const DenseSolverOptions& options) {
  const Eigen::Index n = m.rows();
  if (n < 1 || m.cols() != n) throw DomainError("eigenvalues_dense needs a non-empty square matrix");
  if (!m.allFinite()) throw DomainError("eigenvalues_dense: matrix has non-finite entries");

  ComplexSpectrum out;
  out.residual_bound = static_cast<double>(n) * kEps * m.norm();
  if (n == 1) {
    out.values = {m(0, 0)};
    return out;
  }

  Eigen::MatrixXcd a = m;
  if (options.balance) balance(a);
  Eigen::MatrixXcd h = Eigen::HessenbergDecomposition<Eigen::MatrixXcd>(a).matrixH();
  const double h_norm = h.norm();

  const long sweep_cap = static_cast<long>(options.sweeps_per_dimension) * n;
  long total_sweeps = 0;
  int stalled = 0;
  Eigen::Index iu = n - 1;

  auto negligible = [&](Eigen::Index i) {
    double scale = abs1(h(i, i)) + abs1(h(i - 1, i - 1));
    if (scale == 0.0) scale = h_norm;
    return abs1(h(i, i - 1)) <= kEps * scale;
  };

  while (iu > 0) {
    if (negligible(iu)) {
      h(iu, iu - 1) = 0.0;
      --iu;
      stalled = 0;
      continue;
    }
    Eigen::Index il = iu - 1;
    while (il > 0 && !negligible(il)) --il;
    if (il > 0) h(il, il - 1) = 0.0;

    if (++total_sweeps > sweep_cap) {
      throw SolverError("dense QR did not converge within " + std::to_string(sweep_cap) + " sweeps (" +
                            std::to_string(n - 1 - iu) + " of " + std::to_string(n) + " eigenvalues deflated)",
                        static_cast<std::size_t>(n - 1 - iu));
    }
    ++stalled;

    cplx shift;
    if (options.exceptional_shift_period > 0 && stalled % options.exceptional_shift_period == 0) {
      const double sub1 = std::abs(h(iu, iu - 1).real()) + (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0);
      const double sub2 = std::abs(h(iu, iu - 1).imag()) + (iu >= 2 ? std::abs(h(iu - 1, iu - 2).imag()) : 0.0);
      shift = h(iu, iu) + cplx{sub1, sub2};
    } else {
      shift = wilkinson_shift(h, iu);
    }

    // Implicit single-shift sweep over the active block [il, iu].
    cplx r;
    Givens rot = make_givens(h(il, il) - shift, h(il + 1, il), &r);
    rotate_rows(h, rot, il, il, iu);
    rotate_cols(h, rot, il, il, std::min(il + 2, iu));
    for (Eigen::Index i = il + 1; i < iu; ++i) {
      rot = make_givens(h(i, i - 1), h(i + 1, i - 1), &r);
      h(i, i - 1) = r;
      h(i + 1, i - 1) = 0.0;
      rotate_rows(h, rot, i, i, iu);
      rotate_cols(h, rot, i, il, std::min(i + 2, iu));
    }
  }

  out.values.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = h(i, i);
  return out;
}

}  // namespace ltlab
