#include <algorithm>
#include <cmath>
#include <limits>

#include "ltlab/eigensolve.hpp"

namespace ltlab {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kSweepsPerEigenvalue = 30;
// Complex orthogonal rotations are not norm preserving; above this the
// computed eigenvalues are no longer trustworthy.
constexpr double kMaxRotationGrowth = 1e3;

// sqrt(f^2 + g^2) on the branch with Re(conj(g) r) >= 0 so that c = g/r stays
// close to the real rotation when the data are nearly real.
cplx complex_hypot(cplx f, cplx g) {
  const double scale = std::max(std::abs(f), std::abs(g));
  if (scale == 0.0) return {0.0, 0.0};
  const cplx fs = f / scale;
  const cplx gs = g / scale;
  cplx r = scale * std::sqrt(fs * fs + gs * gs);
  if ((std::conj(g) * r).real() < 0.0) r = -r;
  return r;
}

}  // namespace

std::optional<ComplexSpectrum> eigenvalues_symmetric_tridiagonal(const Eigen::VectorXcd& diag,
                                                                 const Eigen::VectorXcd& offdiag) {
  const Eigen::Index n = diag.size();
  if (n == 0) return ComplexSpectrum{};
  if (offdiag.size() + 1 != n && !(n == 1 && offdiag.size() == 0)) return std::nullopt;

  std::vector<cplx> d(diag.data(), diag.data() + n);
  std::vector<cplx> e(static_cast<std::size_t>(n), cplx{0.0, 0.0});
  for (Eigen::Index i = 0; i + 1 < n; ++i) e[static_cast<std::size_t>(i)] = offdiag(i);

  double t_norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    t_norm += std::norm(d[static_cast<std::size_t>(i)]) + 2.0 * std::norm(e[static_cast<std::size_t>(i)]);
  }
  t_norm = std::sqrt(t_norm);

  double growth = 1.0;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t l = 0; l < un; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < un; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * (dd > 0.0 ? dd : t_norm)) break;
      }
      if (m == l) break;
      if (++iter > kSweepsPerEigenvalue) return std::nullopt;

      // Shift: eigenvalue of the leading 2x2 block closest to d[l].
      cplx g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      cplx r = complex_hypot(g, cplx{1.0, 0.0});
      const cplx denom = std::abs(g + r) >= std::abs(g - r) ? g + r : g - r;
      g = d[m] - d[l] + e[l] / denom;

      cplx s{1.0, 0.0};
      cplx c{1.0, 0.0};
      cplx p{0.0, 0.0};
      bool early_split = false;
      for (std::size_t i = m; i-- > l;) {
        const cplx f = s * e[i];
        const cplx b = c * e[i];
        r = complex_hypot(f, g);
        e[i + 1] = r;
        const double size = std::abs(f) + std::abs(g);
        if (size == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          early_split = true;
          break;
        }
        if (std::abs(r) < 1e-8 * size) return std::nullopt;  // isotropic pair
        s = f / r;
        c = g / r;
        growth = std::max(growth, std::abs(s) + std::abs(c));
        if (growth > kMaxRotationGrowth) return std::nullopt;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (early_split) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  ComplexSpectrum out;
  out.values = std::move(d);
  out.residual_bound = static_cast<double>(n) * kEps * t_norm * growth;
  return out;
}

}  // namespace ltlab
