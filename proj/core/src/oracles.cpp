#include "ltlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 12;
constexpr double kCollisionDistance = 1e-8;
constexpr double kStepFloorFraction = 1e-6;

struct SinTerms {
  cplx s;  // sin(ka)/k
  cplx t;  // (ka cos(ka) - sin(ka))/k^3
  cplx c;  // cos(ka)
};

// Even functions of k, so they only depend on k^2 = depth - kappa^2.
SinTerms sin_terms(cplx k2, double a) {
  const cplx k = std::sqrt(k2);
  const cplx x = k * a;
  SinTerms out;
  out.c = std::cos(x);
  if (std::abs(x) < 1e-3) {
    const cplx x2 = x * x;
    out.s = a * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    out.t = a * a * a * (-1.0 / 3.0 + x2 / 30.0);
  } else {
    out.s = std::sin(x) / k;
    out.t = (x * out.c - std::sin(x)) / (k2 * k);
  }
  return out;
}

cplx residual(Parity parity, cplx kappa, cplx depth, double a) {
  const cplx k2 = depth - kappa * kappa;
  const SinTerms st = sin_terms(k2, a);
  if (parity == Parity::Even) return k2 * st.s - kappa * st.c;
  return st.c + kappa * st.s;
}

cplx residual_derivative(Parity parity, cplx kappa, cplx depth, double a) {
  const cplx k2 = depth - kappa * kappa;
  const SinTerms st = sin_terms(k2, a);
  if (parity == Parity::Even) return -st.c - kappa * (st.s + a * st.c + kappa * a * st.s);
  return st.s + kappa * a * st.s - kappa * kappa * st.t;
}

std::optional<cplx> newton(Parity parity, cplx guess, cplx depth, double a) {
  cplx kappa = guess;
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const cplx f = residual(parity, kappa, depth, a);
    const cplx df = residual_derivative(parity, kappa, depth, a);
    if (df == cplx{0.0, 0.0} || !std::isfinite(std::abs(df))) return std::nullopt;
    const cplx step = f / df;
    kappa -= step;
    if (!std::isfinite(std::abs(kappa))) return std::nullopt;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(kappa))) {
      if (std::abs(residual(parity, kappa, depth, a)) <= kNewtonTol * (1.0 + std::abs(depth))) return kappa;
    }
  }
  if (std::abs(residual(parity, kappa, depth, a)) <= kNewtonTol * (1.0 + std::abs(depth))) return kappa;
  return std::nullopt;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_collisions(const std::vector<WellRoot>& roots, double imag_reached) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (roots[i].parity == roots[j].parity && std::abs(roots[i].kappa - roots[j].kappa) < kCollisionDistance) {
        std::ostringstream msg;
        msg << "square well: two " << to_string(roots[i].parity) << " roots collide near kappa = " << roots[i].kappa;
        throw ContinuationError(msg.str(), imag_reached);
      }
    }
  }
}

}  // namespace

cplx delta_eigenvalue(cplx c) {
  if (!(c.real() > 0.0)) throw DomainError("delta well needs Re c > 0 for a decaying eigenfunction");
  return -c * c / 4.0;
}

std::string to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

cplx matching_residual(Parity parity, cplx kappa, const WellSpec& well) {
  return residual(parity, kappa, well.depth, well.half_width);
}

std::vector<WellRoot> real_well_roots(double depth, double a) {
  if (!(depth > 0.0) || !(a > 0.0)) throw DomainError("real well needs positive depth and half-width");
  const double kmax = std::sqrt(depth);
  const double pi = std::numbers::pi;
  std::vector<WellRoot> roots;
  auto push = [&](Parity parity, double k) {
    const double kappa2 = depth - k * k;
    if (!(kappa2 > 0.0)) return;
    // Polish on the entire form; bisection in k loses digits in kappa near threshold.
    const double kappa0 = std::sqrt(kappa2);
    const cplx kappa = newton(parity, kappa0, depth, a).value_or(kappa0);
    if (kappa.real() > 0.0) roots.push_back({parity, {kappa.real(), 0.0}});
  };
  for (int j = 0; j * pi / a < kmax; ++j) {
    const double lo = j * pi / a;
    const double hi = std::min((j * pi + pi / 2) / a, kmax);
    if (hi > lo) {
      auto f = [&](double k) { return k * std::sin(k * a) - std::sqrt(std::max(depth - k * k, 0.0)) * std::cos(k * a); };
      push(Parity::Even, bisect(f, lo, hi));
    }
    const double olo = (j * pi + pi / 2) / a;
    const double ohi = std::min((j + 1) * pi / a, kmax);
    if (ohi > olo) {
      auto f = [&](double k) { return -k * std::cos(k * a) - std::sqrt(std::max(depth - k * k, 0.0)) * std::sin(k * a); };
      push(Parity::Odd, bisect(f, olo, ohi));
    }
  }
  return roots;
}

std::vector<WellRoot> continue_roots(std::vector<WellRoot> roots, double a, cplx from, cplx to) {
  const double length = std::abs(to - from);
  if (length == 0.0 || roots.empty()) return roots;
  const double scale = std::max(std::abs(from), std::abs(to));
  const double floor_step = scale * kStepFloorFraction;
  double step = std::min(scale / 20.0, length);
  double t = 0.0;
  cplx reached = from;
  while (t < length) {
    const double dt = std::min(step, length - t);
    const cplx depth = from + (to - from) * ((t + dt) / length);
    std::vector<WellRoot> next = roots;
    bool ok = true;
    for (auto& r : next) {
      const auto kappa = newton(r.parity, r.kappa, depth, a);
      // A converged root far from its predecessor has jumped to another root.
      if (!kappa || std::abs(*kappa - r.kappa) > 0.25 * (std::abs(r.kappa) + std::sqrt(dt))) {
        ok = false;
        break;
      }
      r.kappa = *kappa;
    }
    if (!ok) {
      step *= 0.5;
      if (step < floor_step) {
        std::ostringstream msg;
        msg << "square well: Newton continuation stalled at depth " << reached;
        throw ContinuationError(msg.str(), reached.imag());
      }
      continue;
    }
    check_collisions(next, reached.imag());
    roots = std::move(next);
    t += dt;
    reached = depth;
    step = std::min(2.0 * step, scale / 20.0);
  }
  return roots;
}

WellSolution square_well(const WellSpec& well, std::size_t max_count) {
  if (!(well.depth.real() > 0.0)) throw DomainError("square well needs Re V0 > 0");
  if (!(well.half_width > 0.0)) throw DomainError("square well needs a positive half-width");
  const cplx start{well.depth.real(), 0.0};
  std::vector<WellRoot> roots = real_well_roots(start.real(), well.half_width);
  if (well.depth.imag() != 0.0) roots = continue_roots(std::move(roots), well.half_width, start, well.depth);

  WellSolution out;
  for (const auto& r : roots) {
    if (r.kappa.real() > 0.0) {
      out.roots.push_back(r);
    } else {
      std::ostringstream msg;
      msg << to_string(r.parity) << " root kappa = " << r.kappa << " left the physical sheet (Re kappa <= 0)";
      out.dropped.push_back(msg.str());
    }
  }
  std::stable_sort(out.roots.begin(), out.roots.end(),
                   [](const WellRoot& x, const WellRoot& y) { return std::abs(x.lambda()) < std::abs(y.lambda()); });
  if (out.roots.size() > max_count) out.roots.resize(max_count);
  return out;
}

std::vector<cplx> square_well_eigenvalues(const WellSpec& well, std::size_t max_count) {
  std::vector<cplx> out;
  for (const auto& r : square_well(well, max_count).roots) out.push_back(r.lambda());
  return out;
}

std::vector<double> dirichlet_laplacian_spectrum(const GridSpec& grid) {
  grid.validate();
  if (grid.boundary != Boundary::Dirichlet) throw DomainError("closed-form Laplacian spectrum needs a Dirichlet grid");
  const int n = grid.points_per_dim;
  const double h = grid.mesh();
  std::vector<double> axis(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    // 2(1 - cos t)/h^2 written without cancellation.
    const double s = std::sin(k * std::numbers::pi / (2.0 * (n + 1)));
    axis[static_cast<std::size_t>(k - 1)] = 4.0 * s * s / (h * h);
  }
  std::vector<double> values = axis;
  for (int d = 1; d < grid.dim; ++d) {
    std::vector<double> next;
    next.reserve(values.size() * axis.size());
    for (double v : values) {
      for (double w : axis) next.push_back(v + w);
    }
    values = std::move(next);
  }
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace ltlab
