#pragma once

// Reference spectra with known answers: the delta well, the square well
// -V0 on [-a, a] (roots of the matching conditions, continued from a real
// depth), and the closed-form Dirichlet lattice Laplacian.

#include <string>
#include <vector>

#include "ltlab/discretize.hpp"

namespace ltlab {

/// Eigenvalue -c^2/4 of -d^2/dx^2 - c delta(x). Requires Re c > 0.
cplx delta_eigenvalue(cplx c);

/// Potential -depth on [-half_width, half_width].
struct WellSpec {
  cplx depth{1.0, 0.0};
  double half_width = 1.0;
};

enum class Parity { Even, Odd };
std::string to_string(Parity parity);

/// lambda = -kappa^2 with Re kappa > 0.
struct WellRoot {
  Parity parity = Parity::Even;
  cplx kappa;

  cplx lambda() const { return -kappa * kappa; }
};

struct WellSolution {
  /// Sorted by |lambda|.
  std::vector<WellRoot> roots;
  /// One line per root dropped because it left the physical sheet.
  std::vector<std::string> dropped;
};

/// Matching residual: k sin(ka) - kappa cos(ka) (even), cos(ka) + kappa sin(ka)/k
/// (odd), with k^2 = depth - kappa^2. Both are entire in kappa.
cplx matching_residual(Parity parity, cplx kappa, const WellSpec& well);

/// All bound states of the real well Re(depth) by bisection on each branch.
std::vector<WellRoot> real_well_roots(double depth, double half_width);

/// Newton continuation of `roots` along the straight path from depth `from`
/// to depth `to`. Throws ContinuationError when the step falls below the
/// floor or two roots of one branch collide.
std::vector<WellRoot> continue_roots(std::vector<WellRoot> roots, double half_width, cplx from, cplx to);

/// Real roots at Re V0 continued in Im V0; roots with Re kappa <= 0 at the
/// end are dropped (recorded in `dropped`). At most max_count are returned.
WellSolution square_well(const WellSpec& well, std::size_t max_count = 8);

std::vector<cplx> square_well_eigenvalues(const WellSpec& well, std::size_t max_count = 8);

/// Ascending spectrum of the V-free Dirichlet lattice Laplacian.
std::vector<double> dirichlet_laplacian_spectrum(const GridSpec& grid);

}  // namespace ltlab
