#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltlab/error.hpp"
#include "ltlab/inequalities.hpp"
#include "ltlab/parallel.hpp"

namespace ltlab {
namespace {

// Offset of pixel k from the window midpoint, in pixel units. Antisymmetric
// under k -> count - 1 - k in exact arithmetic.
double centered_offset(int k, int count) { return (k + 0.5) - 0.5 * count; }

}  // namespace

cplx ExclusionRaster::pixel_center(int ix, int iy) const {
  const double dx = (window.re_max - window.re_min) / resolution.nx;
  const double dy = (window.im_max - window.im_min) / resolution.ny;
  const double re = 0.5 * (window.re_min + window.re_max) + centered_offset(ix, resolution.nx) * dx;
  const double im = 0.5 * (window.im_min + window.im_max) + centered_offset(iy, resolution.ny) * dy;
  return {re, im};
}

std::optional<std::pair<int, int>> ExclusionRaster::locate(cplx z) const {
  const double fx = (z.real() - window.re_min) / (window.re_max - window.re_min) * resolution.nx;
  const double fy = (z.imag() - window.im_min) / (window.im_max - window.im_min) * resolution.ny;
  if (!(fx >= 0.0 && fx <= resolution.nx && fy >= 0.0 && fy <= resolution.ny)) return std::nullopt;
  const int ix = std::min(static_cast<int>(fx), resolution.nx - 1);
  const int iy = std::min(static_cast<int>(fy), resolution.ny - 1);
  return std::make_pair(ix, iy);
}

std::string ExclusionRaster::to_pgm() const {
  std::ostringstream os;
  os << "P5\n" << resolution.nx << ' ' << resolution.ny << "\n255\n";
  std::string header = os.str();
  std::string bytes;
  bytes.reserve(header.size() + mask.size());
  bytes += header;
  for (int iy = resolution.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < resolution.nx; ++ix) bytes.push_back(excluded(ix, iy) ? static_cast<char>(255) : '\0');
  }
  return bytes;
}

nlohmann::json ExclusionRaster::sidecar() const {
  nlohmann::json j;
  j["window"] = {{"re_min", window.re_min}, {"re_max", window.re_max}, {"im_min", window.im_min}, {"im_max", window.im_max}};
  j["resolution"] = {resolution.nx, resolution.ny};
  j["gamma"] = gamma;
  j["constant_mode"] = mode.name();
  j["include_davies"] = include_davies;
  j["norms"] = {{"int_abs_pow", int_abs}, {"int_re_neg_pow", int_re_neg}, {"int_abs", int_abs_one}};
  j["constants"] = {{"single", single_constant}, {"one_bound", one_bound_constant}};
  j["pixel_values"] = {{"excluded", 255}, {"allowed", 0}};
  j["row_order"] = "top row = im_max";
  std::size_t count = 0;
  for (auto m : mask) count += m != 0;
  j["excluded_pixels"] = count;
  return j;
}

bool excluded_point(cplx mu, const ExclusionRaster& r) {
  if (mu.imag() == 0.0 && mu.real() >= 0.0) return false;
  const double g = r.gamma;
  const double p = g + 0.5 * r.dim;
  const double modulus_pow = g == 0.0 ? 1.0 : std::pow(std::abs(mu), g);
  if (mu.real() < 0.0) {
    const double lhs = g == 0.0 ? 1.0 : std::pow(-mu.real(), g);
    if (lhs > r.one_bound_constant * r.int_re_neg) return true;
  }
  if (mu.real() <= 0.0 && modulus_pow > r.single_constant * r.int_abs) return true;
  if (mu.real() >= 0.0 && mu.imag() != 0.0) {
    const double cone = std::pow(1.0 + 2.0 * mu.real() / std::abs(mu.imag()), p);
    if (modulus_pow > r.single_constant * cone * r.int_abs) return true;
  }
  if (r.include_davies && r.dim == 1 && std::abs(mu) > 0.25 * r.int_abs_one * r.int_abs_one) return true;
  return false;
}

ExclusionRaster exclusion_region(const SampledPotential& v, double gamma, const ConstantMode& mode,
                                 const Window& window, const Resolution& resolution, bool include_davies,
                                 const ConstantTable& table) {
  if (resolution.nx < 1 || resolution.ny < 1 || resolution.nx > ExclusionRaster::kMaxResolution ||
      resolution.ny > ExclusionRaster::kMaxResolution) {
    throw DomainError("raster resolution must be within 1.." + std::to_string(ExclusionRaster::kMaxResolution) +
                      " per axis");
  }
  if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min)) {
    throw DomainError("raster window must have positive extent");
  }
  const int dim = v.grid.dim;
  ExclusionRaster r;
  r.window = window;
  r.resolution = resolution;
  r.dim = dim;
  r.gamma = gamma;
  r.mode = mode;
  r.include_davies = include_davies && dim == 1;
  const double p = gamma + 0.5 * dim;
  r.int_abs = potential_integral(v, p, IntegrandPart::Abs);
  r.int_re_neg = potential_integral(v, p, IntegrandPart::ReNeg);
  r.int_abs_one = potential_integral(v, 1.0, IntegrandPart::Abs);
  r.one_bound_constant = one_bound_constant(gamma, dim, mode, table).value;
  r.single_constant = single_ev_constant(gamma, dim, mode, table).value;
  r.mask.assign(static_cast<std::size_t>(resolution.nx) * static_cast<std::size_t>(resolution.ny), 0);

  parallel_for(static_cast<std::size_t>(resolution.ny), [&](std::size_t row) {
    const int iy = static_cast<int>(row);
    for (int ix = 0; ix < resolution.nx; ++ix) {
      r.mask[row * static_cast<std::size_t>(resolution.nx) + static_cast<std::size_t>(ix)] =
          excluded_point(r.pixel_center(ix, iy), r) ? 1 : 0;
    }
  });
  return r;
}

}  // namespace ltlab
