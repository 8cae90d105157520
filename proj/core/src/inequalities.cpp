#include "ltlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

bool needs_kappa(Which w) { return w == Which::Thm1_ii || w == Which::Cor_ii; }

void finalize(InequalityReport& report) {
  if (report.rhs == 0.0) {
    report.ratio = report.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    report.vacuous_violation = report.lhs > 0.0;
  } else {
    report.ratio = report.lhs / report.rhs;
  }
  report.satisfied = report.lhs <= report.rhs * (1.0 + report.slack);
}

// Constant factor multiplying L_{g,d} for the sum inequalities. Evaluated
// directly so that conjectural gamma < 1 requests can reuse the formulas.
ConstantValue sum_constant(const InequalityRequest& r, int dim, const ConstantTable& table) {
  if (r.gamma >= 1.0) {
    switch (r.which) {
      case Which::Thm1_i: return lt_constant(r.gamma, dim, r.constant_mode, table);
      case Which::Thm1_ii: return cone_constant(r.gamma, dim, *r.kappa, r.constant_mode, table);
      case Which::Cor_i: return corollary_constants(r.gamma, dim, 1.0, r.constant_mode, table).eigenvalue_sum;
      case Which::Cor_ii: return corollary_constants(r.gamma, dim, *r.kappa, r.constant_mode, table).inside_cone;
      default: break;
    }
    throw DomainError("not a sum inequality");
  }
  ConstantValue base = lt_constant(r.gamma, dim, r.constant_mode, table);
  const double prefactor = std::exp2(1.0 + 0.5 * r.gamma + 0.25 * dim);
  switch (r.which) {
    case Which::Thm1_i: break;
    case Which::Thm1_ii: base.value *= prefactor * std::pow(1.0 + 2.0 / *r.kappa, r.gamma + 0.5 * dim); break;
    case Which::Cor_i: base.value *= prefactor; break;
    case Which::Cor_ii: base.value *= 1.0 + *r.kappa; break;
    default: throw DomainError("not a sum inequality");
  }
  base.guaranteed = false;
  return base;
}

double power(double base, double exponent) { return exponent == 0.0 ? 1.0 : std::pow(base, exponent); }

}  // namespace

std::string to_string(Which which) {
  switch (which) {
    case Which::Thm1_i: return "thm1_i";
    case Which::Thm1_ii: return "thm1_ii";
    case Which::Cor_i: return "cor_i";
    case Which::Cor_ii: return "cor_ii";
    case Which::Lemma: return "lemma";
    case Which::Single_9: return "single_9";
    case Which::Single_10: return "single_10";
    case Which::Single_11: return "single_11";
    case Which::Davies2: return "davies2";
  }
  return "unknown";
}

Which parse_which(const std::string& text) {
  for (Which w : {Which::Thm1_i, Which::Thm1_ii, Which::Cor_i, Which::Cor_ii, Which::Lemma, Which::Single_9,
                  Which::Single_10, Which::Single_11, Which::Davies2}) {
    if (to_string(w) == text) return w;
  }
  throw DomainError("unknown inequality '" + text + "'");
}

bool is_sum_inequality(Which w) {
  return w == Which::Thm1_i || w == Which::Thm1_ii || w == Which::Cor_i || w == Which::Cor_ii;
}

bool is_single_inequality(Which w) {
  return w == Which::Single_9 || w == Which::Single_10 || w == Which::Single_11 || w == Which::Davies2;
}

void InequalityRequest::validate(int dim) const {
  const std::string name = to_string(which);
  if (needs_kappa(which) != kappa.has_value()) {
    throw DomainError(needs_kappa(which) ? name + " requires kappa" : name + " does not take kappa");
  }
  if (kappa && (!(*kappa > 0.0) || !std::isfinite(*kappa))) throw DomainError("kappa must be positive");
  if ((which == Which::Lemma) != alpha.has_value()) {
    throw DomainError(which == Which::Lemma ? "lemma requires alpha" : name + " does not take alpha");
  }
  if (alpha && !std::isfinite(*alpha)) throw DomainError("alpha must be finite");
  if (refined && which != Which::Thm1_ii && which != Which::Cor_i) {
    throw DomainError("refined integrand applies only to thm1_ii and cor_i");
  }
  if (!(slack >= 0.0)) throw DomainError("slack must be non-negative");
  if (is_sum_inequality(which) || which == Which::Lemma) {
    if (gamma >= 1.0) return;
    if (allow_conjectural && is_sum_inequality(which)) {
      require_admissible(gamma, dim);
      return;
    }
    throw DomainError(name + " requires gamma >= 1 (got " + std::to_string(gamma) + ")");
  }
  if (which == Which::Davies2) {
    if (dim != 1) throw DomainError("davies2 applies only in d = 1");
    return;
  }
  require_admissible(gamma, dim);
}

double InequalityRequest::potential_exponent(int dim) const {
  return kinetic == Kinetic::Relativistic ? gamma + dim : gamma + 0.5 * dim;
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json eigs = nlohmann::json::array();
  for (const auto& z : eigenvalues_used) eigs.push_back({z.real(), z.imag()});
  nlohmann::json j;
  j["which"] = to_string(request.which);
  j["gamma"] = request.gamma;
  j["kappa"] = request.kappa ? nlohmann::json(*request.kappa) : nlohmann::json(nullptr);
  j["alpha"] = request.alpha ? nlohmann::json(*request.alpha) : nlohmann::json(nullptr);
  j["refined"] = request.refined;
  j["constant_mode"] = request.constant_mode.name();
  j["constant"] = constant.value;
  j["constant_guaranteed"] = constant.guaranteed;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["ratio"] = std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json(nullptr);
  j["satisfied"] = satisfied;
  j["slack"] = slack;
  j["vacuous_violation"] = vacuous_violation;
  j["conjectural"] = conjectural;
  j["kinetic"] = request.kinetic == Kinetic::Relativistic ? "relativistic" : "laplacian";
  j["eigenvalues_used"] = std::move(eigs);
  return j;
}

std::vector<cplx> cone_select(std::span<const cplx> eigs, double kappa, ConeSide side) {
  if (!(kappa > 0.0)) throw DomainError("cone_select: kappa must be positive");
  std::vector<cplx> out;
  for (const cplx z : eigs) {
    const bool keep = side == ConeSide::OutsideCone ? std::abs(z.imag()) >= kappa * z.real()
                                                    : std::abs(z.imag()) <= -kappa * z.real();
    if (keep) out.push_back(z);
  }
  return out;
}

InequalityReport lemma_check(const OperatorMatrix& m, double alpha, double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("lemma_check requires gamma >= 1");
  return lemma_check(m, eigenvalues(m), alpha, gamma);
}

InequalityReport lemma_check(const OperatorMatrix& m, const ComplexSpectrum& spectrum, double alpha, double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("lemma_check requires gamma >= 1");
  InequalityReport report;
  report.request.which = Which::Lemma;
  report.request.gamma = gamma;
  report.request.alpha = alpha;
  report.request.constant_mode = ConstantMode::unit();
  report.request.slack = kLemmaSlack;
  report.request.kinetic = m.kinetic_kind();
  report.slack = kLemmaSlack;
  report.constant = ConstantValue{1.0, gamma, m.grid().dim, ConstantMode::unit(), true};
  for (const cplx z : spectrum.values) {
    const double tilted = z.real() + alpha * z.imag();
    if (tilted < 0.0) {
      report.lhs += std::pow(-tilted, gamma);
      report.eigenvalues_used.push_back(z);
    }
  }
  const auto comparison = hermitian_combination_eigenvalues(m, alpha);
  report.rhs = riesz_mean_neg(comparison, gamma);
  finalize(report);
  return report;
}

InequalityReport check_sum(const InequalityRequest& request, const FilteredSpectrum& spectrum,
                           const SampledPotential& v, const ConstantTable& table) {
  if (!is_sum_inequality(request.which)) throw DomainError("check_sum: " + to_string(request.which) + " is not a sum inequality");
  const int dim = v.grid.dim;
  request.validate(dim);

  InequalityReport report;
  report.request = request;
  report.slack = request.slack;
  report.conjectural = request.gamma < 1.0;
  report.constant = sum_constant(request, dim, table);
  if (request.kinetic == Kinetic::Relativistic) report.constant.guaranteed = false;

  const double g = request.gamma;
  const auto& kept = spectrum.kept;
  switch (request.which) {
    case Which::Thm1_i:
      for (const cplx z : kept) {
        if (z.real() < 0.0) {
          report.lhs += power(-z.real(), g);
          report.eigenvalues_used.push_back(z);
        }
      }
      break;
    case Which::Cor_i:
      for (const cplx z : kept) {
        if (z.real() < 0.0) {
          report.lhs += power(std::abs(z), g);
          report.eigenvalues_used.push_back(z);
        }
      }
      break;
    case Which::Thm1_ii:
    case Which::Cor_ii: {
      const ConeSide side = request.which == Which::Thm1_ii ? ConeSide::OutsideCone : ConeSide::InsideCone;
      report.eigenvalues_used = cone_select(kept, *request.kappa, side);
      for (const cplx z : report.eigenvalues_used) report.lhs += power(std::abs(z), g);
      break;
    }
    default: break;
  }

  const double p = request.potential_exponent(dim);
  IntegrandPart part = IntegrandPart::Abs;
  if (request.which == Which::Thm1_i || request.which == Which::Cor_ii) {
    part = IntegrandPart::ReNeg;
  } else if (request.refined) {
    part = IntegrandPart::Refined;
  }
  report.rhs = report.constant.value * potential_integral(v, p, part);
  finalize(report);
  return report;
}

bool single_applies(Which which, cplx mu, int dim) {
  switch (which) {
    case Which::Single_9:
    case Which::Single_10: return mu.real() <= 0.0;
    case Which::Single_11: return mu.real() >= 0.0 && mu.imag() != 0.0;
    case Which::Davies2: return dim == 1 && !(mu.imag() == 0.0 && mu.real() >= 0.0);
    default: return false;
  }
}

InequalityReport check_single(cplx mu, const InequalityRequest& request, const SampledPotential& v,
                              const ConstantTable& table) {
  if (!is_single_inequality(request.which)) {
    throw DomainError("check_single: " + to_string(request.which) + " is not a single-eigenvalue bound");
  }
  const int dim = v.grid.dim;
  request.validate(dim);
  if (!single_applies(request.which, mu, dim)) {
    switch (request.which) {
      case Which::Single_9:
      case Which::Single_10: throw DomainError(to_string(request.which) + " requires Re mu <= 0");
      case Which::Single_11: throw DomainError("single_11 requires Re mu >= 0 and Im mu != 0");
      default: throw DomainError("davies2 requires d = 1 and mu off [0, inf)");
    }
  }

  InequalityReport report;
  report.request = request;
  report.slack = request.slack;
  report.eigenvalues_used = {mu};
  const double g = request.gamma;
  const double p = request.potential_exponent(dim);
  switch (request.which) {
    case Which::Single_9:
      report.constant = one_bound_constant(g, dim, request.constant_mode, table);
      report.lhs = power(-mu.real(), g);
      report.rhs = report.constant.value * potential_integral(v, p, IntegrandPart::ReNeg);
      break;
    case Which::Single_10:
      report.constant = single_ev_constant(g, dim, request.constant_mode, table);
      report.lhs = power(std::abs(mu), g);
      report.rhs = report.constant.value * potential_integral(v, p, IntegrandPart::Abs);
      break;
    case Which::Single_11: {
      report.constant = single_ev_constant(g, dim, request.constant_mode, table);
      const double cone_factor = std::pow(1.0 + 2.0 * mu.real() / std::abs(mu.imag()), p);
      report.lhs = power(std::abs(mu), g);
      report.rhs = report.constant.value * cone_factor * potential_integral(v, p, IntegrandPart::Abs);
      break;
    }
    case Which::Davies2: {
      report.constant = ConstantValue{0.25, 1.0, 1, ConstantMode::unit(), true};
      const double l1 = potential_integral(v, 1.0, IntegrandPart::Abs);
      report.lhs = std::abs(mu);
      report.rhs = 0.25 * l1 * l1;
      break;
    }
    default: break;
  }
  if (request.kinetic == Kinetic::Relativistic) report.constant.guaranteed = false;
  finalize(report);
  return report;
}

bool elementary_inequality_holds(double a, double b) {
  if (a < 0.0 || b < 0.0) throw DomainError("elementary inequality needs a, b >= 0");
  const double norm = std::hypot(a, b);
  const double sum = a + b;
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * sum;
  return norm <= sum + tol && sum <= std::numbers::sqrt2 * norm + tol;
}

}  // namespace ltlab
