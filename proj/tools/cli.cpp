#include "cli.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ltlab/constants.hpp"
#include "ltlab/corpus.hpp"
#include "ltlab/discretize.hpp"
#include "ltlab/eigensolve.hpp"
#include "ltlab/error.hpp"
#include "ltlab/inequalities.hpp"
#include "ltlab/optimizer.hpp"
#include "ltlab/oracles.hpp"
#include "ltlab/serialize.hpp"
#include "manifest.hpp"

namespace ltlab::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct InputFlags {
  std::string grid;
  std::string potential;
  std::string constants;
  std::string sampling = "pointwise";
  std::string kinetic = "laplacian";
  std::optional<std::size_t> max_dimension;
};

struct FilterFlags {
  std::optional<double> tau;
  double boundary_fraction = 0.01;
  bool no_delocalization = false;
  bool stability = false;
  double stability_tol = 1e-3;
};

struct RequestFlags {
  std::string ineq;
  double gamma = 1.0;
  std::optional<double> kappa;
  std::optional<double> alpha;
  bool refined = false;
  std::string mode = "sharp";
  std::optional<double> slack;
  bool allow_conjectural = false;
};

struct OptimizerFlags {
  std::string family;
  int restarts = 5;
  int max_evals = 200;
  std::uint64_t seed = 42;
  double init_scale = 0.1;
};

struct OutputFlags {
  std::string out;
  std::string manifest;
};

// Everything a command needs while running; filled by CLI11.
struct State {
  std::vector<std::string> argv;
  std::string command;
  InputFlags input;
  FilterFlags filter;
  RequestFlags request;
  OptimizerFlags optimizer;
  OutputFlags output;
  std::unique_ptr<RunManifest> manifest;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  // region
  std::vector<double> window;
  std::string resolution = "400x400";
  bool davies = false;
  std::string sidecar;
  // sweep
  std::vector<double> gammas;
  // oracle
  std::vector<double> depth;
  double half_width = 1.0;
  std::size_t max_count = 8;
  std::vector<double> delta;
  // lemma-fuzz
  LemmaFuzzOptions fuzz;
  std::string fuzz_kinetic = "laplacian";
};

Sampling parse_sampling(const std::string& s) {
  if (s == "pointwise") return Sampling::Pointwise;
  if (s == "cell") return Sampling::CellAverage;
  throw DomainError("--sampling must be pointwise or cell");
}

Kinetic parse_kinetic(const std::string& s) {
  if (s == "laplacian") return Kinetic::Laplacian;
  if (s == "relativistic") return Kinetic::Relativistic;
  throw DomainError("--kinetic must be laplacian or relativistic");
}

cplx pair_to_complex(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) throw DomainError(std::string(flag) + " expects re,im");
  return {v[0], v[1]};
}

Resolution parse_resolution(const std::string& s) {
  const auto sep = s.find_first_of("x,");
  Resolution r;
  try {
    if (sep == std::string::npos) {
      r.nx = r.ny = std::stoi(s);
    } else {
      r.nx = std::stoi(s.substr(0, sep));
      r.ny = std::stoi(s.substr(sep + 1));
    }
  } catch (const std::exception&) {
    throw DomainError("--resolution expects NXxNY, got \"" + s + "\"");
  }
  return r;
}

struct Loaded {
  GridSpec grid;
  PotentialSpec spec;
  SampledPotential v;
  ConstantTable table;
  Sampling sampling = Sampling::Pointwise;
  Kinetic kinetic = Kinetic::Laplacian;
};

Loaded load_inputs(State& s, bool need_potential = true) {
  Loaded in;
  s.manifest->add_input(s.input.grid);
  in.grid = load_grid(s.input.grid);
  if (s.input.max_dimension) {
    in.grid.max_dimension = *s.input.max_dimension;
    in.grid.validate();
  }
  in.sampling = parse_sampling(s.input.sampling);
  in.kinetic = parse_kinetic(s.input.kinetic);
  if (!s.input.constants.empty()) {
    s.manifest->add_input(s.input.constants);
    in.table = ConstantTable::load(s.input.constants);
  }
  if (need_potential) {
    s.manifest->add_input(s.input.potential);
    in.spec = load_potential(s.input.potential);
    for (const auto& t : in.spec.terms) {
      if (t.kind != TermKind::Sampled) continue;
      fs::path p(t.path);
      if (p.is_relative()) p = fs::path(s.input.potential).parent_path() / p;
      s.manifest->add_input(p);
    }
    if (in.spec.dim != in.grid.dim) throw FormatError("potential and grid dimensions differ");
    in.v = sample_potential(in.spec, in.grid, in.sampling);
  }
  return in;
}

FilterPolicy make_policy(const FilterFlags& f) {
  FilterPolicy p;
  p.tau = f.tau;
  if (f.no_delocalization) {
    p.boundary_fraction_max.reset();
  } else {
    p.boundary_fraction_max = f.boundary_fraction;
  }
  p.stability_check = f.stability;
  p.stability_rel_tol = f.stability_tol;
  return p;
}

OperatorFactory make_factory(const Loaded& in) {
  return [spec = in.spec, sampling = in.sampling, kinetic = in.kinetic](const GridSpec& g) {
    return build_operator(g, sample_potential(spec, g, sampling), kinetic);
  };
}

InequalityRequest make_request(const RequestFlags& f, Kinetic kinetic) {
  InequalityRequest r;
  r.which = parse_which(f.ineq);
  r.gamma = f.gamma;
  r.kappa = f.kappa;
  r.alpha = f.alpha;
  r.refined = f.refined;
  r.constant_mode = ConstantMode::parse(f.mode);
  r.kinetic = kinetic;
  r.allow_conjectural = f.allow_conjectural;
  r.slack = f.slack.value_or(r.which == Which::Lemma ? kLemmaSlack : kContinuumSlack);
  return r;
}

void emit(State& s, const std::string& content, const std::string& path) {
  if (path.empty()) {
    *s.out << content;
    return;
  }
  write_file_atomic(path, content);
  s.manifest->add_output(path);
}

void emit_json(State& s, const json& j, bool also_stdout) {
  const std::string text = j.dump(2) + "\n";
  if (also_stdout || s.output.out.empty()) *s.out << text;
  if (!s.output.out.empty()) {
    write_file_atomic(s.output.out, text);
    s.manifest->add_output(s.output.out);
  }
}

int cmd_spectrum(State& s) {
  const Loaded in = load_inputs(s);
  const OperatorMatrix op = build_operator(in.grid, in.v, in.kinetic);
  const FilteredSpectrum f = solve_and_filter(op, make_policy(s.filter), make_factory(in));
  emit(s, spectrum_csv(f), s.output.out);
  return kOk;
}

ConstantValue single_constant(const InequalityRequest& r, int dim, const ConstantTable& table) {
  switch (r.which) {
    case Which::Single_9: return one_bound_constant(r.gamma, dim, r.constant_mode, table);
    case Which::Single_10:
    case Which::Single_11: return single_ev_constant(r.gamma, dim, r.constant_mode, table);
    default: return {0.25, r.gamma, dim, r.constant_mode, true};
  }
}

int cmd_check(State& s) {
  const Loaded in = load_inputs(s);
  const InequalityRequest request = make_request(s.request, in.kinetic);
  request.validate(in.grid.dim);
  const OperatorMatrix op = build_operator(in.grid, in.v, in.kinetic);

  InequalityReport report;
  if (request.which == Which::Lemma) {
    report = lemma_check(op, request.alpha.value_or(0.0), request.gamma);
    report.request = request;
  } else {
    const FilteredSpectrum f = solve_and_filter(op, make_policy(s.filter), make_factory(in));
    if (is_sum_inequality(request.which)) {
      report = check_sum(request, f, in.v, in.table);
    } else {
      // The eigenvalue with the largest ratio stands for the whole spectrum.
      bool any = false;
      for (const cplx mu : f.kept) {
        if (!single_applies(request.which, mu, in.grid.dim)) continue;
        InequalityReport r = check_single(mu, request, in.v, in.table);
        if (!any || r.ratio > report.ratio) report = std::move(r);
        any = true;
      }
      if (!any) {
        report.request = request;
        report.slack = request.slack;
        report.constant = single_constant(request, in.grid.dim, in.table);
      }
    }
  }
  emit_json(s, report.to_json(), true);
  return report.satisfied ? kOk : kViolated;
}

int cmd_region(State& s) {
  if (s.output.out.empty()) throw DomainError("region needs --out for the PGM file");
  if (s.window.size() != 4) throw DomainError("--window expects re_min,re_max,im_min,im_max");
  const Loaded in = load_inputs(s);
  const Window w{s.window[0], s.window[1], s.window[2], s.window[3]};
  const ExclusionRaster r = exclusion_region(in.v, s.request.gamma, ConstantMode::parse(s.request.mode), w,
                                             parse_resolution(s.resolution), s.davies, in.table);
  emit(s, r.to_pgm(), s.output.out);
  const std::string sidecar = s.sidecar.empty() ? fs::path(s.output.out).replace_extension(".json").string() : s.sidecar;
  emit(s, r.sidecar().dump(2) + "\n", sidecar);
  return kOk;
}

OptimizerConfig make_config(State& s, const Loaded& in) {
  OptimizerConfig c;
  c.restarts = s.optimizer.restarts;
  c.max_evals = s.optimizer.max_evals;
  c.seed = s.optimizer.seed;
  c.init_scale = s.optimizer.init_scale;
  c.pipeline.grid = in.grid;
  c.pipeline.filter = make_policy(s.filter);
  c.pipeline.sampling = in.sampling;
  c.pipeline.kinetic = in.kinetic;
  c.pipeline.table = in.table;
  s.manifest->set_seed(c.seed);
  return c;
}

FamilySpec load_family(State& s) {
  s.manifest->add_input(s.optimizer.family);
  return FamilySpec::from_json(read_json_file(s.optimizer.family));
}

// Writes the potential that broke a proven bound next to the primary output.
void dump_violation(State& s, const FamilySpec& family, const OptResult& r) {
  const json j = {{"potential", to_json(family.potential(r.best_params))},
                  {"ratio", finite_or_null(r.best_ratio)},
                  {"which", to_string(r.which)},
                  {"gamma", r.gamma}};
  const std::string path = s.output.out.empty() ? std::string() : s.output.out + ".violation.json";
  *s.err << "ratio " << r.best_ratio << " exceeds a proven bound for " << to_string(r.which) << " at gamma "
         << r.gamma << (path.empty() ? "\n" : "; potential written to " + path + "\n");
  if (path.empty()) {
    *s.err << j.dump() << "\n";
  } else {
    emit(s, j.dump(2) + "\n", path);
  }
}

int cmd_saturate(State& s) {
  const Loaded in = load_inputs(s, false);
  const FamilySpec family = load_family(s);
  const InequalityRequest request = make_request(s.request, in.kinetic);
  const OptimizerConfig config = make_config(s, in);
  const OptResult r = maximize_ratio(family, request, config);
  emit_json(s, r.to_json(), true);
  if (theorem_covers(request, in.grid.dim, in.table) && r.best_ratio > 1.0 + request.slack) {
    dump_violation(s, family, r);
    return kViolated;
  }
  return kOk;
}

int cmd_sweep(State& s) {
  const Loaded in = load_inputs(s, false);
  const FamilySpec family = load_family(s);
  const InequalityRequest request = make_request(s.request, in.kinetic);
  const OptimizerConfig config = make_config(s, in);
  const auto table = gamma_sweep(family, s.gammas, request, config);
  json entries = json::array();
  for (const auto& e : table) entries.push_back(e.to_json());
  emit_json(s, {{"which", to_string(request.which)}, {"seed", config.seed}, {"entries", entries}}, true);
  int code = kOk;
  for (const auto& e : table) {
    if (!e.result) {
      *s.err << "gamma " << e.gamma << " skipped: " << e.error << "\n";
      continue;
    }
    InequalityRequest at = request;
    at.gamma = e.gamma;
    if (!e.conjectural && theorem_covers(at, in.grid.dim, in.table) && e.result->best_ratio > 1.0 + request.slack) {
      dump_violation(s, family, *e.result);
      code = kViolated;
    }
  }
  return code;
}

int cmd_oracle(State& s) {
  std::string csv = "branch,re_lambda,im_lambda\n";
  auto row = [&](const std::string& branch, cplx z) {
    csv += branch + "," + json(z.real()).dump() + "," + json(z.imag()).dump() + "\n";
  };
  if (!s.delta.empty()) {
    row("even", delta_eigenvalue(pair_to_complex(s.delta, "--delta")));
  } else {
    if (s.depth.empty()) throw DomainError("oracle needs --depth or --delta");
    const WellSolution w = square_well({pair_to_complex(s.depth, "--depth"), s.half_width}, s.max_count);
    for (const auto& note : w.dropped) *s.err << "dropped: " << note << "\n";
    for (const auto& r : w.roots) row(to_string(r.parity), r.lambda());
  }
  emit(s, csv, s.output.out);
  return kOk;
}

int cmd_lemma_fuzz(State& s) {
  s.fuzz.kinetic = parse_kinetic(s.fuzz_kinetic);
  if (s.fuzz.kinetic == Kinetic::Relativistic) {
    s.fuzz.grid.boundary = Boundary::Periodic;
    if (s.fuzz.grid.points_per_dim % 2 != 0) ++s.fuzz.grid.points_per_dim;
  }
  s.manifest->set_seed(s.fuzz.seed);
  const LemmaFuzzSummary summary = lemma_fuzz(s.fuzz);
  json j = summary.to_json();
  j["seed"] = s.fuzz.seed;
  j["tolerance"] = s.fuzz.tolerance;
  j["kinetic"] = s.fuzz_kinetic;
  emit_json(s, j, true);
  return summary.passed() ? kOk : kViolated;
}

void add_input_flags(CLI::App* c, State& s, bool potential = true) {
  c->add_option("--grid", s.input.grid, "Grid JSON")->required();
  if (potential) c->add_option("--potential", s.input.potential, "Potential JSON")->required();
  c->add_option("--constants", s.input.constants, "Constants JSON");
  c->add_option("--sampling", s.input.sampling, "pointwise | cell");
  c->add_option("--kinetic", s.input.kinetic, "laplacian | relativistic");
  c->add_option("--max-dimension", s.input.max_dimension, "Override the matrix dimension cap");
}

void add_filter_flags(CLI::App* c, State& s) {
  c->add_option("--tau", s.filter.tau, "Half-line distance threshold");
  c->add_option("--boundary-fraction", s.filter.boundary_fraction, "Largest eigenvector mass near the walls");
  c->add_flag("--no-delocalization-check", s.filter.no_delocalization);
  c->add_flag("--stability", s.filter.stability, "Reject eigenvalues that move when the box grows");
  c->add_option("--stability-tol", s.filter.stability_tol);
}

void add_request_flags(CLI::App* c, State& s, bool ineq_required) {
  auto* o = c->add_option("--ineq", s.request.ineq,
                          "thm1_i | thm1_ii | cor_i | cor_ii | lemma | single_9 | single_10 | single_11 | davies2");
  if (ineq_required) o->required();
  c->add_option("--gamma", s.request.gamma);
  c->add_option("--kappa", s.request.kappa);
  c->add_option("--alpha", s.request.alpha);
  c->add_flag("--refined", s.request.refined);
  c->add_option("--mode", s.request.mode, "classical | sharp | unit | scaled:<factor>");
  c->add_option("--slack", s.request.slack);
  c->add_flag("--allow-conjectural", s.request.allow_conjectural, "Evaluate sums for gamma < 1");
}

void add_optimizer_flags(CLI::App* c, State& s) {
  c->add_option("--family", s.optimizer.family, "Family JSON")->required();
  c->add_option("--restarts", s.optimizer.restarts);
  c->add_option("--max-evals", s.optimizer.max_evals, "Evaluations per restart");
  c->add_option("--seed", s.optimizer.seed);
  c->add_option("--init-scale", s.optimizer.init_scale);
}

void add_output_flags(CLI::App* c, State& s) {
  c->add_option("--out", s.output.out, "Primary output file (default: standard output)");
  c->add_option("--manifest", s.output.manifest, "Manifest path (default: <out>.manifest.json)");
}

int dispatch(State& s) {
  if (s.command == "spectrum") return cmd_spectrum(s);
  if (s.command == "check") return cmd_check(s);
  if (s.command == "region") return cmd_region(s);
  if (s.command == "saturate") return cmd_saturate(s);
  if (s.command == "sweep") return cmd_sweep(s);
  if (s.command == "oracle") return cmd_oracle(s);
  if (s.command == "lemma-fuzz") return cmd_lemma_fuzz(s);
  throw DomainError("unknown command " + s.command);
}

void write_manifest(State& s, int code) {
  const json j = s.manifest->to_json(code);
  std::string path = s.output.manifest;
  if (path.empty() && !s.output.out.empty()) path = s.output.out + ".manifest.json";
  if (path.empty()) {
    *s.err << "manifest: " << j.dump() << "\n";
    return;
  }
  try {
    write_file_atomic(path, j.dump(2) + "\n");
  } catch (const std::exception& e) {
    *s.err << "error: " << e.what() << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  State s;
  s.argv = args;
  s.out = &out;
  s.err = &err;

  CLI::App app{"Eigenvalue inequalities for Schroedinger operators with complex potentials", "ltlab"};
  app.set_version_flag("--version", LTLAB_VERSION);
  app.require_subcommand(1);

  auto* spectrum = app.add_subcommand("spectrum", "Full and filtered spectrum as CSV");
  add_input_flags(spectrum, s);
  add_filter_flags(spectrum, s);
  add_output_flags(spectrum, s);

  auto* check = app.add_subcommand("check", "Evaluate one inequality; exit 1 if it fails");
  add_input_flags(check, s);
  add_filter_flags(check, s);
  add_request_flags(check, s, true);
  add_output_flags(check, s);

  auto* region = app.add_subcommand("region", "Eigenvalue exclusion raster (PGM + JSON sidecar)");
  add_input_flags(region, s);
  region->add_option("--gamma", s.request.gamma);
  region->add_option("--mode", s.request.mode, "classical | sharp | unit | scaled:<factor> (default scaled:2)");
  region->preparse_callback([&s](std::size_t) { s.request.mode = "scaled:2"; });
  region->add_option("--window", s.window, "re_min,re_max,im_min,im_max")->delimiter(',')->required();
  region->add_option("--resolution", s.resolution, "NXxNY");
  region->add_flag("--davies", s.davies, "Include the d = 1 bound |mu| <= (int |V|)^2 / 4");
  region->add_option("--sidecar", s.sidecar, "Sidecar path (default: <out> with .json)");
  add_output_flags(region, s);

  auto* saturate = app.add_subcommand("saturate", "Maximize an inequality's ratio over a potential family");
  add_input_flags(saturate, s, false);
  add_filter_flags(saturate, s);
  add_request_flags(saturate, s, true);
  add_optimizer_flags(saturate, s);
  add_output_flags(saturate, s);

  auto* sweep = app.add_subcommand("sweep", "saturate for each gamma in a list");
  add_input_flags(sweep, s, false);
  add_filter_flags(sweep, s);
  add_request_flags(sweep, s, true);
  add_optimizer_flags(sweep, s);
  sweep->add_option("--gammas", s.gammas, "Comma-separated exponents")->delimiter(',')->required();
  add_output_flags(sweep, s);

  auto* oracle = app.add_subcommand("oracle", "Square-well or delta-well eigenvalues as CSV");
  oracle->add_option("--depth", s.depth, "V0 as re,im (potential -V0 on [-a, a])")->delimiter(',');
  oracle->add_option("--half-width", s.half_width);
  oracle->add_option("--max-count", s.max_count);
  oracle->add_option("--delta", s.delta, "Delta strength c as re,im")->delimiter(',');
  add_output_flags(oracle, s);

  auto* fuzz = app.add_subcommand("lemma-fuzz", "Matrix-level comparison on a seeded random corpus");
  fuzz->add_option("--seed", s.fuzz.seed);
  fuzz->add_option("--count", s.fuzz.count);
  fuzz->add_option("--n", s.fuzz.grid.points_per_dim, "Grid points");
  fuzz->add_option("--half-length", s.fuzz.grid.half_length);
  fuzz->add_option("--kinetic", s.fuzz_kinetic, "laplacian | relativistic");
  fuzz->add_option("--tolerance", s.fuzz.tolerance);
  add_output_flags(fuzz, s);

  // The optimizer samples cell averages unless told otherwise, so that
  // narrow wells keep their integral on coarse grids.
  // They also default to the stability check (--stability=false turns it
  // off) because a surviving box mode would be reported as a violation.
  for (auto* c : {saturate, sweep}) {
    c->preparse_callback([&s](std::size_t) {
      s.input.sampling = "cell";
      s.filter.stability = true;
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  for (auto* sub : app.get_subcommands()) s.command = sub->get_name();
  s.manifest = std::make_unique<RunManifest>(s.command, args);

  int code = kOk;
  try {
    code = dispatch(s);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    code = kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    code = kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kUsage;
  } catch (const SolverError& e) {
    err << "numeric failure: " << e.what() << "\n";
    code = kNumeric;
  } catch (const ContinuationError& e) {
    err << "numeric failure: " << e.what() << " (last good Im V0 = " << e.last_good_imag() << ")\n";
    code = kNumeric;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    code = kNumeric;
  }
  write_manifest(s, code);
  return code;
}

}  // namespace ltlab::cli
