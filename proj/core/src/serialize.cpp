#include "ltlab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

using nlohmann::json;

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field \"") + key + "\": " + e.what());
  }
}

std::vector<double> vector_field(const json& j, const char* key, int dim) {
  auto v = field<std::vector<double>>(j, key);
  if (static_cast<int>(v.size()) != dim) {
    throw FormatError(std::string("field \"") + key + "\" must have " + std::to_string(dim) + " entries");
  }
  return v;
}

std::string format_double(double x) {
  // json's serializer is shortest round-trip.
  return json(x).dump();
}

}  // namespace

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const GridSpec& grid) {
  return {{"dim", grid.dim},
          {"half_length", grid.half_length},
          {"points_per_dim", grid.points_per_dim},
          {"boundary", grid.boundary == Boundary::Dirichlet ? "dirichlet" : "periodic"}};
}

GridSpec grid_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("grid must be a JSON object");
  GridSpec g;
  g.dim = field<int>(j, "dim");
  g.half_length = field<double>(j, "half_length");
  g.points_per_dim = field<int>(j, "points_per_dim");
  const auto boundary = j.contains("boundary") ? field<std::string>(j, "boundary") : std::string("dirichlet");
  if (boundary == "dirichlet") {
    g.boundary = Boundary::Dirichlet;
  } else if (boundary == "periodic") {
    g.boundary = Boundary::Periodic;
  } else {
    throw FormatError("boundary must be \"dirichlet\" or \"periodic\", got \"" + boundary + "\"");
  }
  if (j.contains("max_dimension")) g.max_dimension = field<std::size_t>(j, "max_dimension");
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw FormatError(std::string("grid: ") + e.what());
  }
  return g;
}

json to_json(const PotentialSpec& spec) {
  json terms = json::array();
  for (const auto& t : spec.terms) {
    json jt;
    jt["amp"] = {t.amplitude.real(), t.amplitude.imag()};
    switch (t.kind) {
      case TermKind::Gaussian:
        jt["kind"] = "gaussian";
        jt["center"] = t.center;
        jt["width"] = t.width;
        break;
      case TermKind::Box:
        jt["kind"] = "box";
        jt["center"] = t.center;
        jt["half_width"] = t.width;
        break;
      case TermKind::Sampled:
        jt["kind"] = "sampled";
        jt["path"] = t.path;
        break;
    }
    terms.push_back(std::move(jt));
  }
  return {{"dim", spec.dim}, {"terms", std::move(terms)}};
}

PotentialSpec potential_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw FormatError("potential must be a JSON object");
  PotentialSpec spec;
  spec.dim = field<int>(j, "dim");
  if (spec.dim < 1 || spec.dim > 3) throw FormatError("potential dim must be 1, 2 or 3");
  const json terms = j.contains("terms") ? j.at("terms") : json::array();
  if (!terms.is_array()) throw FormatError("\"terms\" must be an array");
  for (const auto& jt : terms) {
    const auto kind = field<std::string>(jt, "kind");
    cplx amp{1.0, 0.0};
    if (jt.contains("amp")) {
      const auto a = field<std::vector<double>>(jt, "amp");
      if (a.size() != 2) throw FormatError("\"amp\" must be [re, im]");
      amp = {a[0], a[1]};
    }
    PotentialTerm term;
    if (kind == "gaussian") {
      term = PotentialTerm::gaussian(amp, vector_field(jt, "center", spec.dim), vector_field(jt, "width", spec.dim));
    } else if (kind == "box") {
      const char* key = jt.contains("half_width") ? "half_width" : "width";
      term = PotentialTerm::box(amp, vector_field(jt, "center", spec.dim), vector_field(jt, key, spec.dim));
    } else if (kind == "sampled") {
      term.kind = TermKind::Sampled;
      term.amplitude = amp;
      term.path = field<std::string>(jt, "path");
      std::filesystem::path p(term.path);
      if (p.is_relative()) p = base_dir / p;
      term.samples = read_sampled_csv(p);
    } else {
      throw FormatError("unknown term kind \"" + kind + "\"");
    }
    spec.terms.push_back(std::move(term));
  }
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw FormatError(std::string("potential: ") + e.what());
  }
  return spec;
}

std::vector<cplx> read_sampled_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<cplx> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected index,re,im");
    }
    std::size_t index = 0;
    double re = 0.0, im = 0.0;
    try {
      index = std::stoul(a);
      re = std::stod(b);
      im = std::stod(c);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    if (index != values.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": indices must be 0, 1, 2, ...");
    }
    values.emplace_back(re, im);
  }
  return values;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

GridSpec load_grid(const std::filesystem::path& path) { return grid_from_json(read_json_file(path)); }

PotentialSpec load_potential(const std::filesystem::path& path) {
  return potential_from_json(read_json_file(path), path.parent_path());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw FormatError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FormatError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string spectrum_csv(const FilteredSpectrum& spectrum) {
  std::string out = "re,im,kept,reason\n";
  for (const cplx z : spectrum.kept) {
    out += format_double(z.real()) + "," + format_double(z.imag()) + ",1,\n";
  }
  for (const auto& r : spectrum.rejected) {
    out += format_double(r.value.real()) + "," + format_double(r.value.imag()) + ",0," + to_string(r.reason) + "\n";
  }
  return out;
}

}  // namespace ltlab
