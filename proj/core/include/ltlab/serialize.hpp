#pragma once

// JSON and CSV forms of grids, potentials and spectra, plus atomic file
// output. Doubles are written in shortest round-trip form.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ltlab/discretize.hpp"
#include "ltlab/eigensolve.hpp"

namespace ltlab {

nlohmann::json to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);

/// Sampled terms are written with their `path` only.
nlohmann::json to_json(const PotentialSpec& spec);
/// Relative "path" entries of sampled terms resolve against `base_dir`.
PotentialSpec potential_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// CSV rows `index,re,im`; an optional header line is skipped.
std::vector<cplx> read_sampled_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);
GridSpec load_grid(const std::filesystem::path& path);
PotentialSpec load_potential(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Rows `re,im,kept,reason`: kept values first (reason empty), then rejected.
std::string spectrum_csv(const FilteredSpectrum& spectrum);

/// nlohmann's default output with non-finite doubles replaced by null.
nlohmann::json finite_or_null(double x);

}  // namespace ltlab
