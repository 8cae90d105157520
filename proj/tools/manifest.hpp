#pragma once

// Run manifest: what was run, on which inputs (with content hashes), and
// what it wrote.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ltlab::cli {

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

class RunManifest {
 public:
  explicit RunManifest(std::string command, std::vector<std::string> argv);

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  nlohmann::json to_json(int exit_code) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::vector<std::pair<std::string, std::string>> inputs_;  // path, sha256
  std::vector<std::string> outputs_;
  std::optional<std::uint64_t> seed_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ltlab::cli
