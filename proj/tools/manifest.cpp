#include "manifest.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "ltlab/serialize.hpp"

namespace ltlab::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(2 * length);
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), sha256_file(path));
}

void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }

nlohmann::json RunManifest::to_json(int exit_code) const {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& [path, hash] : inputs_) inputs.push_back({{"path", path}, {"sha256", hash}});
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j = {{"command", command_},
                      {"argv", argv_},
                      {"tool_version", LTLAB_VERSION},
                      {"inputs", inputs},
                      {"outputs", outputs_},
                      {"wall_time_s", wall},
                      {"exit_code", exit_code}};
  j["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ltlab::cli
