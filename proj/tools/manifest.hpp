#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace wordclust::cli {

std::string sha256_file(const std::filesystem::path& path);

// Provenance record written next to a command's primary output.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  nlohmann::json& config() { return config_; }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  // Checksums are taken at write time, after the outputs exist.
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::json config_ = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace wordclust::cli
