#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace qrmm {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Reproducibility record written next to every CLI output file.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> options;  // resolved values
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string input_path;
  std::string input_digest;  // FNV-1a 64 of the input bytes, hex

  void set_input(const std::string& path);

  /// Writes <output_path>.manifest.json.
  void write(const std::string& output_path) const;
};

std::string fnv1a64_file(const std::string& path);

}  // namespace qrmm
