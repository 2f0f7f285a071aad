#include "qrmm/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "qrmm/errors.hpp"

namespace qrmm {

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for digest");
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

void RunManifest::set_input(const std::string& path) {
  input_path = path;
  input_digest = fnv1a64_file(path);
}

void RunManifest::write(const std::string& output_path) const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["options"] = options;
  if (has_seed) j["seed"] = seed;
  j["toolkit_version"] = kToolkitVersion;
  if (!input_path.empty()) {
    j["input"] = {{"path", input_path}, {"fnv1a64", input_digest}};
  }
  const std::string path = output_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qrmm
