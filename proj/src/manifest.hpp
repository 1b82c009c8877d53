#pragma once
// Run manifests: one manifest.json per output directory, one entry per subcommand.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace prefnet::detail {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestRun {
  std::string subcommand;
  std::string options_json;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

void record_manifest(const std::filesystem::path& out_dir, const ManifestRun& run, std::string_view version);

}  // namespace prefnet::detail
