#include "manifest.hpp"

#include <array>
#include <memory>

#include <json.hpp>
#include <openssl/evp.h>

#include "prefnet/error.hpp"
#include "util.hpp"

namespace prefnet::detail {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1)
    throw Error(ErrorKind::internal, "SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

void record_manifest(const std::filesystem::path& out_dir, const ManifestRun& run, std::string_view version) {
  const auto path = out_dir / "manifest.json";
  nlohmann::json root = nlohmann::json::object();
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      root = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::parse, path.string() + ": existing manifest is not valid JSON");
    }
    if (!root.is_object()) root = nlohmann::json::object();
  }
  root["tool"] = "prefnet";
  root["version"] = version;
  auto inputs = nlohmann::json::array();
  for (const auto& input : run.inputs) inputs.push_back({{"path", input}, {"sha256", sha256_file(input)}});
  auto outputs = nlohmann::json::array();
  for (const auto& output : run.outputs) {
    const auto relative = std::filesystem::path(output).lexically_relative(out_dir);
    outputs.push_back(relative.empty() || *relative.begin() == ".." ? output : relative.generic_string());
  }
  root["runs"][run.subcommand] = {{"seed", run.seed},
                                  {"config_sha256", sha256_hex(run.options_json)},
                                  {"options", nlohmann::json::parse(run.options_json.empty() ? "{}" : run.options_json)},
                                  {"inputs", std::move(inputs)},
                                  {"outputs", std::move(outputs)}};
  write_file(path, root.dump(2) + "\n");
}

}  // namespace prefnet::detail
