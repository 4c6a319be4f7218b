#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "extrofit/error.hpp"

namespace extrofit::cli {

InputDigest digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  InputDigest d;
  d.path = path.string();
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = in.gcount();
    if (got <= 0) break;
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
    d.bytes += static_cast<std::uintmax_t>(got);
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    d.sha256.push_back(kHex[md[i] >> 4]);
    d.sha256.push_back(kHex[md[i] & 0xF]);
  }
  return d;
}

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)), started_(std::chrono::steady_clock::now()) {}

std::string RunManifest::to_json_line() const {
  nlohmann::ordered_json j;
  j["tool"] = "extrofit";
  j["version"] = EXTROFIT_VERSION;
  j["command"] = command_;
  j["status"] = status_;
  j["options"] = options_;
  j["inputs"] = nlohmann::json::array();
  for (const auto& in : inputs_)
    j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}, {"bytes", in.bytes}});
  j["counts"] = counts_;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started_;
  j["duration_s"] = elapsed.count();
  return j.dump();
}

void RunManifest::append_to(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::Io, "cannot append manifest to " + path.string());
  out << to_json_line() << '\n';
}

}  // namespace extrofit::cli
