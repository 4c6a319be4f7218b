#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace extrofit::cli {

struct InputDigest {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

// Hex SHA-256 of the raw file bytes (compressed bytes for .gz inputs).
InputDigest digest_file(const std::filesystem::path& path);

// One record per CLI run. Options and counts are kept as sorted key/value
// maps so the serialized form is stable across reruns.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set_option(const std::string& key, const std::string& value) { options_[key] = value; }
  void set_count(const std::string& key, double value) { counts_[key] = value; }
  void add_input(const std::filesystem::path& path) { inputs_.push_back(digest_file(path)); }
  void set_status(std::string status) { status_ = std::move(status); }

  // Single JSON line, no trailing newline.
  std::string to_json_line() const;
  // Appends the JSON line to `path` (created if missing).
  void append_to(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::map<std::string, std::string> options_;
  std::map<std::string, double> counts_;
  std::vector<InputDigest> inputs_;
  std::string status_ = "ok";
  std::chrono::steady_clock::time_point started_;
};

}  // namespace extrofit::cli
