#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <streambuf>
#include <vector>

namespace extrofit {

// Read-only streambuf over zlib's gzFile. gzread passes plain files through
// unchanged, so this works for compressed and uncompressed input alike.
class GzInputBuf : public std::streambuf {
 public:
  explicit GzInputBuf(const std::filesystem::path& path, std::size_t buffer_size = 1 << 16);
  ~GzInputBuf() override;

  GzInputBuf(const GzInputBuf&) = delete;
  GzInputBuf& operator=(const GzInputBuf&) = delete;

  bool is_open() const noexcept { return handle_ != nullptr; }

 protected:
  int_type underflow() override;

 private:
  void* handle_ = nullptr;
  std::vector<char> buffer_;
};

// Opens `path` for reading, transparently inflating gzip content. Throws
// Error(Io) when the file cannot be opened.
class InputFile {
 public:
  explicit InputFile(const std::filesystem::path& path);
  std::istream& stream() noexcept { return stream_; }

 private:
  std::unique_ptr<GzInputBuf> buf_;
  std::istream stream_;
};

}  // namespace extrofit
