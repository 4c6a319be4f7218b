#include "extrofit/gz_stream.hpp"

#include <zlib.h>

#include "extrofit/error.hpp"

namespace extrofit {

GzInputBuf::GzInputBuf(const std::filesystem::path& path, std::size_t buffer_size)
    : buffer_(buffer_size) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f != nullptr) {
    gzbuffer(f, static_cast<unsigned>(buffer_size));
    handle_ = f;
  }
  setg(buffer_.data(), buffer_.data(), buffer_.data());
}

GzInputBuf::~GzInputBuf() {
  if (handle_ != nullptr) gzclose(static_cast<gzFile>(handle_));
}

GzInputBuf::int_type GzInputBuf::underflow() {
  if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
  if (handle_ == nullptr) return traits_type::eof();
  const int n = gzread(static_cast<gzFile>(handle_), buffer_.data(),
                       static_cast<unsigned>(buffer_.size()));
  if (n <= 0) return traits_type::eof();
  setg(buffer_.data(), buffer_.data(), buffer_.data() + n);
  return traits_type::to_int_type(*gptr());
}

InputFile::InputFile(const std::filesystem::path& path)
    : buf_(std::make_unique<GzInputBuf>(path)), stream_(buf_.get()) {
  if (!buf_->is_open()) throw Error(ErrorCode::Io, "cannot open " + path.string());
}

}  // namespace extrofit
