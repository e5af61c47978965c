#pragma once

// Little-endian stream helpers for the AMFL / AMDC / AMFR formats.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "morphkit/error.hpp"

namespace morphkit::detail {

template <typename T>
T byteswap_if_big(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }
}

class LeWriter {
 public:
  explicit LeWriter(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) fail(ErrorCode::IoError, "cannot open for writing: " + path);
  }

  void magic(std::string_view tag) { out_.write(tag.data(), static_cast<std::streamsize>(tag.size())); }

  template <typename T>
  void put(T value) {
    value = byteswap_if_big(value);
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }

  void finish() {
    out_.flush();
    if (!out_) fail(ErrorCode::IoError, "write failed");
  }

 private:
  std::ofstream out_;
};

class LeReader {
 public:
  explicit LeReader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) fail(ErrorCode::IoError, "cannot open for reading: " + path);
  }

  void expect_magic(std::string_view tag) {
    std::string got(tag.size(), '\0');
    in_.read(got.data(), static_cast<std::streamsize>(got.size()));
    if (!in_ || got != tag) fail(ErrorCode::FormatError, "bad magic, expected " + std::string(tag));
  }

  template <typename T>
  T get() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in_) fail(ErrorCode::FormatError, "unexpected end of file");
    return byteswap_if_big(value);
  }

  void expect_eof() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      fail(ErrorCode::FormatError, "trailing bytes after payload");
    }
  }

 private:
  std::ifstream in_;
};

}  // namespace morphkit::detail
