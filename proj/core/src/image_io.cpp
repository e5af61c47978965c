#include "morphkit/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "binary_io.hpp"
#include "morphkit/error.hpp"

namespace morphkit {
namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(ch);
  }
  return token;
}

int parse_positive(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size() || value <= 0) throw std::invalid_argument(what);
    return value;
  } catch (const std::exception&) {
    fail(ErrorCode::FormatError, std::string("bad PGM ") + what + ": '" + token + "'");
  }
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  if (next_token(in) != "P5") fail(ErrorCode::FormatError, "not a binary PGM: " + path.string());
  const int width = parse_positive(next_token(in), "width");
  const int height = parse_positive(next_token(in), "height");
  if (parse_positive(next_token(in), "maxval") != 255) {
    fail(ErrorCode::FormatError, "only maxval 255 is supported: " + path.string());
  }

  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) fail(ErrorCode::FormatError, "truncated PGM payload: " + path.string());

  std::vector<double> pixels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) pixels[i] = raw[i] / 255.0;
  return Image(width, height, std::move(pixels));
}

void write_pgm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<unsigned char> raw(image.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<unsigned char>(std::lround(image.pixels()[i] * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) fail(ErrorCode::IoError, "write failed: " + path.string());
}

FlowField read_flow(const std::filesystem::path& path) {
  detail::LeReader in(path.string());
  in.expect_magic("AMFL");
  const auto width = in.get<std::uint32_t>();
  const auto height = in.get<std::uint32_t>();
  if (width == 0 || height == 0 || width > 1u << 15 || height > 1u << 15) {
    fail(ErrorCode::FormatError, "implausible flow dimensions in " + path.string());
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> h(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = in.get<float>();
    v[i] = in.get<float>();
  }
  in.expect_eof();
  return FlowField(static_cast<int>(width), static_cast<int>(height), std::move(h), std::move(v));
}

void write_flow(const std::filesystem::path& path, const FlowField& flow) {
  detail::LeWriter out(path.string());
  out.magic("AMFL");
  out.put(static_cast<std::uint32_t>(flow.width()));
  out.put(static_cast<std::uint32_t>(flow.height()));
  for (std::size_t i = 0; i < flow.size(); ++i) {
    out.put(static_cast<float>(flow.h()[i]));
    out.put(static_cast<float>(flow.v()[i]));
  }
  out.finish();
}

FlowField quantize_to_float32(const FlowField& flow) {
  std::vector<double> h(flow.h().begin(), flow.h().end());
  std::vector<double> v(flow.v().begin(), flow.v().end());
  for (double& x : h) x = static_cast<float>(x);
  for (double& x : v) x = static_cast<float>(x);
  return FlowField(flow.width(), flow.height(), std::move(h), std::move(v));
}

}  // namespace morphkit
