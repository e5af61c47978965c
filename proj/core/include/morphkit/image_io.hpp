#pragma once

#include <filesystem>

#include "morphkit/image.hpp"

namespace morphkit {

/// Binary 8-bit PGM (P5, maxval 255). Bytes map to v / 255 on load and
/// round(v * 255) on save.
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image& image);

/// AMFL flow file: "AMFL", u32 width, u32 height, then width*height records of
/// (f32 h, f32 v), little-endian, row-major. Values are stored as float32, so a
/// field round-trips bit-exactly only when its components are float32-exact.
FlowField read_flow(const std::filesystem::path& path);
void write_flow(const std::filesystem::path& path, const FlowField& flow);

/// Round every component to the nearest float32, i.e. the precision AMFL stores.
FlowField quantize_to_float32(const FlowField& flow);

}  // namespace morphkit
