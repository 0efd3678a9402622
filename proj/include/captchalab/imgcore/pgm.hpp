#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "captchalab/imgcore/image.hpp"

namespace captchalab::imgcore {

// Binary PGM: "P5\n<w> <h>\n255\n" followed by raw row-major bytes.
std::vector<std::uint8_t> pgm_encode(const RasterImage& img);

// Accepts any whitespace and '#' comments in the header; maxval must be 255
// and the payload exactly width * height bytes. Throws CodecError.
RasterImage pgm_decode(std::span<const std::uint8_t> bytes);

RasterImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const RasterImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace captchalab::imgcore
