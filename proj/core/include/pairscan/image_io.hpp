#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pairscan/image.hpp"

namespace pairscan {

// PNG codec. Decoding accepts any PNG libpng understands; gray stays 1
// channel, everything else becomes RGB (alpha is dropped).
RasterImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const RasterImage& img);

RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& img);

}  // namespace pairscan
