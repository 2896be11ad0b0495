#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sforge {

// Minimal PNG support over zlib: 8-bit grayscale or RGB, no alpha, no
// interlacing. The reader handles exactly what the writer emits plus
// the standard per-row filters, which is all the toolkit needs.
struct PngImage {
    int width = 0;
    int height = 0;
    int channels = 0; // 1 = gray, 3 = rgb
    std::vector<std::uint8_t> pixels; // row-major, channel-interleaved
};

std::vector<std::uint8_t> encode_png(const PngImage& image);
PngImage decode_png(const std::vector<std::uint8_t>& bytes);

void write_png(const std::string& path, const PngImage& image);
PngImage read_png(const std::string& path);

} // namespace sforge
