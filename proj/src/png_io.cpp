#include "sforge/png_io.hpp"
#include "sforge/errors.hpp"

#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>

namespace sforge {

namespace {

void push_u32be(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(static_cast<std::uint8_t>(x >> 24));
    v.push_back(static_cast<std::uint8_t>(x >> 16));
    v.push_back(static_cast<std::uint8_t>(x >> 8));
    v.push_back(static_cast<std::uint8_t>(x));
}

std::uint32_t read_u32be(const std::uint8_t* p) {
    return std::uint32_t(p[0]) << 24 | std::uint32_t(p[1]) << 16 |
           std::uint32_t(p[2]) << 8 | std::uint32_t(p[3]);
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& payload) {
    push_u32be(out, static_cast<std::uint32_t>(payload.size()));
    std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    std::uint32_t crc = static_cast<std::uint32_t>(
        ::crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start)));
    push_u32be(out, crc);
}

const std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

} // namespace

std::vector<std::uint8_t> encode_png(const PngImage& image) {
    if (image.width <= 0 || image.height <= 0)
        throw BadConfig("png: dimensions must be positive");
    if (image.channels != 1 && image.channels != 3)
        throw BadConfig("png: only gray (1) and rgb (3) supported");
    const std::size_t row = static_cast<std::size_t>(image.width) * image.channels;
    if (image.pixels.size() != row * image.height)
        throw ShapeMismatch("png: pixel buffer size mismatch");

    // raw stream: filter byte 0 + scanline, per row
    std::vector<std::uint8_t> raw;
    raw.reserve((row + 1) * image.height);
    for (int y = 0; y < image.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* src = image.pixels.data() + row * y;
        raw.insert(raw.end(), src, src + row);
    }

    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (::compress2(compressed.data(), &bound, raw.data(),
                    static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png: zlib compression failed");
    compressed.resize(bound);

    std::vector<std::uint8_t> out(kSignature, kSignature + 8);
    std::vector<std::uint8_t> ihdr;
    push_u32be(ihdr, static_cast<std::uint32_t>(image.width));
    push_u32be(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);                                    // bit depth
    ihdr.push_back(image.channels == 1 ? 0 : 2);          // color type
    ihdr.push_back(0);                                    // compression
    ihdr.push_back(0);                                    // filter
    ihdr.push_back(0);                                    // interlace
    push_chunk(out, "IHDR", ihdr);
    push_chunk(out, "IDAT", compressed);
    push_chunk(out, "IEND", {});
    return out;
}

PngImage decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
        throw ParseError("png: bad signature");

    PngImage img;
    std::vector<std::uint8_t> idat;
    std::size_t pos = 8;
    bool saw_ihdr = false, saw_iend = false;
    while (pos + 8 <= bytes.size() && !saw_iend) {
        std::uint32_t len = read_u32be(bytes.data() + pos);
        if (pos + 12 + len > bytes.size()) throw ParseError("png: truncated chunk");
        const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
        const std::uint8_t* payload = bytes.data() + pos + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw ParseError("png: bad IHDR");
            img.width = static_cast<int>(read_u32be(payload));
            img.height = static_cast<int>(read_u32be(payload + 4));
            int depth = payload[8], color = payload[9], interlace = payload[12];
            if (depth != 8 || (color != 0 && color != 2) || interlace != 0)
                throw ParseError("png: unsupported format (need 8-bit gray/rgb, no interlace)");
            img.channels = color == 0 ? 1 : 3;
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        pos += 12 + len;
    }
    if (!saw_ihdr || img.width <= 0 || img.height <= 0)
        throw ParseError("png: missing IHDR");

    const std::size_t row = static_cast<std::size_t>(img.width) * img.channels;
    const std::size_t raw_size = (row + 1) * img.height;
    std::vector<std::uint8_t> raw(raw_size);
    uLongf out_len = static_cast<uLongf>(raw_size);
    if (::uncompress(raw.data(), &out_len, idat.data(),
                     static_cast<uLong>(idat.size())) != Z_OK ||
        out_len != raw_size)
        throw ParseError("png: inflate failed");

    img.pixels.assign(row * img.height, 0);
    const int bpp = img.channels;
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t filter = raw[(row + 1) * y];
        const std::uint8_t* src = raw.data() + (row + 1) * y + 1;
        std::uint8_t* dst = img.pixels.data() + row * y;
        const std::uint8_t* up = y > 0 ? img.pixels.data() + row * (y - 1) : nullptr;
        for (std::size_t x = 0; x < row; ++x) {
            int a = x >= static_cast<std::size_t>(bpp) ? dst[x - bpp] : 0;
            int b = up ? up[x] : 0;
            int c = (up && x >= static_cast<std::size_t>(bpp)) ? up[x - bpp] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: throw ParseError("png: unknown filter type");
            }
            dst[x] = static_cast<std::uint8_t>(v & 0xff);
        }
    }
    return img;
}

void write_png(const std::string& path, const PngImage& image) {
    auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

PngImage read_png(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

} // namespace sforge
