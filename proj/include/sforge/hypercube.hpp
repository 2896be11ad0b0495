#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sforge {

enum class CubeKind { raw_counts, reflectance };

// H x W x B raster with a wavelength axis. Memory layout keeps one
// pixel's spectrum contiguous: data[(row*W + col)*B + band].
struct Hypercube {
    int height = 0;
    int width = 0;
    int bands = 0;
    std::vector<double> data;
    std::vector<double> wavelengths_nm;
    CubeKind kind = CubeKind::raw_counts;

    Hypercube() = default;
    Hypercube(int h, int w, int b, std::vector<double> wl,
              CubeKind k = CubeKind::raw_counts)
        : height(h), width(w), bands(b),
          data(static_cast<std::size_t>(h) * w * b, 0.0),
          wavelengths_nm(std::move(wl)), kind(k) {}

    double& at(int row, int col, int band) {
        return data[(static_cast<std::size_t>(row) * width + col) * bands + band];
    }
    double at(int row, int col, int band) const {
        return data[(static_cast<std::size_t>(row) * width + col) * bands + band];
    }
    std::size_t size() const { return data.size(); }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height) * width;
    }

    // Throws on a broken invariant: wavelength axis not strictly
    // increasing or of wrong length, non-finite values, reflectance
    // outside [0, r_max].
    void validate(double r_max = 2.0) const;
};

enum class Interleave { bil };
enum class DataType { float32, uint16 };
enum class ByteOrder { little, big };

struct EnviHeader {
    int samples = 0; // columns
    int lines = 0;   // rows
    int bands = 0;
    Interleave interleave = Interleave::bil;
    DataType data_type = DataType::float32;
    ByteOrder byte_order = ByteOrder::little;
    std::vector<double> wavelengths_nm; // may be empty

    static std::size_t bytes_per_sample(DataType t) {
        return t == DataType::float32 ? 4 : 2;
    }
    std::size_t payload_bytes() const {
        return static_cast<std::size_t>(lines) * bands * samples *
               bytes_per_sample(data_type);
    }
};

// key = value text, keys case-insensitive, wavelength list in braces.
// Required keys: samples, lines, bands, interleave, data type.
EnviHeader parse_envi_header(const std::string& text);
std::string format_envi_header(const EnviHeader& header);

// BIL payload: element (row, col, band) lives at byte offset
// ((row*bands + band)*samples + col) * sizeof(sample).
Hypercube read_bil_cube(const EnviHeader& header, const std::vector<std::uint8_t>& bytes);
std::pair<EnviHeader, std::vector<std::uint8_t>> write_bil_cube(const Hypercube& cube);

// Convenience: path without extension, writes/reads <base>.hdr + <base>.bil
void save_cube(const std::string& path_base, const Hypercube& cube);
Hypercube load_cube(const std::string& path_base);

// argmin |wavelengths[i] - target|, ties to the lower index.
// OutOfRange when target is beyond [min-50, max+50] nm.
int nearest_band_index(const Hypercube& cube, double target_nm);

// Restriction of a cube to the given band indices (ascending, unique).
Hypercube extract_bands(const Hypercube& cube, const std::vector<int>& band_indices);

std::vector<double> linspace(double lo, double hi, int n);

} // namespace sforge
