#pragma once

#include "sforge/hypercube.hpp"
#include "sforge/segmentation.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// Hypercube -> RGB rendering under Illuminant D65 and the CIE 1931 2-degree
// observer, with a single power-law gamma (default 1.4).
// ---------------------------------------------------------------------------

struct ColorTables {
    std::vector<double> wavelengths_nm; // 380..780 nm, 5 nm steps
    std::vector<double> xbar, ybar, zbar;
    std::vector<double> d65; // relative spectral power, 100 at 560 nm
    double gamma = 1.4;

    static const ColorTables& standard();

    // Linear interpolation onto an arbitrary wavelength; zero outside the
    // tabulated range.
    double sample(const std::vector<double>& column, double nm) const;

    // XYZ of the perfect reflector on the 5 nm grid, normalized to Y = 1.
    Eigen::Vector3d white_point() const;
};

struct XyzImage {
    int height = 0;
    int width = 0;
    std::vector<double> data; // (row*W + col)*3 + {0:X, 1:Y, 2:Z}
};

struct RgbImage {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data; // (row*W + col)*3 + channel
    bool gamma_applied = false;

    std::size_t pixel_count() const { return data.size() / 3; }
};

// Per-pixel X = k * sum_b R(l_b) S_D65(l_b) xbar(l_b) dl_b over the cube's own
// grid (trapezoidal band widths), with k chosen so a perfect reflector gets
// Y = 1 exactly.  Requires coverage of at least [420, 700] nm.
XyzImage cube_to_xyz(const Hypercube& cube, const ColorTables& tables);

// RGB primaries (Rec.709 chromaticities) balanced so the tables' own white
// point maps to linear (1,1,1); columns are the primary XYZ vectors.
Eigen::Matrix3d linear_rgb_to_xyz_matrix(const ColorTables& tables);

// Linear transform, clip to [0,1], encode v^(1/gamma), quantize round(v*255).
RgbImage xyz_to_rgb8(const XyzImage& xyz, const ColorTables& tables, double gamma = 1.4);

RgbImage render_rgb(const Hypercube& cube, const ColorTables& tables);

// Zero out pixels where the mask is false (masked-out background -> black).
void mask_rgb(RgbImage& image, const BinaryMask& mask);

void write_rgb_png(const std::string& path, const RgbImage& image);
RgbImage read_rgb_png(const std::string& path);

// 8-bit RGB -> [0,1] floats, channel-last (row*W + col)*3 + c.
std::vector<double> rgb_to_unit(const RgbImage& image);

} // namespace sforge
