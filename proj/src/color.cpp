#include "sforge/color.hpp"
#include "sforge/errors.hpp"
#include "sforge/png_io.hpp"

#include <algorithm>
#include <cmath>

namespace sforge {

namespace {

// CIE 1931 2-degree standard colorimetric observer, 380-780 nm at 5 nm.
constexpr int kTableSize = 81;
constexpr double kCmf[kTableSize][3] = {
    {0.001368, 0.000039, 0.006450}, {0.002236, 0.000064, 0.010550},
    {0.004243, 0.000120, 0.020050}, {0.007650, 0.000217, 0.036210},
    {0.014310, 0.000396, 0.067850}, {0.023190, 0.000640, 0.110200},
    {0.043510, 0.001210, 0.207400}, {0.077630, 0.002180, 0.371300},
    {0.134380, 0.004000, 0.645600}, {0.214770, 0.007300, 1.039050},
    {0.283900, 0.011600, 1.385600}, {0.328500, 0.016840, 1.622960},
    {0.348280, 0.023000, 1.747060}, {0.348060, 0.029800, 1.782600},
    {0.336200, 0.038000, 1.772110}, {0.318700, 0.048000, 1.744100},
    {0.290800, 0.060000, 1.669200}, {0.251100, 0.073900, 1.528100},
    {0.195360, 0.090980, 1.287640}, {0.142100, 0.112600, 1.041900},
    {0.095640, 0.139020, 0.812950}, {0.057950, 0.169300, 0.616200},
    {0.032010, 0.208020, 0.465180}, {0.014700, 0.258600, 0.353300},
    {0.004900, 0.323000, 0.272000}, {0.002400, 0.407300, 0.212300},
    {0.009300, 0.503000, 0.158200}, {0.029100, 0.608200, 0.111700},
    {0.063270, 0.710000, 0.078250}, {0.109600, 0.793200, 0.057250},
    {0.165500, 0.862000, 0.042160}, {0.225750, 0.914850, 0.029840},
    {0.290400, 0.954000, 0.020300}, {0.359700, 0.980300, 0.013400},
    {0.433450, 0.994950, 0.008750}, {0.512050, 1.000000, 0.005750},
    {0.594500, 0.995000, 0.003900}, {0.678400, 0.978600, 0.002750},
    {0.762100, 0.952000, 0.002100}, {0.842500, 0.915400, 0.001800},
    {0.916300, 0.870000, 0.001650}, {0.978600, 0.816300, 0.001400},
    {1.026300, 0.757000, 0.001100}, {1.056700, 0.694900, 0.001000},
    {1.062200, 0.631000, 0.000800}, {1.045600, 0.566800, 0.000600},
    {1.002600, 0.503000, 0.000340}, {0.938400, 0.441200, 0.000240},
    {0.854450, 0.381000, 0.000190}, {0.751400, 0.321000, 0.000100},
    {0.642400, 0.265000, 0.000050}, {0.541900, 0.217000, 0.000030},
    {0.447900, 0.175000, 0.000020}, {0.360800, 0.138200, 0.000010},
    {0.283500, 0.107000, 0.000000}, {0.218700, 0.081600, 0.000000},
    {0.164900, 0.061000, 0.000000}, {0.121200, 0.044580, 0.000000},
    {0.087400, 0.032000, 0.000000}, {0.063600, 0.023200, 0.000000},
    {0.046770, 0.017000, 0.000000}, {0.032900, 0.011920, 0.000000},
    {0.022700, 0.008210, 0.000000}, {0.015840, 0.005723, 0.000000},
    {0.011359, 0.004102, 0.000000}, {0.008111, 0.002929, 0.000000},
    {0.005790, 0.002091, 0.000000}, {0.004109, 0.001484, 0.000000},
    {0.002899, 0.001047, 0.000000}, {0.002049, 0.000740, 0.000000},
    {0.001440, 0.000520, 0.000000}, {0.001000, 0.000361, 0.000000},
    {0.000690, 0.000249, 0.000000}, {0.000476, 0.000172, 0.000000},
    {0.000332, 0.000120, 0.000000}, {0.000235, 0.000085, 0.000000},
    {0.000166, 0.000060, 0.000000}, {0.000117, 0.000042, 0.000000},
    {0.000083, 0.000030, 0.000000}, {0.000059, 0.000021, 0.000000},
    {0.000042, 0.000015, 0.000000}};

// CIE Standard Illuminant D65 relative SPD, 380-780 nm at 5 nm, 100 @ 560 nm.
constexpr double kD65[kTableSize] = {
    49.9755, 52.3118, 54.6482, 68.7015, 82.7549, 87.1204, 91.4860, 92.4589,
    93.4318, 90.0570, 86.6823, 95.7736, 104.865, 110.936, 117.008, 117.410,
    117.812, 116.336, 114.861, 115.392, 115.923, 112.367, 108.811, 109.082,
    109.354, 108.578, 107.802, 106.296, 104.790, 106.239, 107.689, 106.047,
    104.405, 104.225, 104.046, 102.023, 100.000, 98.1671, 96.3342, 96.0611,
    95.7880, 92.2368, 88.6856, 89.3459, 90.0062, 89.8026, 89.5991, 88.6489,
    87.6987, 85.4936, 83.2886, 83.4939, 83.6992, 81.8630, 80.0268, 80.1207,
    80.2146, 81.2462, 82.2778, 80.2810, 78.2842, 74.0027, 69.7213, 70.6652,
    71.6091, 72.9790, 74.3490, 67.9765, 61.6040, 65.7448, 69.8856, 72.4863,
    75.0870, 69.3398, 63.5927, 55.0054, 46.4183, 56.6118, 66.8054, 65.0941,
    63.3828};

ColorTables build_standard_tables() {
    ColorTables t;
    t.wavelengths_nm.resize(kTableSize);
    t.xbar.resize(kTableSize);
    t.ybar.resize(kTableSize);
    t.zbar.resize(kTableSize);
    t.d65.resize(kTableSize);
    for (int i = 0; i < kTableSize; ++i) {
        t.wavelengths_nm[i] = 380.0 + 5.0 * i;
        t.xbar[i] = kCmf[i][0];
        t.ybar[i] = kCmf[i][1];
        t.zbar[i] = kCmf[i][2];
        t.d65[i] = kD65[i];
    }
    return t;
}

// Trapezoidal band widths for an arbitrary strictly increasing grid.
std::vector<double> band_widths(const std::vector<double>& wl) {
    const std::size_t n = wl.size();
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    w[0] = (wl[1] - wl[0]) / 2.0;
    w[n - 1] = (wl[n - 1] - wl[n - 2]) / 2.0;
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (wl[i + 1] - wl[i - 1]) / 2.0;
    return w;
}

} // namespace

const ColorTables& ColorTables::standard() {
    static const ColorTables tables = build_standard_tables();
    return tables;
}

double ColorTables::sample(const std::vector<double>& column, double nm) const {
    if (nm < wavelengths_nm.front() || nm > wavelengths_nm.back()) return 0.0;
    const auto hi =
        std::lower_bound(wavelengths_nm.begin(), wavelengths_nm.end(), nm);
    if (hi == wavelengths_nm.begin()) return column.front();
    const std::size_t j = static_cast<std::size_t>(hi - wavelengths_nm.begin());
    if (j >= wavelengths_nm.size()) return column.back();
    const double x0 = wavelengths_nm[j - 1], x1 = wavelengths_nm[j];
    const double f = (nm - x0) / (x1 - x0);
    return column[j - 1] * (1.0 - f) + column[j] * f;
}

Eigen::Vector3d ColorTables::white_point() const {
    double x = 0, y = 0, z = 0;
    const auto widths = band_widths(wavelengths_nm);
    for (std::size_t i = 0; i < wavelengths_nm.size(); ++i) {
        x += d65[i] * xbar[i] * widths[i];
        y += d65[i] * ybar[i] * widths[i];
        z += d65[i] * zbar[i] * widths[i];
    }
    return Eigen::Vector3d(x / y, 1.0, z / y);
}

XyzImage cube_to_xyz(const Hypercube& cube, const ColorTables& tables) {
    if (cube.kind != CubeKind::reflectance)
        throw BadConfig("cube_to_xyz requires a reflectance cube");
    if (cube.wavelengths_nm.front() > 420.0 || cube.wavelengths_nm.back() < 700.0)
        throw CoverageError("cube must cover at least [420, 700] nm");

    // Per-band integration weights on the cube's own grid.
    const auto widths = band_widths(cube.wavelengths_nm);
    std::vector<double> wx(cube.bands), wy(cube.bands), wz(cube.bands);
    double norm = 0.0;
    for (int b = 0; b < cube.bands; ++b) {
        const double nm = cube.wavelengths_nm[b];
        const double s = tables.sample(tables.d65, nm) * widths[b];
        wx[b] = s * tables.sample(tables.xbar, nm);
        wy[b] = s * tables.sample(tables.ybar, nm);
        wz[b] = s * tables.sample(tables.zbar, nm);
        norm += wy[b];
    }
    if (!(norm > 0.0)) throw CoverageError("luminance weights sum to zero");

    XyzImage img;
    img.height = cube.height;
    img.width = cube.width;
    img.data.assign(static_cast<std::size_t>(cube.height) * cube.width * 3, 0.0);
    for (int r = 0; r < cube.height; ++r) {
        for (int c = 0; c < cube.width; ++c) {
            double x = 0, y = 0, z = 0;
            const std::size_t base =
                (static_cast<std::size_t>(r) * cube.width + c) * cube.bands;
            for (int b = 0; b < cube.bands; ++b) {
                const double refl = cube.data[base + b];
                x += refl * wx[b];
                y += refl * wy[b];
                z += refl * wz[b];
            }
            const std::size_t o = (static_cast<std::size_t>(r) * cube.width + c) * 3;
            img.data[o] = x / norm;
            img.data[o + 1] = y / norm;
            img.data[o + 2] = z / norm;
        }
    }
    return img;
}

Eigen::Matrix3d linear_rgb_to_xyz_matrix(const ColorTables& tables) {
    // Rec.709 primary chromaticities; scale each primary so the tables'
    // white point is linear RGB (1,1,1).
    const double xr = 0.64, yr = 0.33;
    const double xg = 0.30, yg = 0.60;
    const double xb = 0.15, yb = 0.06;
    Eigen::Matrix3d prim;
    prim.col(0) << xr / yr, 1.0, (1.0 - xr - yr) / yr;
    prim.col(1) << xg / yg, 1.0, (1.0 - xg - yg) / yg;
    prim.col(2) << xb / yb, 1.0, (1.0 - xb - yb) / yb;
    const Eigen::Vector3d scale = prim.fullPivLu().solve(tables.white_point());
    return prim * scale.asDiagonal();
}

RgbImage xyz_to_rgb8(const XyzImage& xyz, const ColorTables& tables, double gamma) {
    if (!(gamma > 0.0)) throw BadConfig("gamma must be positive");
    const Eigen::Matrix3d to_rgb = linear_rgb_to_xyz_matrix(tables).inverse();
    const double inv_gamma = 1.0 / gamma;

    RgbImage out;
    out.height = xyz.height;
    out.width = xyz.width;
    out.gamma_applied = true;
    out.data.resize(xyz.data.size());
    for (std::size_t p = 0; p * 3 < xyz.data.size(); ++p) {
        const Eigen::Vector3d v(xyz.data[p * 3], xyz.data[p * 3 + 1],
                                xyz.data[p * 3 + 2]);
        const Eigen::Vector3d rgb = to_rgb * v;
        for (int c = 0; c < 3; ++c) {
            const double lin = std::clamp(rgb(c), 0.0, 1.0);
            const double enc = std::pow(lin, inv_gamma);
            out.data[p * 3 + c] =
                static_cast<std::uint8_t>(std::lround(enc * 255.0));
        }
    }
    return out;
}

RgbImage render_rgb(const Hypercube& cube, const ColorTables& tables) {
    return xyz_to_rgb8(cube_to_xyz(cube, tables), tables, tables.gamma);
}

void mask_rgb(RgbImage& image, const BinaryMask& mask) {
    if (mask.height != image.height || mask.width != image.width)
        throw ShapeMismatch("mask shape does not match image");
    for (std::size_t p = 0; p < mask.data.size(); ++p)
        if (!mask.data[p])
            image.data[p * 3] = image.data[p * 3 + 1] = image.data[p * 3 + 2] = 0;
}

void write_rgb_png(const std::string& path, const RgbImage& image) {
    PngImage png;
    png.width = image.width;
    png.height = image.height;
    png.channels = 3;
    png.pixels = image.data;
    write_png(path, png);
}

RgbImage read_rgb_png(const std::string& path) {
    PngImage png = read_png(path);
    if (png.channels != 3) throw ParseError(path + ": expected RGB PNG");
    RgbImage img;
    img.height = png.height;
    img.width = png.width;
    img.data = std::move(png.pixels);
    img.gamma_applied = true;
    return img;
}

std::vector<double> rgb_to_unit(const RgbImage& image) {
    std::vector<double> out(image.data.size());
    for (std::size_t i = 0; i < image.data.size(); ++i)
        out[i] = image.data[i] / 255.0;
    return out;
}

} // namespace sforge
