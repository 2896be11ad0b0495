#include "sforge/color.hpp"
#include "sforge/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace sforge;

namespace {

Hypercube flat_cube(int h, int w, std::vector<double> wl, double value) {
    const int bands = static_cast<int>(wl.size());
    Hypercube cube(h, w, bands, std::move(wl), CubeKind::reflectance);
    std::fill(cube.data.begin(), cube.data.end(), value);
    return cube;
}

// Gaussian reflectance spike centered at `peak_nm`, same spectrum everywhere.
Hypercube spike_cube(std::vector<double> wl, double peak_nm, double sd_nm) {
    Hypercube cube(1, 1, static_cast<int>(wl.size()), wl, CubeKind::reflectance);
    for (int b = 0; b < cube.bands; ++b) {
        const double d = (wl[b] - peak_nm) / sd_nm;
        cube.at(0, 0, b) = std::exp(-0.5 * d * d);
    }
    return cube;
}

} // namespace

TEST_SUITE("color") {

TEST_CASE("standard tables: grid, D65 anchor, interpolation") {
    const ColorTables& t = ColorTables::standard();
    REQUIRE(t.wavelengths_nm.size() == 81);
    CHECK(t.wavelengths_nm.front() == 380.0);
    CHECK(t.wavelengths_nm.back() == 780.0);
    CHECK(t.gamma == 1.4);
    CHECK(t.sample(t.d65, 560.0) == 100.0);       // table anchor
    CHECK(t.sample(t.ybar, 555.0) == 1.0);        // ybar peak row
    // halfway between the first two grid points
    CHECK(t.sample(t.d65, 382.5) ==
          doctest::Approx((49.9755 + 52.3118) / 2.0).epsilon(1e-12));
    // zero outside the tabulated range
    CHECK(t.sample(t.d65, 379.9) == 0.0);
    CHECK(t.sample(t.d65, 780.1) == 0.0);
    const Eigen::Vector3d wp = t.white_point();
    CHECK(wp(1) == 1.0);
    CHECK(wp(0) > 0.9);
    CHECK(wp(0) < 1.0); // D65 x < y
    CHECK(wp(2) > 1.0); // D65 is blue-rich
}

TEST_CASE("perfect reflector maps to Y = 1 exactly and pure white") {
    // Cube on exactly the table grid, so the integration weights match the
    // white-point computation term for term.
    const ColorTables& t = ColorTables::standard();
    const Hypercube cube = flat_cube(2, 3, t.wavelengths_nm, 1.0);
    const XyzImage xyz = cube_to_xyz(cube, t);
    REQUIRE(xyz.data.size() == 2u * 3u * 3u);
    for (std::size_t p = 0; p < 6; ++p) CHECK(xyz.data[p * 3 + 1] == 1.0);

    const RgbImage rgb = render_rgb(cube, t);
    CHECK(rgb.gamma_applied);
    for (std::uint8_t v : rgb.data) CHECK(v == 255);
}

TEST_CASE("ideal black stays black") {
    const ColorTables& t = ColorTables::standard();
    const RgbImage rgb = render_rgb(flat_cube(1, 2, t.wavelengths_nm, 0.0), t);
    for (std::uint8_t v : rgb.data) CHECK(v == 0);
}

TEST_CASE("gamma 1.4 encodes linear 0.5 as byte 155") {
    // scalar oracle first
    CHECK(std::lround(std::pow(0.5, 1.0 / 1.4) * 255.0) == 155);

    const ColorTables& t = ColorTables::standard();
    const Eigen::Vector3d wp = t.white_point();
    XyzImage xyz;
    xyz.height = 1;
    xyz.width = 1;
    xyz.data = {0.5 * wp(0), 0.5 * wp(1), 0.5 * wp(2)};
    const RgbImage rgb = xyz_to_rgb8(xyz, t, 1.4);
    CHECK(rgb.data[0] == 155);
    CHECK(rgb.data[1] == 155);
    CHECK(rgb.data[2] == 155);

    // gamma 1.0 leaves the linear value alone: 0.5 * 255 -> 128
    const RgbImage lin = xyz_to_rgb8(xyz, t, 1.0);
    CHECK(lin.data[0] == 128);
    CHECK_THROWS_AS(xyz_to_rgb8(xyz, t, 0.0), BadConfig);
}

TEST_CASE("spectral spikes land on the expected side of the gamut") {
    const ColorTables& t = ColorTables::standard();
    const std::vector<double> wl = linspace(400.0, 720.0, 65);

    const XyzImage blue = cube_to_xyz(spike_cube(wl, 450.0, 10.0), t);
    CHECK(blue.data[2] > blue.data[0]); // Z dominates X at 450 nm
    CHECK(blue.data[2] > blue.data[1]);

    const XyzImage red = cube_to_xyz(spike_cube(wl, 600.0, 10.0), t);
    CHECK(red.data[0] > red.data[1]); // X leads at 600 nm
    CHECK(red.data[1] > red.data[2]);

    const RgbImage blue_rgb = xyz_to_rgb8(blue, t, 1.4);
    CHECK(blue_rgb.data[2] >= blue_rgb.data[0]);
    CHECK(blue_rgb.data[2] >= blue_rgb.data[1]);
    const RgbImage red_rgb = xyz_to_rgb8(red, t, 1.4);
    CHECK(red_rgb.data[0] >= red_rgb.data[1]);
    CHECK(red_rgb.data[0] >= red_rgb.data[2]);
}

TEST_CASE("coverage and kind preconditions") {
    const ColorTables& t = ColorTables::standard();
    // front > 420 nm
    CHECK_THROWS_AS(cube_to_xyz(flat_cube(1, 1, linspace(430, 720, 30), 0.5), t),
                    CoverageError);
    // back < 700 nm
    CHECK_THROWS_AS(cube_to_xyz(flat_cube(1, 1, linspace(400, 690, 30), 0.5), t),
                    CoverageError);
    // exactly [420, 700] passes
    CHECK_NOTHROW(cube_to_xyz(flat_cube(1, 1, linspace(420, 700, 29), 0.5), t));

    Hypercube raw = flat_cube(1, 1, linspace(400, 720, 33), 0.5);
    raw.kind = CubeKind::raw_counts;
    CHECK_THROWS_AS(cube_to_xyz(raw, t), BadConfig);
}

TEST_CASE("mask_rgb blacks out background pixels only") {
    const ColorTables& t = ColorTables::standard();
    RgbImage rgb = render_rgb(flat_cube(2, 2, linspace(400, 720, 33), 0.6), t);
    const RgbImage before = rgb;

    BinaryMask mask;
    mask.height = 2;
    mask.width = 2;
    mask.data = {1, 0, 0, 1};
    mask_rgb(rgb, mask);
    for (int c = 0; c < 3; ++c) {
        CHECK(rgb.data[0 * 3 + c] == before.data[0 * 3 + c]);
        CHECK(rgb.data[1 * 3 + c] == 0);
        CHECK(rgb.data[2 * 3 + c] == 0);
        CHECK(rgb.data[3 * 3 + c] == before.data[3 * 3 + c]);
    }

    BinaryMask wrong;
    wrong.height = 1;
    wrong.width = 2;
    wrong.data = {1, 1};
    CHECK_THROWS_AS(mask_rgb(rgb, wrong), ShapeMismatch);
}

TEST_CASE("RGB png round-trip is bitwise") {
    const std::string dir = test_dir("color_png");
    const ColorTables& t = ColorTables::standard();
    const Hypercube cube = spike_cube(linspace(400, 720, 40), 550.0, 60.0);
    Hypercube big(5, 7, cube.bands, cube.wavelengths_nm, CubeKind::reflectance);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 7; ++c)
            for (int b = 0; b < cube.bands; ++b)
                big.at(r, c, b) = cube.at(0, 0, b) * (0.3 + 0.1 * ((r + c) % 7));

    const RgbImage out = render_rgb(big, t);
    write_rgb_png(path_join(dir, "img.png"), out);
    const RgbImage back = read_rgb_png(path_join(dir, "img.png"));
    REQUIRE(back.height == out.height);
    REQUIRE(back.width == out.width);
    CHECK(back.data == out.data);
}

TEST_CASE("rgb_to_unit rescales bytes to [0,1]") {
    RgbImage img;
    img.height = 1;
    img.width = 1;
    img.data = {0, 51, 255};
    const std::vector<double> u = rgb_to_unit(img);
    CHECK(u[0] == 0.0);
    CHECK(u[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(u[2] == 1.0);
}

} // TEST_SUITE
