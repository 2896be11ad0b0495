#include "sforge/errors.hpp"
#include "sforge/plot.hpp"
#include "sforge/png_io.hpp"
#include "sforge/rng.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sforge;

TEST_SUITE("plot_png") {

TEST_CASE("gray and rgb png round-trips are bitwise") {
    PngImage gray;
    gray.width = 5;
    gray.height = 3;
    gray.channels = 1;
    gray.pixels.resize(15);
    for (int i = 0; i < 15; ++i) gray.pixels[i] = static_cast<std::uint8_t>(i * 17);
    const PngImage gback = decode_png(encode_png(gray));
    CHECK(gback.width == 5);
    CHECK(gback.height == 3);
    CHECK(gback.channels == 1);
    CHECK(gback.pixels == gray.pixels);

    Rng rng(12);
    PngImage rgb;
    rgb.width = 16;
    rgb.height = 9;
    rgb.channels = 3;
    rgb.pixels.resize(16 * 9 * 3);
    for (auto& p : rgb.pixels)
        p = static_cast<std::uint8_t>(rng.below(256));
    const PngImage rback = decode_png(encode_png(rgb));
    CHECK(rback.channels == 3);
    CHECK(rback.pixels == rgb.pixels);

    // encoding is deterministic
    CHECK(encode_png(rgb) == encode_png(rgb));
}

TEST_CASE("png file io round-trip") {
    const std::string dir = test_dir("png_io");
    PngImage img;
    img.width = 7;
    img.height = 4;
    img.channels = 3;
    img.pixels.assign(7 * 4 * 3, 0);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = static_cast<std::uint8_t>((i * i) % 251);
    const std::string path = path_join(dir, "img.png");
    write_png(path, img);
    const PngImage back = read_png(path);
    CHECK(back.pixels == img.pixels);
    CHECK_THROWS_AS(read_png(path_join(dir, "missing.png")), IoError);
}

TEST_CASE("png input validation") {
    PngImage bad;
    bad.width = 0;
    bad.height = 2;
    bad.channels = 1;
    bad.pixels.assign(2, 0);
    CHECK_THROWS_AS(encode_png(bad), BadConfig);
    bad.width = 2;
    bad.channels = 2;
    bad.pixels.assign(8, 0);
    CHECK_THROWS_AS(encode_png(bad), BadConfig);
    bad.channels = 3;
    bad.pixels.assign(5, 0); // should be 12
    CHECK_THROWS_AS(encode_png(bad), ShapeMismatch);

    CHECK_THROWS_AS(decode_png({'n', 'o', 't', 'a', 'p', 'n', 'g', '!'}), ParseError);

    PngImage ok;
    ok.width = 6;
    ok.height = 6;
    ok.channels = 1;
    ok.pixels.assign(36, 128);
    std::vector<std::uint8_t> bytes = encode_png(ok);
    bytes.resize(bytes.size() / 2); // truncate mid-chunk
    CHECK_THROWS_AS(decode_png(bytes), ParseError);
}

TEST_CASE("line plot renders a decodable png of the configured size") {
    const std::string dir = test_dir("plot_basic");
    PlotSeries s1;
    s1.label = "TRAIN";
    for (int i = 0; i <= 40; ++i) {
        s1.x.push_back(i);
        s1.y.push_back(1.0 / (1.0 + 0.2 * i));
    }
    PlotSeries s2;
    s2.label = "SMOOTH";
    for (int i = 0; i <= 40; ++i) {
        s2.x.push_back(i);
        s2.y.push_back(0.8 / (1.0 + 0.15 * i) + 0.05);
    }
    PlotOptions opt;
    opt.title = "LOSS TRACE";
    opt.x_label = "EPOCH";
    opt.y_label = "MRAE";
    opt.width = 320;
    opt.height = 240;

    const std::string path = path_join(dir, "plot.png");
    render_line_plot(path, {s1, s2}, opt);
    const PngImage img = read_png(path);
    CHECK(img.width == 320);
    CHECK(img.height == 240);
    CHECK(img.channels == 3);

    // the frame is drawn in black and the canvas is not uniform
    bool has_black = false, has_nonblackwhite = false;
    for (std::size_t p = 0; p * 3 < img.pixels.size(); ++p) {
        const int r = img.pixels[p * 3], g = img.pixels[p * 3 + 1],
                  b = img.pixels[p * 3 + 2];
        if (r == 0 && g == 0 && b == 0) has_black = true;
        if (!(r == g && g == b)) has_nonblackwhite = true; // colored series line
    }
    CHECK(has_black);
    CHECK(has_nonblackwhite);

    // deterministic output bytes
    const std::string path2 = path_join(dir, "plot2.png");
    render_line_plot(path2, {s1, s2}, opt);
    CHECK(same_bytes(path, path2));
}

TEST_CASE("degenerate plot inputs") {
    const std::string dir = test_dir("plot_bad");
    const std::string path = path_join(dir, "p.png");
    PlotOptions opt;

    CHECK_THROWS_AS(render_line_plot(path, {}, opt), BadConfig);

    PlotSeries ragged;
    ragged.x = {0.0, 1.0};
    ragged.y = {0.0};
    CHECK_THROWS_AS(render_line_plot(path, {ragged}, opt), ShapeMismatch);

    PlotSeries nans;
    nans.x = {0.0, 1.0};
    nans.y = {std::nan(""), std::nan("")};
    CHECK_THROWS_AS(render_line_plot(path, {nans}, opt), BadConfig);

    PlotSeries fine;
    fine.x = {0.0, 1.0};
    fine.y = {0.5, 0.7};
    PlotOptions tiny = opt;
    tiny.width = 90; // plot area collapses below the 16 px minimum
    CHECK_THROWS_AS(render_line_plot(path, {fine}, tiny), BadConfig);

    // constant series still renders (axis range is padded, not degenerate)
    PlotSeries flat;
    flat.x = {0.0, 1.0, 2.0};
    flat.y = {0.4, 0.4, 0.4};
    CHECK_NOTHROW(render_line_plot(path, {flat}, opt));
    CHECK(read_png(path).width == opt.width);
}

} // TEST_SUITE
