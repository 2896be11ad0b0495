#include "sforge/plot.hpp"
#include "sforge/errors.hpp"
#include "sforge/png_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sforge {

namespace {

// 5x7 glyphs, one byte of 5 column bits per row, uppercase-only alphabet.
struct Glyph {
    char c;
    unsigned char rows[7];
};

constexpr Glyph kFont[] = {
    {' ', {0, 0, 0, 0, 0, 0, 0}},
    {'0', {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110}},
    {'1', {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'2', {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111}},
    {'3', {0b01110, 0b10001, 0b00001, 0b00110, 0b00001, 0b10001, 0b01110}},
    {'4', {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010}},
    {'5', {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110}},
    {'6', {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110}},
    {'7', {0b11111, 0b00001, 0b00010, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'8', {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110}},
    {'9', {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100}},
    {'A', {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'B', {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110}},
    {'C', {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110}},
    {'D', {0b11100, 0b10010, 0b10001, 0b10001, 0b10001, 0b10010, 0b11100}},
    {'E', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111}},
    {'F', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'G', {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111}},
    {'H', {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'I', {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'J', {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100}},
    {'K', {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001}},
    {'L', {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111}},
    {'M', {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001}},
    {'N', {0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001}},
    {'O', {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'P', {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'Q', {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101}},
    {'R', {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001}},
    {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
    {'T', {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'U', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'V', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100}},
    {'W', {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010}},
    {'X', {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001}},
    {'Y', {0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'Z', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111}},
    {'.', {0, 0, 0, 0, 0, 0b01100, 0b01100}},
    {',', {0, 0, 0, 0, 0, 0b00100, 0b01000}},
    {'-', {0, 0, 0, 0b11111, 0, 0, 0}},
    {'+', {0, 0b00100, 0b00100, 0b11111, 0b00100, 0b00100, 0}},
    {':', {0, 0b01100, 0b01100, 0, 0b01100, 0b01100, 0}},
    {'(', {0b00010, 0b00100, 0b01000, 0b01000, 0b01000, 0b00100, 0b00010}},
    {')', {0b01000, 0b00100, 0b00010, 0b00010, 0b00010, 0b00100, 0b01000}},
    {'_', {0, 0, 0, 0, 0, 0, 0b11111}},
    {'/', {0b00001, 0b00010, 0b00010, 0b00100, 0b01000, 0b01000, 0b10000}},
    {'=', {0, 0, 0b11111, 0, 0b11111, 0, 0}},
    {'%', {0b11001, 0b11010, 0b00010, 0b00100, 0b01000, 0b01011, 0b10011}},
};

const unsigned char* glyph_rows(char c) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const auto& g : kFont)
        if (g.c == u) return g.rows;
    return kFont[0].rows; // unknown -> blank
}

struct Rgb {
    unsigned char r, g, b;
};

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kPalette[] = {{214, 39, 40},  {31, 119, 180}, {44, 160, 44},
                            {255, 127, 14}, {148, 103, 189}, {23, 190, 207}};

class Canvas {
public:
    Canvas(int w, int h) {
        img_.width = w;
        img_.height = h;
        img_.channels = 3;
        img_.pixels.assign(static_cast<std::size_t>(w) * h * 3, 255);
    }

    void set(int x, int y, Rgb c) {
        if (x < 0 || x >= img_.width || y < 0 || y >= img_.height) return;
        const std::size_t o = (static_cast<std::size_t>(y) * img_.width + x) * 3;
        img_.pixels[o] = c.r;
        img_.pixels[o + 1] = c.g;
        img_.pixels[o + 2] = c.b;
    }

    void line(int x0, int y0, int x1, int y1, Rgb c) {
        const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            set(x0, y0, c);
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void text(int x, int y, const std::string& s, Rgb c) {
        for (char ch : s) {
            const unsigned char* rows = glyph_rows(ch);
            for (int ry = 0; ry < 7; ++ry)
                for (int rx = 0; rx < 5; ++rx)
                    if (rows[ry] & (1 << (4 - rx))) set(x + rx, y + ry, c);
            x += 6;
        }
    }

    // Text rotated 90 degrees counter-clockwise (for the y-axis label).
    void text_vertical(int x, int y, const std::string& s, Rgb c) {
        for (char ch : s) {
            const unsigned char* rows = glyph_rows(ch);
            for (int ry = 0; ry < 7; ++ry)
                for (int rx = 0; rx < 5; ++rx)
                    if (rows[ry] & (1 << (4 - rx))) set(x + ry, y - rx, c);
            y -= 6;
        }
    }

    const PngImage& image() const { return img_; }

private:
    PngImage img_;
};

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

void render_line_plot(const std::string& path, const std::vector<PlotSeries>& series,
                      const PlotOptions& options) {
    if (series.empty()) throw BadConfig("plot needs at least one series");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw ShapeMismatch("plot series x/y lengths differ");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
            any = true;
        }
    }
    if (!any) throw BadConfig("plot has no finite data points");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        const double pad = ymin == 0.0 ? 0.5 : std::abs(ymin) * 0.1;
        ymin -= pad;
        ymax += pad;
    }
    const double ypad = (ymax - ymin) * 0.05;
    ymin -= ypad;
    ymax += ypad;

    const int left = 64, right = 16, top = 28, bottom = 44;
    const int pw = options.width - left - right;
    const int ph = options.height - top - bottom;
    if (pw < 16 || ph < 16) throw BadConfig("plot canvas too small");

    Canvas canvas(options.width, options.height);
    auto px = [&](double x) {
        return left + static_cast<int>(std::lround((x - xmin) / (xmax - xmin) * pw));
    };
    auto py = [&](double y) {
        return top + ph - static_cast<int>(std::lround((y - ymin) / (ymax - ymin) * ph));
    };

    // Frame and ticks.
    canvas.line(left, top, left, top + ph, kBlack);
    canvas.line(left, top + ph, left + pw, top + ph, kBlack);
    const int n_ticks = 5;
    for (int t = 0; t < n_ticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / (n_ticks - 1);
        const double fy = ymin + (ymax - ymin) * t / (n_ticks - 1);
        const int tx = px(fx), ty = py(fy);
        canvas.line(tx, top + ph, tx, top + ph + 4, kBlack);
        const std::string xl = tick_label(fx);
        canvas.text(tx - static_cast<int>(xl.size()) * 3, top + ph + 7, xl, kBlack);
        canvas.line(left - 4, ty, left, ty, kBlack);
        const std::string yl = tick_label(fy);
        canvas.text(left - 6 - static_cast<int>(yl.size()) * 6, ty - 3, yl, kBlack);
    }

    canvas.text((options.width - static_cast<int>(options.title.size()) * 6) / 2, 8,
                options.title, kBlack);
    canvas.text((options.width - static_cast<int>(options.x_label.size()) * 6) / 2,
                options.height - 12, options.x_label, kBlack);
    canvas.text_vertical(4, (options.height + static_cast<int>(options.y_label.size()) * 6) / 2,
                         options.y_label, kBlack);

    // Series polylines + legend.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const Rgb color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
        const auto& sr = series[s];
        for (std::size_t i = 1; i < sr.x.size(); ++i) {
            if (!std::isfinite(sr.y[i - 1]) || !std::isfinite(sr.y[i])) continue;
            canvas.line(px(sr.x[i - 1]), py(sr.y[i - 1]), px(sr.x[i]), py(sr.y[i]),
                        color);
        }
        if (!sr.label.empty()) {
            const int ly = top + 6 + static_cast<int>(s) * 12;
            const int lx = left + pw - 18 - static_cast<int>(sr.label.size()) * 6;
            canvas.line(lx, ly + 3, lx + 12, ly + 3, color);
            canvas.text(lx + 16, ly, sr.label, kBlack);
        }
    }

    write_png(path, canvas.image());
}

} // namespace sforge
