#pragma once

#include <string>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// Minimal internal line-plot rendering (PNG output, 5x7 bitmap font).
// ---------------------------------------------------------------------------

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 640;
    int height = 440;
};

void render_line_plot(const std::string& path, const std::vector<PlotSeries>& series,
                      const PlotOptions& options);

} // namespace sforge
