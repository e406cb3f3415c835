#pragma once

#include <string>
#include <vector>

namespace tllcd {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;  // non-positive and non-finite points are skipped
    std::vector<PlotSeries> series;
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec, int width = 640, int height = 400);

}  // namespace tllcd
