#pragma once

// Minimal self-contained SVG line charts.

#include <optional>
#include <string>
#include <vector>

namespace mrwb {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr;  // empty or same length as y
    std::optional<double> slope;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    bool markers = true;
    std::vector<PlotSeries> series;
};

std::string render_svg(const PlotSpec& spec);

}  // namespace mrwb
