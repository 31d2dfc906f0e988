#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace satqkd {

/// One polyline of an x/y chart.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line chart. When clamp_negative_y is set, points
/// below zero are drawn at zero (the data files keep the true values).
void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series,
                          bool clamp_negative_y);

} // namespace satqkd
