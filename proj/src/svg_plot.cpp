#include "satqkd/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace satqkd {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 160.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

} // namespace

void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series,
                          bool clamp_negative_y) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("series x/y lengths disagree");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = clamp_negative_y ? std::max(0.0, s.y[i]) : s.y[i];
            if (first) {
                x_min = x_max = s.x[i];
                y_min = y_max = y;
                first = false;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) {
        return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
    };
    auto sy = [&](double y) {
        return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-size=\"16\">" << title;
    if (clamp_negative_y) out << " (negative values clamped to 0)";
    out << "</text>\n";

    // axes
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h
        << "\" x2=\"" << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 4.0;
        const double yv = y_min + (y_max - y_min) * i / 4.0;
        out << "<text x=\"" << sx(xv) << "\" y=\"" << kMarginTop + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << xv << "</text>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << yv << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
        << kHeight - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t idx = 0; idx < series.size(); ++idx) {
        const PlotSeries& s = series[idx];
        const char* color = kColors[idx % (sizeof kColors / sizeof kColors[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = clamp_negative_y ? std::max(0.0, s.y[i]) : s.y[i];
            out << sx(s.x[i]) << ',' << sy(y) << ' ';
        }
        out << "\"/>\n";
        const double ly = kMarginTop + 16.0 * (static_cast<double>(idx) + 1.0);
        out << "<line x1=\"" << kMarginLeft + plot_w + 10 << "\" y1=\"" << ly
            << "\" x2=\"" << kMarginLeft + plot_w + 34 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << kMarginLeft + plot_w + 40 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace satqkd
