#pragma once

// Minimal self-contained SVG charts. The plotted numbers are embedded as CSV
// in a <metadata> element so every figure carries its own data.

#include <string>
#include <vector>

namespace wnaction {

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err;  // optional symmetric error bars
    bool as_line = false;     // polyline instead of markers
};

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series);

std::string svg_table(const std::string& title, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

} // namespace wnaction
