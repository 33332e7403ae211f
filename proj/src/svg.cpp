#include "wnaction/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wnaction {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
           "\" text-anchor=\"" + anchor + "\" font-family=\"sans-serif\">" + escape(s) + "</text>\n";
}

} // namespace

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const SvgSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double e = i < s.err.size() ? s.err[i] : 0.0;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i] - e);
            y1 = std::max(y1, s.y[i] + e);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad_x = 0.05 * (x1 - x0), pad_y = 0.08 * (y1 - y0);
    x0 -= pad_x, x1 += pad_x, y0 -= pad_y, y1 += pad_y;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                      num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    out += "<metadata>\nseries,x,y,err\n";
    for (const SvgSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out += escape(s.name) + "," + num(s.x[i]) + "," + num(s.y[i]) + "," +
                   (i < s.err.size() ? num(s.err[i]) : "") + "\n";
    out += "</metadata>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += text(kWidth / 2, 22, title, "middle", 14);
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        out += text(px(xv), kTop + ph + 16, num(xv));
        out += text(kLeft - 6, py(yv) + 4, num(yv), "end");
    }
    out += text(kLeft + pw / 2, kHeight - 10, x_label);
    out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
           num(kTop + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const SvgSeries& s = series[k];
        const std::string color = kColors[k % (sizeof kColors / sizeof *kColors)];
        if (s.as_line) {
            out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) out += (i ? " " : "") + num(px(s.x[i])) + "," + num(py(s.y[i]));
            out += "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i < s.err.size() && s.err[i] > 0)
                    out += "<line x1=\"" + num(px(s.x[i])) + "\" x2=\"" + num(px(s.x[i])) + "\" y1=\"" +
                           num(py(s.y[i] - s.err[i])) + "\" y2=\"" + num(py(s.y[i] + s.err[i])) + "\" stroke=\"" + color + "\"/>\n";
                out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
            }
        }
        out += "<rect x=\"" + num(kLeft + 10) + "\" y=\"" + num(kTop + 8 + 16 * k) + "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        out += text(kLeft + 26, kTop + 17 + 16 * k, s.name, "start");
    }
    out += "</svg>\n";
    return out;
}

std::string svg_table(const std::string& title, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    const double col_w = 110, row_h = 20;
    const double width = std::max(300.0, 20 + col_w * static_cast<double>(header.size()));
    const double height = 50 + row_h * static_cast<double>(rows.size() + 1);
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) + "\">\n";
    out += "<metadata>\n";
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + escape(header[i]);
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + escape(r[i]);
        out += "\n";
    }
    out += "</metadata>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += text(width / 2, 22, title, "middle", 14);
    for (std::size_t i = 0; i < header.size(); ++i) out += text(10 + col_w * (i + 0.5), 50, header[i]);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < rows[r].size(); ++i)
            out += text(10 + col_w * (i + 0.5), 50 + row_h * (r + 1), rows[r][i]);
    out += "</svg>\n";
    return out;
}

} // namespace wnaction
