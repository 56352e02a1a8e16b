#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hardyrad::cli {

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

} // namespace

std::string render_polyline_svg(const std::vector<double>& x, const std::vector<double>& y,
                                const std::string& title)
{
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double margin = 50.0;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        if (first) {
            x0 = x1 = x[i];
            y0 = y1 = y[i];
            first = false;
        }
        x0 = std::min(x0, x[i]);
        x1 = std::max(x1, x[i]);
        y0 = std::min(y0, y[i]);
        y1 = std::max(y1, y[i]);
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const auto px = [&](double v) { return margin + (v - x0) / (x1 - x0) * (width - 2 * margin); };
    const auto py = [&](double v) { return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
    s << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
      << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"#888\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        s << fmt(px(x[i])) << ',' << fmt(py(y[i])) << ' ';
    }
    s << "\"/>\n";
    s << "<text x=\"" << margin << "\" y=\"" << height - margin + 16 << "\" font-size=\"11\">"
      << fmt(x0) << "</text>\n";
    s << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(x1) << "</text>\n";
    s << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin
      << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y0) << "</text>\n";
    s << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 10
      << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y1) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

} // namespace hardyrad::cli
