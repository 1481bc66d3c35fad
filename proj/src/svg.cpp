#include "tsne/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tsne/io.hpp"

namespace tsne {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 0.05 * kCanvas;

// 8-stop viridis ramp, dark to bright
constexpr unsigned char kRamp[8][3] = {
    {0x44, 0x01, 0x54}, {0x46, 0x32, 0x7E}, {0x36, 0x5C, 0x8D}, {0x27, 0x7F, 0x8E},
    {0x1F, 0xA1, 0x87}, {0x4A, 0xC1, 0x6D}, {0xA0, 0xDA, 0x39}, {0xFD, 0xE7, 0x25},
};

std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    double pos = t * 7.0;
    auto lo = static_cast<std::size_t>(pos);
    lo = std::min<std::size_t>(lo, 6);
    double frac = pos - static_cast<double>(lo);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(kRamp[lo][0] + frac * (kRamp[lo + 1][0] - kRamp[lo][0]))),
                  static_cast<int>(std::lround(kRamp[lo][1] + frac * (kRamp[lo + 1][1] - kRamp[lo][1]))),
                  static_cast<int>(std::lround(kRamp[lo][2] + frac * (kRamp[lo + 1][2] - kRamp[lo][2]))));
    return buf;
}

/// Two-decimal fixed formatting keeps the output stable and compact.
std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string render_scatter_svg(const Matrix& y, const std::vector<double>& color) {
    if (y.rows() > 0 && y.cols() != 2) {
        throw std::invalid_argument("scatter plot requires a 2-column embedding");
    }
    if (!color.empty() && color.size() != y.rows()) {
        throw std::invalid_argument("color column length does not match point count");
    }

    std::size_t n = y.rows();
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    if (n > 0) {
        min_x = max_x = y(0, 0);
        min_y = max_y = y(0, 1);
        for (std::size_t i = 1; i < n; ++i) {
            min_x = std::min(min_x, y(i, 0));
            max_x = std::max(max_x, y(i, 0));
            min_y = std::min(min_y, y(i, 1));
            max_y = std::max(max_y, y(i, 1));
        }
    }
    double avail = kCanvas - 2.0 * kMargin;
    double range = std::max(max_x - min_x, max_y - min_y);  // equal aspect
    double scale = range > 0.0 ? avail / range : 0.0;
    double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);

    double cmin = 0.0, cmax = 0.0;
    if (!color.empty()) {
        cmin = *std::min_element(color.begin(), color.end());
        cmax = *std::max_element(color.begin(), color.end());
    }

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out += "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    out += "<rect x=\"" + coord(kMargin) + "\" y=\"" + coord(kMargin) + "\" width=\"" +
           coord(avail) + "\" height=\"" + coord(avail) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        double px = kCanvas / 2.0 + (y(i, 0) - cx) * scale;
        // SVG y grows downward; flip so the plot reads like standard axes
        double py = kCanvas / 2.0 - (y(i, 1) - cy) * scale;
        std::string fill = "#365c8d";
        if (!color.empty()) {
            double t = cmax > cmin ? (color[i] - cmin) / (cmax - cmin) : 0.5;
            fill = ramp_color(t);
        }
        out += "<circle cx=\"" + coord(px) + "\" cy=\"" + coord(py) +
               "\" r=\"2\" fill=\"" + fill + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_scatter_svg(const std::filesystem::path& path, const Matrix& y,
                       const std::vector<double>& color) {
    write_text_file(path, render_scatter_svg(y, color));
}

}  // namespace tsne
