#include "bgk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bgk {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgOptions& opt) {
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = std::numeric_limits<double>::max(), ymax = -ymin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = s.y[i];
            if (opt.log_y && !(y > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmin < xmax)) xmax = xmin + 1.0;
    if (opt.draw_guide && (!opt.log_y || opt.guide_y > 0.0)) {
        ymin = std::min(ymin, opt.guide_y);
        ymax = std::max(ymax, opt.guide_y);
    }
    if (!(ymin < ymax)) ymax = ymin + 1.0;
    auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
    const double ylo = ty(ymin), yhi = ty(ymax);

    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) {
        return kHeight - kBottom - (ty(y) - ylo) / (yhi - ylo) * (kHeight - kTop - kBottom);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << opt.title
       << "</text>\n";
    // axes
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
       << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    // ticks
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        os << "<line x1=\"" << px(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px(x) << "\" y2=\""
           << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kBottom + 20
           << "\" text-anchor=\"middle\" font-size=\"11\">" << num(x) << "</text>\n";
        const double yv = ylo + (yhi - ylo) * i / 5.0;
        const double yc = kHeight - kBottom - (yv - ylo) / (yhi - ylo) * (kHeight - kTop - kBottom);
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << yc << "\" x2=\"" << kLeft << "\" y2=\"" << yc
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << yc + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << (opt.log_y ? "1e" + num(yv) : num(yv))
           << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\" font-size=\"12\">" << opt.x_label << "</text>\n";
    if (opt.draw_guide && (!opt.log_y || opt.guide_y > 0.0)) {
        os << "<line x1=\"" << kLeft << "\" y1=\"" << py(opt.guide_y) << "\" x2=\"" << kWidth - kRight
           << "\" y2=\"" << py(opt.guide_y)
           << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";
        os << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << py(opt.guide_y) - 4
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#666666\">guide " << num(opt.guide_y)
           << "</text>\n";
    }
    int color = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (opt.log_y && !(s.y[i] > 0.0)) continue;
            os << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 * (color + 1)
           << "\" font-size=\"12\" fill=\"" << kPalette[color % 6] << "\">" << s.label << "</text>\n";
        ++color;
    }
    os << "</svg>\n";
    return os.str();
}

void write_line_chart(const std::string& path, const std::vector<SvgSeries>& series,
                      const SvgOptions& opt) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_line_chart: cannot open " + path);
    os << render_line_chart(series, opt);
}

}  // namespace bgk
