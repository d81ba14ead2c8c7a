/// @file svg.hpp
/// @brief Plain-text SVG line charts, no renderer dependency.

#pragma once

#include <string>
#include <vector>

namespace bgk {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    std::string title;
    std::string x_label = "time";
    bool log_y = false;
    double guide_y = 0.0;  // horizontal guide line (e.g. 2*delta)
    bool draw_guide = false;
};

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgOptions& opt);
void write_line_chart(const std::string& path, const std::vector<SvgSeries>& series,
                      const SvgOptions& opt);

}  // namespace bgk
