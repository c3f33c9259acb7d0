#pragma once

// Minimal static SVG scatter and line charts. The CSVs next to each plot
// are the ground truth; these are conveniences for eyeballing results. No
// timestamps and no randomness, so identical inputs give identical bytes.

#include <string>
#include <vector>

namespace polyset {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color;  // any SVG color
};

std::string svg_line_chart(const std::vector<SvgSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label);

// color_values, when non-empty, must match x in length; points are then
// colored by a fixed dark-violet-to-yellow ramp over the value range.
// diagonal draws the y = x reference across the data range.
std::string svg_scatter(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& color_values, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        bool diagonal = false);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace polyset
