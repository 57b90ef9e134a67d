// SPDX-License-Identifier: BSD-3-Clause
//
// Minimal SVG charts: line plots and box summaries.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fiberplan {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series, bool log_y);

struct BoxData {
    std::string label;
    std::vector<double> values;
};

/// One box (quartiles, whiskers at min and max) per label.
std::string svg_box_plot(const std::string& title, const std::string& y_label, const std::vector<BoxData>& boxes);

}  // namespace fiberplan
