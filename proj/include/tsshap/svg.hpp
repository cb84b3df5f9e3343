#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tsshap {

/// One polyline in a line chart.
struct PlotSeries {
    std::string label;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::string color;  // any SVG color
    bool dashed = false;
};

struct LineChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

struct BarChartSpec {
    std::string title;
    std::vector<std::string> labels;
    Eigen::VectorXd values;  // bars extend above/below the zero axis
};

/// Standalone deterministic SVG documents (fixed 960x540 canvas).
std::string render_line_chart(const LineChartSpec& spec);
std::string render_bar_chart(const BarChartSpec& spec);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace tsshap
