#include "tsshap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "tsshap/error.hpp"

namespace tsshap {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    double span() const { return hi - lo; }
};

Range pad(Range r) {
    if (r.hi == r.lo) {
        r.lo -= 1.0;
        r.hi += 1.0;
    } else {
        const double p = 0.05 * r.span();
        r.lo -= p;
        r.hi += p;
    }
    return r;
}

/// 1/2/5-stepped tick positions covering the range.
std::vector<double> nice_ticks(const Range& r, int target = 6) {
    const double raw = r.span() / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-12 * step; v += step)
        ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return ticks;
}

class Canvas {
public:
    Canvas(const std::string& title, Range xr, Range yr, const std::string& x_label,
           const std::string& y_label)
        : xr_(xr), yr_(yr) {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
             << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
        out_ << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
             << "\" fill=\"white\"/>\n";
        out_ << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
             << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
        axes(x_label, y_label);
    }

    double px(double x) const {
        return kMarginLeft + (x - xr_.lo) / xr_.span() * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return kHeight - kMarginBottom -
               (y - yr_.lo) / yr_.span() * (kHeight - kMarginTop - kMarginBottom);
    }

    void polyline(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::string& color,
                  bool dashed) {
        out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (dashed) out_ << " stroke-dasharray=\"6 3\"";
        out_ << " points=\"";
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (i) out_ << " ";
            out_ << fmt(px(x[i])) << "," << fmt(py(y[i]));
        }
        out_ << "\"/>\n";
    }

    void rect(double x0, double y0, double x1, double y1, const std::string& color) {
        out_ << "<rect x=\"" << fmt(std::min(x0, x1)) << "\" y=\"" << fmt(std::min(y0, y1))
             << "\" width=\"" << fmt(std::abs(x1 - x0)) << "\" height=\""
             << fmt(std::abs(y1 - y0)) << "\" fill=\"" << color << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, const std::string& anchor,
              double size = 11, const std::string& extra = "") {
        out_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"" << anchor
             << "\" font-family=\"sans-serif\" font-size=\"" << size << "\"" << extra << ">"
             << escape(s) << "</text>\n";
    }

    void line(double x0, double y0, double x1, double y1, const std::string& color,
              double width = 1.0) {
        out_ << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
             << "\" y2=\"" << fmt(y1) << "\" stroke=\"" << color << "\" stroke-width=\"" << width
             << "\"/>\n";
    }

    void legend(const std::vector<PlotSeries>& series) {
        double y = kMarginTop + 8;
        for (const auto& s : series) {
            const double x = kWidth - kMarginRight - 170;
            line(x, y - 4, x + 24, y - 4, s.color, 2.0);
            text(x + 30, y, s.label, "start");
            y += 16;
        }
    }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    void axes(const std::string& x_label, const std::string& y_label) {
        const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
        const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
        line(x0, y0, x1, y0, "black");
        line(x0, y0, x0, y1, "black");
        for (double t : nice_ticks(xr_)) {
            line(px(t), y0, px(t), y0 + 4, "black");
            text(px(t), y0 + 18, fmt(t), "middle");
        }
        for (double t : nice_ticks(yr_)) {
            line(x0 - 4, py(t), x0, py(t), "black");
            text(x0 - 8, py(t) + 4, fmt(t), "end");
            line(x0, py(t), x1, py(t), "#eeeeee");
        }
        text((x0 + x1) / 2, kHeight - 12, x_label, "middle", 12);
        text(18, (y0 + y1) / 2, y_label, "middle", 12,
             " transform=\"rotate(-90 18 " + fmt((y0 + y1) / 2) + ")\"");
    }

    Range xr_, yr_;
    std::ostringstream out_;
};

}  // namespace

std::string render_line_chart(const LineChartSpec& spec) {
    require(!spec.series.empty(), ErrorCode::EmptyData, "line chart without series");
    Range xr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    Range yr = xr;
    for (const auto& s : spec.series) {
        require(s.x.size() == s.y.size() && s.x.size() >= 1, ErrorCode::EmptyData,
                "series '" + s.label + "' is empty or ragged");
        require(s.x.allFinite() && s.y.allFinite(), ErrorCode::NonFiniteValue,
                "series '" + s.label + "' has non-finite points");
        xr.lo = std::min(xr.lo, s.x.minCoeff());
        xr.hi = std::max(xr.hi, s.x.maxCoeff());
        yr.lo = std::min(yr.lo, s.y.minCoeff());
        yr.hi = std::max(yr.hi, s.y.maxCoeff());
    }
    Canvas canvas(spec.title, pad(xr), pad(yr), spec.x_label, spec.y_label);
    for (const auto& s : spec.series) canvas.polyline(s.x, s.y, s.color, s.dashed);
    canvas.legend(spec.series);
    return canvas.finish();
}

std::string render_bar_chart(const BarChartSpec& spec) {
    const Eigen::Index n = spec.values.size();
    require(n >= 1, ErrorCode::EmptyData, "bar chart without bars");
    require(static_cast<Eigen::Index>(spec.labels.size()) == n, ErrorCode::LengthMismatch,
            "label/value count mismatch");
    require(spec.values.allFinite(), ErrorCode::NonFiniteValue, "bar values must be finite");

    Range yr{std::min(0.0, spec.values.minCoeff()), std::max(0.0, spec.values.maxCoeff())};
    Canvas canvas(spec.title, Range{0.0, static_cast<double>(n)}, pad(yr), "", "");
    const double zero_y = canvas.py(0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x0 = canvas.px(i + 0.15);
        const double x1 = canvas.px(i + 0.85);
        const double v = spec.values[i];
        canvas.rect(x0, zero_y, x1, canvas.py(v), v >= 0 ? "#4878cf" : "#d65f5f");
        const double lx = (x0 + x1) / 2;
        const double ly = zero_y + (v >= 0 ? 14 : -8);
        char rot[64];
        std::snprintf(rot, sizeof(rot), " transform=\"rotate(-30 %.6g %.6g)\"", lx, ly);
        canvas.text(lx, ly, spec.labels[i], v >= 0 ? "end" : "start", 10, rot);
    }
    canvas.line(canvas.px(0.0), zero_y, canvas.px(static_cast<double>(n)), zero_y, "black");
    return canvas.finish();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + path + "'");
    out << content;
}

}  // namespace tsshap
