#include "polyset/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "polyset/serialization.hpp"

namespace polyset {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 42.0, kBottom = 58.0;

std::string fmt2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finalize() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            double pad = std::max(1.0, std::abs(lo)) * 0.1;
            lo -= pad;
            hi += pad;
        }
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

double px(const Range& r, double v) { return kLeft + r.frac(v) * (kWidth - kLeft - kRight); }
double py(const Range& r, double v) {
    return kHeight - kBottom - r.frac(v) * (kHeight - kTop - kBottom);
}

void open_chart(std::string& s, const std::string& title, const std::string& x_label,
                const std::string& y_label, const Range& rx, const Range& ry) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" +
         json_escape(title) + "</text>\n";
    // axes
    s += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(kHeight - kBottom) + "\" x2=\"" +
         fmt2(kWidth - kRight) + "\" y2=\"" + fmt2(kHeight - kBottom) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(kTop) + "\" x2=\"" + fmt2(kLeft) +
         "\" y2=\"" + fmt2(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        double fx = rx.lo + (rx.hi - rx.lo) * t / 4.0;
        double fy = ry.lo + (ry.hi - ry.lo) * t / 4.0;
        double xp = px(rx, fx), yp = py(ry, fy);
        s += "<line x1=\"" + fmt2(xp) + "\" y1=\"" + fmt2(kHeight - kBottom) + "\" x2=\"" +
             fmt2(xp) + "\" y2=\"" + fmt2(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt2(xp) + "\" y=\"" + fmt2(kHeight - kBottom + 20) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             fmt_tick(fx) + "</text>\n";
        s += "<line x1=\"" + fmt2(kLeft - 5) + "\" y1=\"" + fmt2(yp) + "\" x2=\"" +
             fmt2(kLeft) + "\" y2=\"" + fmt2(yp) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt2(kLeft - 8) + "\" y=\"" + fmt2(yp + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
             fmt_tick(fy) + "</text>\n";
    }
    s += "<text x=\"" + fmt2((kLeft + kWidth - kRight) / 2.0) + "\" y=\"" +
         fmt2(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         json_escape(x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt2((kTop + kHeight - kBottom) / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " +
         fmt2((kTop + kHeight - kBottom) / 2.0) + ")\">" + json_escape(y_label) +
         "</text>\n";
}

std::string ramp_color(double t) {
    // Five fixed stops from dark violet to yellow, linearly interpolated.
    static const int stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    double pos = t * 4.0;
    int i = std::min(3, static_cast<int>(pos));
    double f = pos - i;
    char buf[10];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                  static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                  static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
    return buf;
}

}  // namespace

std::string svg_line_chart(const std::vector<SvgSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label) {
    Range rx, ry;
    for (const SvgSeries& s : series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("svg_line_chart: series length mismatch");
        }
        for (double v : s.x) rx.add(v);
        for (double v : s.y) ry.add(v);
    }
    rx.finalize();
    ry.finalize();

    std::string out;
    open_chart(out, title, x_label, y_label, rx, ry);
    double legend_y = kTop + 8.0;
    for (const SvgSeries& s : series) {
        if (!s.x.empty()) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) pts += " ";
                pts += fmt2(px(rx, s.x[i])) + "," + fmt2(py(ry, s.y[i]));
            }
            out += "<polyline fill=\"none\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        }
        if (!s.label.empty()) {
            out += "<line x1=\"" + fmt2(kWidth - 170) + "\" y1=\"" + fmt2(legend_y) +
                   "\" x2=\"" + fmt2(kWidth - 150) + "\" y2=\"" + fmt2(legend_y) +
                   "\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"/>\n";
            out += "<text x=\"" + fmt2(kWidth - 144) + "\" y=\"" + fmt2(legend_y + 4) +
                   "\" font-family=\"sans-serif\" font-size=\"12\">" + json_escape(s.label) +
                   "</text>\n";
            legend_y += 18.0;
        }
    }
    out += "</svg>\n";
    return out;
}

std::string svg_scatter(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& color_values, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        bool diagonal) {
    if (x.size() != y.size()) throw std::invalid_argument("svg_scatter: length mismatch");
    if (!color_values.empty() && color_values.size() != x.size()) {
        throw std::invalid_argument("svg_scatter: color value length mismatch");
    }
    Range rx, ry;
    for (double v : x) rx.add(v);
    for (double v : y) ry.add(v);
    if (diagonal) {
        // Shared range so the reference line is the visual identity.
        rx.add(ry.lo);
        rx.add(ry.hi);
        ry.add(rx.lo);
        ry.add(rx.hi);
    }
    rx.finalize();
    ry.finalize();

    Range rc;
    for (double v : color_values) rc.add(v);
    rc.finalize();

    std::string out;
    open_chart(out, title, x_label, y_label, rx, ry);
    if (diagonal) {
        double lo = std::max(rx.lo, ry.lo), hi = std::min(rx.hi, ry.hi);
        out += "<line x1=\"" + fmt2(px(rx, lo)) + "\" y1=\"" + fmt2(py(ry, lo)) + "\" x2=\"" +
               fmt2(px(rx, hi)) + "\" y2=\"" + fmt2(py(ry, hi)) +
               "\" stroke=\"#999999\" stroke-dasharray=\"5,4\"/>\n";
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::string color =
            color_values.empty() ? std::string("#1f77b4") : ramp_color(rc.frac(color_values[i]));
        out += "<circle cx=\"" + fmt2(px(rx, x[i])) + "\" cy=\"" + fmt2(py(ry, y[i])) +
               "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.8\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace polyset
