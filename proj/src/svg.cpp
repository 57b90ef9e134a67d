// SPDX-License-Identifier: BSD-3-Clause

#include "fiberplan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace fiberplan {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    std::ostringstream out;
    out << std::setprecision(6) << v;
    return out.str();
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void header(std::ostringstream& out, const std::string& title)
{
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& x_label, const std::string& y_label,
          bool log_y, bool x_ticks)
{
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i)
    {
        double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(y) + 4 << "\" text-anchor=\"end\">"
            << num(log_y ? std::pow(10.0, y) : y) << "</text>\n";
        if (x_ticks)
        {
            double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
            out << "<text x=\"" << f.px(x) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
                << num(x) << "</text>\n";
        }
    }
    out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (kTop + kHeight - kBottom) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series, bool log_y)
{
    auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-12)) : y; };
    Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Series& s : series)
        for (auto [x, y] : s.points)
        {
            f.x0 = std::min(f.x0, x);
            f.x1 = std::max(f.x1, x);
            f.y0 = std::min(f.y0, ty(y));
            f.y1 = std::max(f.y1, ty(y));
        }
    if (!std::isfinite(f.x0))
        f = {0, 1, 0, 1};
    if (f.x1 == f.x0)
        f.x1 = f.x0 + 1;
    if (f.y1 == f.y0)
        f.y1 = f.y0 + 1;

    std::ostringstream out;
    header(out, title);
    axes(out, f, x_label, y_label, log_y, true);
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : series[i].points)
            out << num(f.px(x)) << ',' << num(f.py(ty(y))) << ' ';
        out << "\"/>\n";
        for (auto [x, y] : series[i].points)
            out << "<circle cx=\"" << num(f.px(x)) << "\" cy=\"" << num(f.py(ty(y))) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        out << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 * (i + 1) << "\" fill=\"" << color << "\">"
            << escape(series[i].name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_box_plot(const std::string& title, const std::string& y_label, const std::vector<BoxData>& boxes)
{
    Frame f{0, static_cast<double>(std::max<std::size_t>(boxes.size(), 1)), std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
    for (const BoxData& b : boxes)
        for (double v : b.values)
        {
            f.y0 = std::min(f.y0, v);
            f.y1 = std::max(f.y1, v);
        }
    if (!std::isfinite(f.y0))
        f.y0 = 0, f.y1 = 1;
    if (f.y1 == f.y0)
        f.y1 = f.y0 + 1;

    std::ostringstream out;
    header(out, title);
    axes(out, f, "", y_label, false, false);
    for (std::size_t i = 0; i < boxes.size(); ++i)
    {
        std::vector<double> v = boxes[i].values;
        if (v.empty())
            continue;
        std::sort(v.begin(), v.end());
        auto quantile = [&](double q) {
            double pos = q * static_cast<double>(v.size() - 1);
            auto lo = static_cast<std::size_t>(std::floor(pos));
            std::size_t hi = std::min(lo + 1, v.size() - 1);
            return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
        };
        const double cx = f.px(static_cast<double>(i) + 0.5);
        const double w = 0.3 * (f.px(1) - f.px(0));
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(f.py(v.front())) << "\" x2=\"" << num(cx) << "\" y2=\""
            << num(f.py(v.back())) << "\" stroke=\"black\"/>\n";
        out << "<rect x=\"" << num(cx - w / 2) << "\" y=\"" << num(f.py(quantile(0.75))) << "\" width=\"" << num(w)
            << "\" height=\"" << num(f.py(quantile(0.25)) - f.py(quantile(0.75))) << "\" fill=\"" << color
            << "\" fill-opacity=\"0.4\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << num(cx - w / 2) << "\" y1=\"" << num(f.py(quantile(0.5))) << "\" x2=\""
            << num(cx + w / 2) << "\" y2=\"" << num(f.py(quantile(0.5))) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(cx) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
            << escape(boxes[i].label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace fiberplan
