// SPDX-License-Identifier: Apache-2.0
//
// cfaj - anti-jamming beamforming for downlink cell-free mmWave MIMO
// Copyright (C) 2026 The cfaj authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CFAJ_SVG_HPP
#define CFAJ_SVG_HPP

// Minimal deterministic SVG line charts: one polyline plus circle markers
// and vertical error bars per series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace cfaj
{

struct SeriesPoint
{
    double x = 0.0;
    double y = 0.0;
    double err = 0.0; // half-height of the error bar
};

struct Series
{
    std::string name;
    std::vector<SeriesPoint> points;
};

struct Chart
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

namespace detail
{
inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string &s)
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
} // namespace detail

inline std::string render_svg(const Chart &c)
{
    using detail::fmt;
    const double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &s : c.series)
        for (const auto &p : s.points)
        {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                continue;
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y - std::abs(p.err));
            y1 = std::max(y1, p.y + std::abs(p.err));
        }
    if (!std::isfinite(x0))
    {
        x0 = 0;
        x1 = 1;
        y0 = 0;
        y1 = 1;
    }
    if (x1 == x0)
    {
        x0 -= 1;
        x1 += 1;
    }
    if (y1 == y0)
    {
        y0 -= 1;
        y1 += 1;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << detail::xml_escape(c.title) << "</text>\n";
    os << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
       << fmt(top + ph) << "\"/>\n";
    os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\""
       << fmt(top + ph) << "\"/>\n";
    os << "</g>\n";
    os << "<g class=\"ticks\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i)
    {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(top + ph + 16) << "\" text-anchor=\"middle\">"
           << fmt(xv) << "</text>\n";
        os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(yv) + 4) << "\" text-anchor=\"end\">" << fmt(yv)
           << "</text>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(H - 16) << "\" text-anchor=\"middle\" font-size=\"13\">"
       << detail::xml_escape(c.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
       << fmt(top + ph / 2) << ")\">" << detail::xml_escape(c.y_label) << "</text>\n";

    for (std::size_t i = 0; i < c.series.size(); ++i)
    {
        const auto &s = c.series[i];
        const char *color = palette[i % (sizeof palette / sizeof *palette)];
        std::vector<SeriesPoint> pts;
        for (const auto &p : s.points)
            if (std::isfinite(p.x) && std::isfinite(p.y))
                pts.push_back(p);
        std::sort(pts.begin(), pts.end(), [](const SeriesPoint &a, const SeriesPoint &b) { return a.x < b.x; });
        os << "<g class=\"series\" data-name=\"" << detail::xml_escape(s.name) << "\">\n";
        if (!pts.empty())
        {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t k = 0; k < pts.size(); ++k)
                os << (k ? " " : "") << fmt(sx(pts[k].x)) << ',' << fmt(sy(pts[k].y));
            os << "\"/>\n";
        }
        for (const auto &p : pts)
        {
            if (p.err > 0.0)
                os << "<line stroke=\"" << color << "\" x1=\"" << fmt(sx(p.x)) << "\" y1=\"" << fmt(sy(p.y - p.err))
                   << "\" x2=\"" << fmt(sx(p.x)) << "\" y2=\"" << fmt(sy(p.y + p.err)) << "\"/>\n";
            os << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y)) << "\" r=\"4\" fill=\"" << color
               << "\"/>\n";
        }
        const double ly = top + 16 + 20.0 * static_cast<double>(i);
        os << "<line stroke=\"" << color << "\" stroke-width=\"2\" x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly)
           << "\" x2=\"" << fmt(left + pw + 36) << "\" y2=\"" << fmt(ly) << "\"/>\n";
        os << "<text x=\"" << fmt(left + pw + 42) << "\" y=\"" << fmt(ly + 4) << "\" font-size=\"12\">"
           << detail::xml_escape(s.name) << "</text>\n";
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace cfaj

#endif
