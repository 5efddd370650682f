#ifndef SMALLPOLY_SVG_HPP
#define SMALLPOLY_SVG_HPP

#include "diamgraph.hpp"
#include "geometry.hpp"
#include "io.hpp"

#include <algorithm>
#include <string>

namespace smallpoly {

/// Standalone SVG of a polygon and its diameter graph. The y axis is flipped
/// so the picture keeps the counterclockwise orientation. Output depends only
/// on the coordinates, so identical input gives identical bytes.
inline std::string emit_svg(const ConvexPolygon& p, const DiameterGraph& g) {
    double min_x = p[0].x, max_x = p[0].x, min_y = -p[0].y, max_y = -p[0].y;
    for (const auto& q : p.vertices()) {
        min_x = std::min(min_x, q.x);
        max_x = std::max(max_x, q.x);
        min_y = std::min(min_y, -q.y);
        max_y = std::max(max_y, -q.y);
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double margin = 0.05 * extent;
    const auto num = [](double v) { return format_real(v, 10); };
    const auto x = [&](std::size_t i) { return num(p[i].x); };
    const auto y = [&](std::size_t i) { return num(p[i].y == 0.0 ? 0.0 : -p[i].y); };

    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"" +
         num(min_x - margin) + " " + num(min_y - margin) + " " + num(max_x - min_x + 2 * margin) + " " +
         num(max_y - min_y + 2 * margin) + "\">\n";
    s += "  <g id=\"chords\" stroke=\"#c0392b\" stroke-width=\"" + num(0.002 * extent) + "\">\n";
    for (auto [a, b] : g.edges)
        s += "    <line x1=\"" + x(a) + "\" y1=\"" + y(a) + "\" x2=\"" + x(b) + "\" y2=\"" + y(b) + "\"/>\n";
    s += "  </g>\n";
    s += "  <path id=\"boundary\" fill=\"none\" stroke=\"#1f3b73\" stroke-width=\"" + num(0.004 * extent) +
         "\" stroke-linejoin=\"round\" d=\"M " + x(0) + " " + y(0);
    for (std::size_t i = 1; i < p.size(); ++i) s += " L " + x(i) + " " + y(i);
    s += " Z\"/>\n</svg>\n";
    return s;
}

} // namespace smallpoly

#endif // SMALLPOLY_SVG_HPP
