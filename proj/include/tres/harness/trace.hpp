#ifndef TRES_HARNESS_TRACE_HPP
#define TRES_HARNESS_TRACE_HPP

// Top-view SVG of two body trajectories: the reference gait (dashed) and a
// learned controller (solid) on the same morphology.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "../simulator.hpp"

namespace tres {

struct TraceStyle {
    double pixels_per_meter = 800;
    double margin = 0.1;   // meters around the paths
    double grid_step = 0.1; // meters
};

inline void write_trace_svg(std::ostream& os, const Trajectory& reference, const Trajectory& learned,
                            const TraceStyle& style = {})
{
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const Trajectory* tr : {&reference, &learned})
        for (const auto& p : tr->poses) {
            if (first) {
                xmin = xmax = p.x;
                ymin = ymax = p.y;
                first = false;
            }
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    const double g = style.grid_step;
    xmin = std::floor((xmin - style.margin) / g) * g;
    ymin = std::floor((ymin - style.margin) / g) * g;
    xmax = std::ceil((xmax + style.margin) / g) * g;
    ymax = std::ceil((ymax + style.margin) / g) * g;
    const double s = style.pixels_per_meter;
    const double width = (xmax - xmin) * s, height = (ymax - ymin) * s;
    // world y points up, SVG y points down
    auto px = [&](double x) { return (x - xmin) * s; };
    auto py = [&](double y) { return (ymax - y) * s; };

    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    const int nx = static_cast<int>(std::lround((xmax - xmin) / g));
    const int ny = static_cast<int>(std::lround((ymax - ymin) / g));
    for (int i = 0; i <= nx; ++i) {
        const double x = xmin + i * g;
        os << "<line x1=\"" << px(x) << "\" y1=\"0\" x2=\"" << px(x) << "\" y2=\"" << height << "\"/>\n";
    }
    for (int i = 0; i <= ny; ++i) {
        const double y = ymin + i * g;
        os << "<line x1=\"0\" y1=\"" << py(y) << "\" x2=\"" << width << "\" y2=\"" << py(y) << "\"/>\n";
    }
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#888888\">\n";
    for (int i = 0; i <= nx; ++i)
        os << "<text x=\"" << px(xmin + i * g) + 2 << "\" y=\"" << height - 2 << "\">" << std::setprecision(1)
           << xmin + i * g << std::setprecision(2) << "</text>\n";
    for (int i = 0; i <= ny; ++i)
        os << "<text x=\"2\" y=\"" << py(ymin + i * g) - 2 << "\">" << std::setprecision(1) << ymin + i * g
           << std::setprecision(2) << "</text>\n";
    os << "</g>\n";

    auto path = [&](const Trajectory& tr, const char* colour, const char* extra) {
        std::ostringstream d;
        d << std::fixed << std::setprecision(2);
        for (std::size_t k = 0; k < tr.poses.size(); ++k)
            d << (k ? " L " : "M ") << px(tr.poses[k].x) << ' ' << py(tr.poses[k].y);
        if (tr.poses.size() == 1)
            d << " L " << px(tr.poses[0].x) << ' ' << py(tr.poses[0].y);
        os << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << colour
           << "\" stroke-width=\"3\" stroke-linecap=\"round\"" << extra << "/>\n";
    };
    path(reference, "#555555", " stroke-dasharray=\"8 6\"");
    path(learned, "#1f5fbf", "");
    if (!reference.poses.empty())
        os << "<circle cx=\"" << px(reference.poses.front().x) << "\" cy=\"" << py(reference.poses.front().y)
           << "\" r=\"6\" fill=\"#d62728\"/>\n";
    os << "</svg>\n";
}

} // namespace tres

#endif // TRES_HARNESS_TRACE_HPP
