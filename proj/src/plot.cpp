#include "reefcover/plot.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reefcover::plot {

namespace {

constexpr double kScale = 60.0;  // px per meter
constexpr std::array<const char*, 6> kColors = {"#d32f2f", "#f57c00", "#2e7d32",
                                                "#7b1fa2", "#0097a7", "#5d4037"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

}  // namespace

std::string scene_svg(const world::Scenario& scenario,
                      const std::vector<metrics::TrajectoryLog>& trajectories,
                      const std::vector<std::string>& labels) {
    const double w = scenario.arena.width * kScale;
    const double h = scenario.arena.height * kScale;
    const double legend_h = 26.0 + 18.0 * static_cast<double>(trajectories.size());
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w + 20)
        << "\" height=\"" << fmt(h + legend_h + 20)
        << "\" viewBox=\"-10 -10 " << fmt(w + 20) << " " << fmt(h + legend_h + 20)
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
        << "\" fill=\"#eef6fa\" stroke=\"#333\" stroke-width=\"2\"/>\n";

    for (const auto& ob : scenario.obstacles) {
        svg << "<polygon points=\"";
        for (const auto& v : ob.shape.vertices)
            svg << fmt(v.x * kScale) << "," << fmt(h - v.y * kScale) << " ";
        svg << "\" fill=\"#9e9e9e\" stroke=\"#616161\"/>\n";
    }
    for (const auto& ooi : scenario.oois)
        svg << "<circle cx=\"" << fmt(ooi.position.x * kScale) << "\" cy=\""
            << fmt(h - ooi.position.y * kScale)
            << "\" r=\"3\" fill=\"#1565c0\"/>\n";

    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const char* color = kColors[k % kColors.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.6\" points=\"";
        for (const auto& p : trajectories[k].poses)
            svg << fmt(p.x * kScale) << "," << fmt(h - p.y * kScale) << " ";
        svg << "\"/>\n";
        if (!trajectories[k].poses.empty()) {
            const auto& s = trajectories[k].poses.front();
            svg << "<circle cx=\"" << fmt(s.x * kScale) << "\" cy=\""
                << fmt(h - s.y * kScale) << "\" r=\"4\" fill=\"" << color
                << "\" stroke=\"#000\"/>\n";
        }
    }

    double ly = h + 16.0;
    svg << "<text x=\"0\" y=\"" << fmt(ly) << "\" font-size=\"12\" fill=\"#333\">"
        << scenario.name << " (seed " << scenario.seed << "); OOIs: blue dots; "
        << "obstacles: gray</text>\n";
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        ly += 18.0;
        const char* color = kColors[k % kColors.size()];
        svg << "<rect x=\"0\" y=\"" << fmt(ly - 9) << "\" width=\"14\" height=\"4\" fill=\""
            << color << "\"/>\n";
        svg << "<text x=\"20\" y=\"" << fmt(ly) << "\" font-size=\"12\" fill=\"#333\">"
            << (k < labels.size() ? labels[k] : "robot " + std::to_string(k))
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_scene_svg(const world::Scenario& scenario,
                     const std::vector<metrics::TrajectoryLog>& trajectories,
                     const std::vector<std::string>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot file: " + path);
    out << scene_svg(scenario, trajectories, labels);
}

}  // namespace reefcover::plot
