#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace reefcover::geometry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double angle() const { return std::atan2(y, x); }
};

inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Normalizes to (-pi, pi].
double normalize_angle(double a);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts);

// Proper or touching intersection of closed segments.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Distance along the ray from `origin` in direction `dir` (unit) to segment
// [a,b], or nullopt if the ray misses it.
std::optional<double> ray_segment_distance(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b);

// Minimum distance from `origin` to any point of segment [a,b] whose direction
// as seen from origin lies within the angular wedge center +- half_width.
// Returns infinity when no part of the segment falls inside the wedge.
double wedge_segment_distance(Vec2 origin, double center, double half_width,
                              Vec2 a, Vec2 b);

struct Polygon {
    std::vector<Vec2> vertices;

    bool contains(Vec2 p) const;          // even-odd rule
    double boundary_distance(Vec2 p) const;
    double signed_distance(Vec2 p) const; // negative inside
    bool is_simple() const;               // no self-intersection
    Vec2 centroid() const;                // vertex average
};

bool segment_hits_polygon(Vec2 a, Vec2 b, const Polygon& poly);

Polygon make_regular_polygon(Vec2 center, double radius, int sides, double rotation);
Polygon make_rectangle(Vec2 center, double width, double height, double rotation);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace reefcover::geometry
