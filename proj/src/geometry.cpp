#include "reefcover/geometry.hpp"

#include <algorithm>

namespace reefcover::geometry {

double normalize_angle(double a) {
    double r = std::fmod(a + M_PI, 2.0 * M_PI);
    if (r <= 0.0) r += 2.0 * M_PI;
    return r - M_PI;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 <= 0.0) return (p - a).norm();
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts) {
    if (pts.empty()) return kInf;
    if (pts.size() == 1) return (p - pts[0]).norm();
    double best = kInf;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        best = std::min(best, point_segment_distance(p, pts[i], pts[i + 1]));
    return best;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = (b - a).cross(c - a);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

std::optional<double> ray_segment_distance(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b) {
    // origin + t*dir = a + s*(b-a), t >= 0, s in [0,1]
    const Vec2 ab = b - a;
    const double denom = dir.cross(ab);
    if (std::abs(denom) < 1e-14) {
        // Parallel; collinear overlap handled via endpoint distances.
        if (std::abs((a - origin).cross(dir)) > 1e-12) return std::nullopt;
        double ta = (a - origin).dot(dir);
        double tb = (b - origin).dot(dir);
        if (ta < 0.0 && tb < 0.0) return std::nullopt;
        if (ta < 0.0) ta = 0.0;
        if (tb < 0.0) tb = 0.0;
        return std::min(ta, tb);
    }
    const Vec2 ao = a - origin;
    const double t = ao.cross(ab) / denom;
    const double s = ao.cross(dir) / denom;
    if (t < 0.0 || s < -1e-12 || s > 1.0 + 1e-12) return std::nullopt;
    return t;
}

double wedge_segment_distance(Vec2 origin, double center, double half_width,
                              Vec2 a, Vec2 b) {
    double best = kInf;
    const auto consider = [&](Vec2 q) {
        const Vec2 d = q - origin;
        const double r = d.norm();
        if (r <= 1e-12) {
            best = 0.0;
            return;
        }
        if (std::abs(normalize_angle(d.angle() - center)) <= half_width + 1e-12)
            best = std::min(best, r);
    };
    consider(a);
    consider(b);
    // Closest interior point of the segment.
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 > 0.0) {
        const double t = std::clamp((origin - a).dot(ab) / len2, 0.0, 1.0);
        consider(a + ab * t);
    }
    // Crossings of the two boundary rays.
    for (const double edge : {center - half_width, center + half_width}) {
        if (auto t = ray_segment_distance(origin, unit(edge), a, b))
            best = std::min(best, *t);
    }
    return best;
}

bool Polygon::contains(Vec2 p) const {
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& vi = vertices[i];
        const Vec2& vj = vertices[j];
        if ((vi.y > p.y) != (vj.y > p.y)) {
            const double x = vj.x + (p.y - vj.y) / (vi.y - vj.y) * (vi.x - vj.x);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

double Polygon::boundary_distance(Vec2 p) const {
    double best = kInf;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        best = std::min(best, point_segment_distance(p, vertices[j], vertices[i]));
    return best;
}

double Polygon::signed_distance(Vec2 p) const {
    const double d = boundary_distance(p);
    return contains(p) ? -d : d;
}

bool Polygon::is_simple() const {
    const std::size_t n = vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i];
        const Vec2 b = vertices[(i + 1) % n];
        for (std::size_t k = i + 1; k < n; ++k) {
            // Skip adjacent edges (they share a vertex).
            if (k == i || (k + 1) % n == i || (i + 1) % n == k) continue;
            const Vec2 c = vertices[k];
            const Vec2 d = vertices[(k + 1) % n];
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

Vec2 Polygon::centroid() const {
    Vec2 c;
    for (const Vec2& v : vertices) c = c + v;
    const double n = static_cast<double>(vertices.size());
    return {c.x / n, c.y / n};
}

bool segment_hits_polygon(Vec2 a, Vec2 b, const Polygon& poly) {
    if (poly.contains(a) || poly.contains(b)) return true;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        if (segments_intersect(a, b, poly.vertices[j], poly.vertices[i])) return true;
    return false;
}

Polygon make_regular_polygon(Vec2 center, double radius, int sides, double rotation) {
    Polygon poly;
    poly.vertices.reserve(static_cast<std::size_t>(sides));
    for (int k = 0; k < sides; ++k) {
        const double a = rotation + 2.0 * M_PI * k / sides;
        poly.vertices.push_back(center + unit(a) * radius);
    }
    return poly;
}

Polygon make_rectangle(Vec2 center, double width, double height, double rotation) {
    const Vec2 ex = unit(rotation);
    const Vec2 ey{-ex.y, ex.x};
    const Vec2 hx = ex * (0.5 * width);
    const Vec2 hy = ey * (0.5 * height);
    Polygon poly;
    poly.vertices = {center - hx - hy, center + hx - hy, center + hx + hy, center - hx + hy};
    return poly;
}

}  // namespace reefcover::geometry
