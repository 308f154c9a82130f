#pragma once

#include <cmath>
#include <complex>
#include <algorithm>

namespace scm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

using Point2 = Vec2;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

inline std::complex<double> to_complex(Point2 p) { return {p.x, p.y}; }
inline Point2 from_complex(std::complex<double> z) { return {z.real(), z.imag()}; }

// Axis-aligned box, used by the cell quadrature and domain overlap tests.
struct Box {
    double x0, y0, x1, y1;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diam() const { return std::hypot(width(), height()); }
    Point2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(Point2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

// Distance from p to the segment [a, b].
inline double segment_distance(Point2 p, Point2 a, Point2 b) {
    Vec2 ab = b - a;
    double L2 = norm2(ab);
    if (L2 == 0.0) return dist(p, a);
    double t = std::clamp(dot(p - a, ab) / L2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

// Proper intersection test for segments [a,b] and [c,d] (shared endpoints do
// not count). Used by the polygon self-intersection scan.
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto orient = [](Point2 p, Point2 q, Point2 r) {
        double v = cross(q - p, r - p);
        if (v > 0) return 1;
        if (v < 0) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    auto on = [](Point2 p, Point2 q, Point2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (o1 == 0 && on(a, b, c)) return true;
    if (o2 == 0 && on(a, b, d)) return true;
    if (o3 == 0 && on(c, d, a)) return true;
    if (o4 == 0 && on(c, d, b)) return true;
    return false;
}

inline constexpr double pi = 3.14159265358979323846;

}  // namespace scm
