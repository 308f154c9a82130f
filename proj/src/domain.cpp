#include "scm/domain.hpp"

#include <algorithm>
#include <cmath>

#include "scm/errors.hpp"

namespace scm {

namespace {

bool point_in_polygon(const Polygon& p, Point2 z) {
    // Ray-crossing parity, ray along +x.
    bool in = false;
    const auto& v = p.vertices;
    std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        bool straddles = (v[i].y > z.y) != (v[j].y > z.y);
        if (straddles) {
            double x_cross = v[j].x + (z.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
            if (z.x < x_cross) in = !in;
        }
    }
    return in;
}

double polygon_signed_area(const Polygon& p) {
    double s = 0.0;
    const auto& v = p.vertices;
    std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) s += cross(v[j], v[i]);
    return 0.5 * s;
}

void validate_polygon(const Polygon& p) {
    const auto& v = p.vertices;
    if (v.size() < 3) throw config_error("polygon: needs at least 3 vertices");
    std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share an endpoint)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw config_error("polygon: self-intersecting vertex list");
        }
    }
    if (polygon_signed_area(p) <= 0.0) throw config_error("polygon: vertices must be counterclockwise");
}

// Antiderivative of sqrt(R^2 - x^2).
double circ_seg(double R, double x) {
    x = std::clamp(x, -R, R);
    return 0.5 * (x * std::sqrt(std::max(0.0, R * R - x * x)) + R * R * std::asin(x / R));
}

}  // namespace

// --- curve helpers ---

double curve_area(const BoundaryCurve& c) {
    if (const auto* circ = std::get_if<Circle>(&c)) return pi * circ->radius * circ->radius;
    return polygon_signed_area(std::get<Polygon>(c));
}

double curve_perimeter(const BoundaryCurve& c) {
    if (const auto* circ = std::get_if<Circle>(&c)) return 2.0 * pi * circ->radius;
    const auto& v = std::get<Polygon>(c).vertices;
    double s = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) s += dist(v[j], v[i]);
    return s;
}

Box curve_bounding_box(const BoundaryCurve& c) {
    if (const auto* circ = std::get_if<Circle>(&c)) {
        return {circ->center.x - circ->radius, circ->center.y - circ->radius,
                circ->center.x + circ->radius, circ->center.y + circ->radius};
    }
    const auto& v = std::get<Polygon>(c).vertices;
    Box b{v[0].x, v[0].y, v[0].x, v[0].y};
    for (const auto& p : v) {
        b.x0 = std::min(b.x0, p.x);
        b.y0 = std::min(b.y0, p.y);
        b.x1 = std::max(b.x1, p.x);
        b.y1 = std::max(b.y1, p.y);
    }
    return b;
}

double curve_distance(const BoundaryCurve& c, Point2 z) {
    if (const auto* circ = std::get_if<Circle>(&c)) return std::abs(dist(z, circ->center) - circ->radius);
    const auto& v = std::get<Polygon>(c).vertices;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        d = std::min(d, segment_distance(z, v[j], v[i]));
    return d;
}

bool curve_encloses(const BoundaryCurve& c, Point2 z) {
    if (const auto* circ = std::get_if<Circle>(&c)) return dist(z, circ->center) < circ->radius;
    return point_in_polygon(std::get<Polygon>(c), z);
}

double circle_box_overlap(const Circle& c, const Box& b) {
    // Shift so the circle sits at the origin; integrate the clamped chord
    // length over x. Piecewise closed form between breakpoints where the
    // chord envelope +-sqrt(R^2-x^2) crosses the box's y-range.
    const double R = c.radius;
    double x0 = b.x0 - c.center.x, x1 = b.x1 - c.center.x;
    double y0 = b.y0 - c.center.y, y1 = b.y1 - c.center.y;
    x0 = std::max(x0, -R);
    x1 = std::min(x1, R);
    if (x0 >= x1) return 0.0;
    if (y0 >= R || y1 <= -R) return 0.0;

    double cuts[8];
    int ncuts = 0;
    cuts[ncuts++] = x0;
    cuts[ncuts++] = x1;
    for (double y : {y0, y1}) {
        if (std::abs(y) < R) {
            double xc = std::sqrt(R * R - y * y);
            if (-xc > x0 && -xc < x1) cuts[ncuts++] = -xc;
            if (xc > x0 && xc < x1) cuts[ncuts++] = xc;
        }
    }
    std::sort(cuts, cuts + ncuts);

    double area = 0.0;
    for (int i = 0; i + 1 < ncuts; ++i) {
        double a = cuts[i], d = cuts[i + 1];
        if (d - a <= 0.0) continue;
        double xm = 0.5 * (a + d);
        double ch = std::sqrt(std::max(0.0, R * R - xm * xm));
        double lo = std::max(y0, -ch), hi = std::min(y1, ch);
        if (hi <= lo) continue;
        // On this piece the active bounds do not change; integrate each side.
        bool hi_is_circle = ch < y1;
        bool lo_is_circle = -ch > y0;
        double piece = 0.0;
        piece += hi_is_circle ? (circ_seg(R, d) - circ_seg(R, a)) : y1 * (d - a);
        piece -= lo_is_circle ? -(circ_seg(R, d) - circ_seg(R, a)) : y0 * (d - a);
        area += piece;
    }
    return std::max(area, 0.0);
}

std::vector<Point2> clip_polygon_to_box(const Polygon& p, const Box& b) {
    // Sutherland-Hodgman against the box half-planes. Degenerate bridge edges
    // from non-convex subjects carry zero signed area.
    std::vector<Point2> poly = p.vertices;
    auto clip = [&](auto inside, auto intersect) {
        std::vector<Point2> out;
        out.reserve(poly.size() + 4);
        std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            Point2 cur = poly[i], prev = poly[(i + n - 1) % n];
            bool cur_in = inside(cur), prev_in = inside(prev);
            if (cur_in) {
                if (!prev_in) out.push_back(intersect(prev, cur));
                out.push_back(cur);
            } else if (prev_in) {
                out.push_back(intersect(prev, cur));
            }
        }
        poly = std::move(out);
    };
    auto lerp_x = [](Point2 a, Point2 c, double x) {
        double t = (x - a.x) / (c.x - a.x);
        return Point2{x, a.y + t * (c.y - a.y)};
    };
    auto lerp_y = [](Point2 a, Point2 c, double y) {
        double t = (y - a.y) / (c.y - a.y);
        return Point2{a.x + t * (c.x - a.x), y};
    };
    clip([&](Point2 q) { return q.x >= b.x0; }, [&](Point2 u, Point2 v) { return lerp_x(u, v, b.x0); });
    if (poly.empty()) return {};
    clip([&](Point2 q) { return q.x <= b.x1; }, [&](Point2 u, Point2 v) { return lerp_x(u, v, b.x1); });
    if (poly.empty()) return {};
    clip([&](Point2 q) { return q.y >= b.y0; }, [&](Point2 u, Point2 v) { return lerp_y(u, v, b.y0); });
    if (poly.empty()) return {};
    clip([&](Point2 q) { return q.y <= b.y1; }, [&](Point2 u, Point2 v) { return lerp_y(u, v, b.y1); });
    if (poly.size() < 3) return {};
    return poly;
}

double polygon_box_overlap(const Polygon& p, const Box& b) {
    std::vector<Point2> clipped = clip_polygon_to_box(p, b);
    if (clipped.size() < 3) return 0.0;
    return std::abs(polygon_signed_area(Polygon{clipped}));
}

double curve_box_overlap(const BoundaryCurve& c, const Box& b) {
    if (const auto* circ = std::get_if<Circle>(&c)) return circle_box_overlap(*circ, b);
    return polygon_box_overlap(std::get<Polygon>(c), b);
}

// --- PlanarDomain ---

PlanarDomain::PlanarDomain(BoundaryCurve outer, std::vector<BoundaryCurve> holes)
    : outer_(std::move(outer)), holes_(std::move(holes)) {
    if (const auto* circ = std::get_if<Circle>(&outer_)) {
        if (!(circ->radius > 0.0)) throw config_error("domain: circle radius must be positive");
    } else {
        validate_polygon(std::get<Polygon>(outer_));
    }
    for (const auto& h : holes_) {
        if (const auto* circ = std::get_if<Circle>(&h)) {
            if (!(circ->radius > 0.0)) throw config_error("domain: hole radius must be positive");
        } else {
            validate_polygon(std::get<Polygon>(h));
        }
    }
    // Hole closures strictly inside the outer curve and pairwise disjoint.
    // Sampled check: every hole-boundary point must be enclosed by the outer
    // curve with positive clearance, and clear of every other hole.
    auto samples = [](const BoundaryCurve& c) {
        std::vector<Point2> pts;
        if (const auto* circ = std::get_if<Circle>(&c)) {
            for (int k = 0; k < 64; ++k) {
                double t = 2.0 * pi * k / 64;
                pts.push_back(circ->center + Point2{circ->radius * std::cos(t), circ->radius * std::sin(t)});
            }
        } else {
            const auto& v = std::get<Polygon>(c).vertices;
            for (std::size_t i = 0; i < v.size(); ++i) {
                Point2 a = v[i], b = v[(i + 1) % v.size()];
                for (int k = 0; k < 8; ++k) pts.push_back(a + (k / 8.0) * (b - a));
            }
        }
        return pts;
    };
    for (std::size_t i = 0; i < holes_.size(); ++i) {
        for (const auto& q : samples(holes_[i])) {
            if (!curve_encloses(outer_, q) || curve_distance(outer_, q) <= boundary_band)
                throw config_error("domain: hole not strictly inside outer curve");
            for (std::size_t j = 0; j < holes_.size(); ++j) {
                if (j == i) continue;
                if (curve_encloses(holes_[j], q) || curve_distance(holes_[j], q) <= boundary_band)
                    throw config_error("domain: hole closures intersect");
            }
        }
    }
}

PlanarDomain PlanarDomain::disk(Point2 center, double radius) { return PlanarDomain(Circle{center, radius}); }

PlanarDomain PlanarDomain::polygon(std::vector<Point2> vertices) {
    return PlanarDomain(Polygon{std::move(vertices)});
}

PlanarDomain PlanarDomain::with_hole(BoundaryCurve hole) const {
    auto hs = holes_;
    hs.push_back(std::move(hole));
    return PlanarDomain(outer_, std::move(hs));
}

Location PlanarDomain::locate(Point2 z) const {
    if (curve_distance(outer_, z) <= boundary_band) return Location::Boundary;
    for (const auto& h : holes_)
        if (curve_distance(h, z) <= boundary_band) return Location::Boundary;
    if (!curve_encloses(outer_, z)) return Location::Outside;
    for (const auto& h : holes_)
        if (curve_encloses(h, z)) return Location::Outside;
    return Location::Inside;
}

bool PlanarDomain::contains(Point2 z) const {
    switch (locate(z)) {
        case Location::Inside: return true;
        case Location::Outside: return false;
        default: throw boundary_ambiguous("contains: point within boundary ambiguity band");
    }
}

static void append_curve_arcs(const BoundaryCurve& c, bool clockwise, std::vector<BoundaryArc>& out) {
    if (const auto* circ = std::get_if<Circle>(&c)) {
        Circle cc = *circ;
        double sgn = clockwise ? -1.0 : 1.0;
        BoundaryArc arc;
        arc.t0 = 0.0;
        arc.t1 = 2.0 * pi;
        arc.position = [cc, sgn](double t) {
            return cc.center + Point2{cc.radius * std::cos(sgn * t), cc.radius * std::sin(sgn * t)};
        };
        arc.velocity = [cc, sgn](double t) {
            return Point2{-sgn * cc.radius * std::sin(sgn * t), sgn * cc.radius * std::cos(sgn * t)};
        };
        out.push_back(std::move(arc));
        return;
    }
    // Polygon edges; stored ccw, holes traversed in reverse for cw orientation.
    auto v = std::get<Polygon>(c).vertices;
    if (clockwise) std::reverse(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Point2 a = v[i], b = v[(i + 1) % v.size()];
        BoundaryArc arc;
        arc.t0 = 0.0;
        arc.t1 = 1.0;
        arc.position = [a, b](double t) { return a + t * (b - a); };
        arc.velocity = [a, b](double) { return b - a; };
        out.push_back(std::move(arc));
    }
}

std::vector<BoundaryArc> PlanarDomain::boundary_arcs() const {
    std::vector<BoundaryArc> arcs;
    append_curve_arcs(outer_, false, arcs);
    for (const auto& h : holes_) append_curve_arcs(h, true, arcs);
    return arcs;
}

PlanarDomain PlanarDomain::fill_holes() const { return PlanarDomain(outer_); }

Box PlanarDomain::bounding_box() const { return curve_bounding_box(outer_); }

double PlanarDomain::diameter() const {
    Box b = bounding_box();
    return b.diam();
}

double PlanarDomain::euclidean_area() const {
    double a = curve_area(outer_);
    for (const auto& h : holes_) a -= curve_area(h);
    return a;
}

double PlanarDomain::euclidean_perimeter() const {
    double s = curve_perimeter(outer_);
    for (const auto& h : holes_) s += curve_perimeter(h);
    return s;
}

double PlanarDomain::distance_to_boundary(Point2 z) const {
    double d = curve_distance(outer_, z);
    for (const auto& h : holes_) d = std::min(d, curve_distance(h, z));
    return d;
}

double PlanarDomain::overlap_area(const Box& cell) const {
    double a = curve_box_overlap(outer_, cell);
    if (a <= 0.0) return 0.0;
    for (const auto& h : holes_) a -= curve_box_overlap(h, cell);
    return std::max(a, 0.0);
}

}  // namespace scm
