#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "scm/geometry.hpp"

namespace scm {

struct Circle {
    Point2 center;
    double radius = 1.0;
};

// Simple closed polygon; vertices in counterclockwise order.
struct Polygon {
    std::vector<Point2> vertices;
};

using BoundaryCurve = std::variant<Circle, Polygon>;

enum class Location { Inside, Outside, Boundary };

// One parametrized boundary component: position(t), velocity(t) for
// t in [t0, t1]. Orientation is encoded in velocity (outer curves run
// counterclockwise, hole curves clockwise).
struct BoundaryArc {
    double t0 = 0.0;
    double t1 = 1.0;
    std::function<Point2(double)> position;
    std::function<Point2(double)> velocity;

    double speed(double t) const { return norm(velocity(t)); }
};

// Width of the band around boundaries where membership is ambiguous.
inline constexpr double boundary_band = 1e-12;

// A simple or regular planar domain: one outer curve (circle or ccw polygon)
// minus finitely many holes, each strictly inside the outer curve with
// pairwise disjoint closures.
class PlanarDomain {
  public:
    explicit PlanarDomain(BoundaryCurve outer, std::vector<BoundaryCurve> holes = {});

    static PlanarDomain disk(Point2 center, double radius);
    static PlanarDomain polygon(std::vector<Point2> vertices);
    PlanarDomain with_hole(BoundaryCurve hole) const;

    const BoundaryCurve& outer() const { return outer_; }
    const std::vector<BoundaryCurve>& holes() const { return holes_; }
    bool is_simple() const { return holes_.empty(); }

    // Three-valued membership; Boundary within `boundary_band` of any curve.
    Location locate(Point2 z) const;
    // Strict membership; throws boundary_ambiguous inside the band.
    bool contains(Point2 z) const;

    // Outer arc counterclockwise first, then hole arcs clockwise. Polygons
    // contribute one arc per edge.
    std::vector<BoundaryArc> boundary_arcs() const;

    // Same outer curve, no holes (the E_s of the hole-filled inequality).
    PlanarDomain fill_holes() const;

    Box bounding_box() const;
    double diameter() const;
    // Area by shoelace / pi R^2; holes subtract.
    double euclidean_area() const;
    double euclidean_perimeter() const;
    // Distance from z to the nearest boundary curve (outer or hole).
    double distance_to_boundary(Point2 z) const;

    // Exact area of cell ∩ domain (holes subtracted). The workhorse of the
    // cell quadrature: closed form for circles, polygon clipping for polygons.
    double overlap_area(const Box& cell) const;

  private:
    BoundaryCurve outer_;
    std::vector<BoundaryCurve> holes_;
};

// --- curve-level helpers (exposed for the quadrature engine and tests) ---

// Signed area enclosed by the curve (positive for ccw polygons, pi R^2 for circles).
double curve_area(const BoundaryCurve& c);
double curve_perimeter(const BoundaryCurve& c);
Box curve_bounding_box(const BoundaryCurve& c);
double curve_distance(const BoundaryCurve& c, Point2 z);
// Strictly-inside test ignoring the ambiguity band (raw geometry).
bool curve_encloses(const BoundaryCurve& c, Point2 z);

// Exact area of {box ∩ interior of circle}.
double circle_box_overlap(const Circle& c, const Box& b);
// Exact area of {box ∩ polygon} (polygon simple, any orientation; result >= 0).
double polygon_box_overlap(const Polygon& p, const Box& b);
double curve_box_overlap(const BoundaryCurve& c, const Box& b);
// Sutherland-Hodgman clip of the polygon against the box; the returned vertex
// chain (possibly with degenerate bridge edges) traces box ∩ polygon.
std::vector<Point2> clip_polygon_to_box(const Polygon& p, const Box& b);

}  // namespace scm
