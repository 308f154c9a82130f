#include <doctest.h>

#include <cmath>

#include "scm/domain.hpp"
#include "scm/errors.hpp"
#include "scm/random.hpp"

using namespace scm;

namespace {

PlanarDomain unit_square() {
    return PlanarDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
}

}  // namespace

TEST_CASE("membership tests") {
    PlanarDomain disk = PlanarDomain::disk({0, 0}, 1.0);
    CHECK(disk.contains({0, 0}));
    CHECK_FALSE(disk.contains({2, 0}));

    PlanarDomain punctured = disk.with_hole(Circle{{0, 0}, 0.25});
    CHECK_FALSE(punctured.contains({0, 0}));
    CHECK(punctured.contains({0.5, 0}));

    CHECK_FALSE(unit_square().contains({2, 0}));
    CHECK(unit_square().contains({0.3, -0.7}));

    SUBCASE("boundary band is three-valued") {
        CHECK(disk.locate({1.0, 0.0}) == Location::Boundary);
        CHECK(disk.locate({1.0 + 5e-13, 0.0}) == Location::Boundary);
        CHECK_THROWS_AS(disk.contains({1.0, 0.0}), boundary_ambiguous);
    }
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(PlanarDomain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), config_error);  // bowtie
    CHECK_THROWS_AS(PlanarDomain::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), config_error);  // clockwise
    CHECK_THROWS_AS(PlanarDomain::disk({0, 0}, -1.0), config_error);
    // hole outside the outer curve
    CHECK_THROWS_AS(PlanarDomain(Circle{{0, 0}, 1.0}, {Circle{{2, 0}, 0.5}}), config_error);
    // hole touching the outer boundary
    CHECK_THROWS_AS(PlanarDomain(Circle{{0, 0}, 1.0}, {Circle{{0.6, 0}, 0.5}}), config_error);
    // overlapping holes
    CHECK_THROWS_AS(PlanarDomain(Circle{{0, 0}, 1.0}, {Circle{{-0.3, 0}, 0.25}, Circle{{-0.1, 0}, 0.25}}),
                    config_error);
}

TEST_CASE("boundary arcs carry parametrization and orientation") {
    SUBCASE("circle") {
        auto arcs = PlanarDomain::disk({0, 0}, 2.5).boundary_arcs();
        REQUIRE(arcs.size() == 1);
        CHECK(arcs[0].t1 - arcs[0].t0 == doctest::Approx(2 * pi));
        CHECK(arcs[0].speed(0.3) == doctest::Approx(2.5));
    }
    SUBCASE("square edges") {
        auto arcs = unit_square().boundary_arcs();
        REQUIRE(arcs.size() == 4);
        double total = 0;
        for (const auto& a : arcs) total += a.speed(0.5) * (a.t1 - a.t0);
        CHECK(total == doctest::Approx(8.0));
    }
    SUBCASE("hole runs clockwise") {
        PlanarDomain annulus = PlanarDomain::disk({0, 0}, 1.0).with_hole(Circle{{0, 0}, 0.5});
        auto arcs = annulus.boundary_arcs();
        REQUIRE(arcs.size() == 2);
        // signed area of a closed arc: 1/2 |oint x dy - y dx|, orientation in the sign
        auto signed_area = [](const BoundaryArc& arc) {
            double acc = 0;
            int n = 2000;
            for (int i = 0; i < n; ++i) {
                double t = arc.t0 + (arc.t1 - arc.t0) * (i + 0.5) / n;
                Point2 z = arc.position(t), v = arc.velocity(t);
                acc += 0.5 * (z.x * v.y - z.y * v.x) * (arc.t1 - arc.t0) / n;
            }
            return acc;
        };
        CHECK(signed_area(arcs[0]) == doctest::Approx(pi).epsilon(1e-6));
        CHECK(signed_area(arcs[1]) == doctest::Approx(-pi / 4).epsilon(1e-6));
    }
}

TEST_CASE("fill_holes removes holes and is idempotent") {
    PlanarDomain annulus = PlanarDomain::disk({0, 0}, 1.0).with_hole(Circle{{0, 0}, 0.5});
    PlanarDomain filled = annulus.fill_holes();
    CHECK(filled.is_simple());
    CHECK(filled.contains({0, 0}));
    CHECK(filled.fill_holes().is_simple());

    PlanarDomain square = unit_square();
    CHECK(square.fill_holes().is_simple());
    CHECK(square.fill_holes().euclidean_area() == doctest::Approx(square.euclidean_area()));

    PlanarDomain two = PlanarDomain(Circle{{0, 0}, 1.0},
                                    {Circle{{-0.4, 0}, 0.15}, Circle{{0.4, 0}, 0.15}});
    CHECK(two.fill_holes().euclidean_area() == doctest::Approx(pi));
}

TEST_CASE("euclidean area via shoelace and holes") {
    CHECK(unit_square().euclidean_area() == doctest::Approx(4.0));
    PlanarDomain annulus = PlanarDomain::disk({0, 0}, 1.0).with_hole(Circle{{0, 0}, 0.5});
    CHECK(annulus.euclidean_area() == doctest::Approx(pi * (1 - 0.25)));
    PlanarDomain weird = PlanarDomain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(weird.euclidean_area() == doctest::Approx(3.0));
}

TEST_CASE("circle-box overlap closed form") {
    Circle c{{0.3, -0.2}, 0.8};
    SUBCASE("box containing the circle") {
        CHECK(circle_box_overlap(c, {-2, -2, 2, 2}) == doctest::Approx(pi * 0.64).epsilon(1e-13));
    }
    SUBCASE("box fully inside") {
        CHECK(circle_box_overlap(c, {0.2, -0.3, 0.4, -0.1}) == doctest::Approx(0.04).epsilon(1e-13));
    }
    SUBCASE("disjoint") { CHECK(circle_box_overlap(c, {2, 2, 3, 3}) == 0.0); }
    SUBCASE("half-plane cut through the center") {
        // Box covering exactly the right half of the circle.
        CHECK(circle_box_overlap(Circle{{0, 0}, 1.0}, {0, -2, 2, 2}) ==
              doctest::Approx(pi / 2).epsilon(1e-13));
    }
    SUBCASE("additivity under quadrisection") {
        Rng rng(3);
        for (int trial = 0; trial < 40; ++trial) {
            Box b{rng.uniform(-1.5, 0.5), rng.uniform(-1.5, 0.5), 0, 0};
            b.x1 = b.x0 + rng.uniform(0.1, 1.5);
            b.y1 = b.y0 + rng.uniform(0.1, 1.5);
            double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);
            double whole = circle_box_overlap(c, b);
            double parts = circle_box_overlap(c, {b.x0, b.y0, xm, ym}) +
                           circle_box_overlap(c, {xm, b.y0, b.x1, ym}) +
                           circle_box_overlap(c, {b.x0, ym, xm, b.y1}) +
                           circle_box_overlap(c, {xm, ym, b.x1, b.y1});
            CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
        }
    }
}

TEST_CASE("polygon-box overlap via clipping") {
    Polygon tri{{{0, 0}, {2, 0}, {0, 2}}};
    CHECK(polygon_box_overlap(tri, {-1, -1, 3, 3}) == doctest::Approx(2.0));
    CHECK(polygon_box_overlap(tri, {0, 0, 1, 1}) == doctest::Approx(1.0 - 0.0).epsilon(1e-12));
    CHECK(polygon_box_overlap(tri, {5, 5, 6, 6}) == 0.0);

    // non-convex subject
    Polygon ell{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    CHECK(polygon_box_overlap(ell, {-1, -1, 3, 3}) == doctest::Approx(3.0));
    CHECK(polygon_box_overlap(ell, {0.5, 0.5, 1.5, 1.5}) == doctest::Approx(0.75).epsilon(1e-12));

    SUBCASE("additivity under quadrisection") {
        Rng rng(5);
        for (int trial = 0; trial < 40; ++trial) {
            Box b{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5), 0, 0};
            b.x1 = b.x0 + rng.uniform(0.1, 1.2);
            b.y1 = b.y0 + rng.uniform(0.1, 1.2);
            double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);
            double whole = polygon_box_overlap(ell, b);
            double parts = polygon_box_overlap(ell, {b.x0, b.y0, xm, ym}) +
                           polygon_box_overlap(ell, {xm, b.y0, b.x1, ym}) +
                           polygon_box_overlap(ell, {b.x0, ym, xm, b.y1}) +
                           polygon_box_overlap(ell, {xm, ym, b.x1, b.y1});
            CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
        }
    }
}

TEST_CASE("domain overlap subtracts holes") {
    PlanarDomain annulus = PlanarDomain::disk({0, 0}, 1.0).with_hole(Circle{{0, 0}, 0.5});
    CHECK(annulus.overlap_area({-2, -2, 2, 2}) == doctest::Approx(pi * 0.75).epsilon(1e-13));
    CHECK(annulus.overlap_area({-0.2, -0.2, 0.2, 0.2}) == 0.0);
}

TEST_CASE("distance to boundary") {
    PlanarDomain annulus = PlanarDomain::disk({0, 0}, 1.0).with_hole(Circle{{0, 0}, 0.5});
    CHECK(annulus.distance_to_boundary({0.75, 0}) == doctest::Approx(0.25));
    CHECK(unit_square().distance_to_boundary({0.5, 0}) == doctest::Approx(0.5));
}

TEST_CASE("arc velocities are consistent with positions") {
    PlanarDomain d = PlanarDomain::disk({0.4, -0.2}, 1.3).with_hole(Circle{{0.4, -0.2}, 0.4});
    for (const auto& arc : d.boundary_arcs()) {
        for (double frac : {0.13, 0.5, 0.86}) {
            double t = arc.t0 + frac * (arc.t1 - arc.t0);
            double h = 1e-6;
            Point2 fd = (1.0 / (2 * h)) * (arc.position(t + h) - arc.position(t - h));
            Point2 v = arc.velocity(t);
            CHECK(fd.x == doctest::Approx(v.x).epsilon(1e-8).scale(1.0));
            CHECK(fd.y == doctest::Approx(v.y).epsilon(1e-8).scale(1.0));
        }
    }
}
