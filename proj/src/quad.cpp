#include "scm/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <cstdio>
#include <cstdlib>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scm/errors.hpp"

namespace scm {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// --- tensor Gauss-Legendre rules -------------------------------------------

constexpr double gl3_x[3] = {-0.774596669241483377, 0.0, 0.774596669241483377};
constexpr double gl3_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
constexpr double gl5_x[5] = {-0.906179845938663993, -0.538469310105683091, 0.0,
                             0.538469310105683091, 0.906179845938663993};
constexpr double gl5_w[5] = {0.236926885056189088, 0.478628670499366468, 0.568888888888888889,
                             0.478628670499366468, 0.236926885056189088};

template <int N>
double tensor_rule(const std::function<double(Point2)>& f, const Box& b, const double* x,
                   const double* w) {
    double hx = 0.5 * b.width(), hy = 0.5 * b.height();
    Point2 c = b.center();
    double total = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            total += w[i] * w[j] * f({c.x + hx * x[i], c.y + hy * x[j]});
    return total * hx * hy;
}

// Symmetric triangle rules: degree 5 (7 points) and degree 2 (3 points).
// Barycentric (a, b, b) orbits.
struct TriRulePoint {
    double l1, l2, l3, w;
};
constexpr TriRulePoint tri7[] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
};
constexpr TriRulePoint tri3[] = {
    {0.5, 0.5, 0.0, 1.0 / 3},
    {0.0, 0.5, 0.5, 1.0 / 3},
    {0.5, 0.0, 0.5, 1.0 / 3},
};

template <std::size_t NR>
double triangle_rule(const std::function<double(Point2)>& f, Point2 a, Point2 b, Point2 c,
                     const TriRulePoint (&rule)[NR]) {
    double signed_area = 0.5 * cross(b - a, c - a);
    double total = 0.0;
    for (const auto& rp : rule) {
        Point2 z = rp.l1 * a + rp.l2 * b + rp.l3 * c;
        total += rp.w * f(z);
    }
    return total * signed_area;
}

// Integral of f over a clipped simple polygon region via signed fan
// triangulation (valid for non-convex chains: overlaps cancel by orientation).
std::pair<double, double> polygon_region_rule(const std::function<double(Point2)>& f,
                                              const std::vector<Point2>& poly) {
    double v5 = 0.0, v2 = 0.0;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        v5 += triangle_rule(f, poly[0], poly[i], poly[i + 1], tri7);
        v2 += triangle_rule(f, poly[0], poly[i], poly[i + 1], tri3);
    }
    return {v5, std::abs(v5 - v2)};
}

// --- patch geometry ---------------------------------------------------------

struct Patch {
    Singularity sing;
    double radius = 0.0;
};

double min_box_distance(Point2 c, const Box& b) {
    double dx = std::max({b.x0 - c.x, 0.0, c.x - b.x1});
    double dy = std::max({b.y0 - c.y, 0.0, c.y - b.y1});
    return std::hypot(dx, dy);
}

double max_box_distance(Point2 c, const Box& b) {
    double dx = std::max(std::abs(c.x - b.x0), std::abs(c.x - b.x1));
    double dy = std::max(std::abs(c.y - b.y0), std::abs(c.y - b.y1));
    return std::hypot(dx, dy);
}

bool circle_crosses_box(Point2 center, double R, const Box& b) {
    return min_box_distance(center, b) < R && R < max_box_distance(center, b);
}

// Integral of f over the disk of radius r_patch around s.center, in polar
// coordinates with the regularizing radial substitution. Below a safe radius
// the integrand follows its declared power law exactly (in doubles, adding
// r << ulp(|center|) to the center would collapse onto the singular point),
// so that zone uses the asymptotic form with the prefactor sampled at r_safe.
std::pair<double, double> patch_integral(const std::function<double(Point2)>& f, const Singularity& s,
                                         double r_patch, double rel_tol) {
    Point2 c = s.center;

    std::function<std::pair<double, double>(double)> ray_integral;
    if (s.kind == Singularity::Kind::Power) {
        double e = s.exponent;
        double q = 1.0 - e / 2.0;
        if (!(q > 0.0))
            throw numerical_rejection("quadrature: non-integrable power singularity inside the domain");
        double T = std::pow(r_patch, q);
        double r_safe = 1e-6 * r_patch;
        double t_safe = std::pow(r_safe, q);
        ray_integral = [&f, c, e, q, T, r_safe, t_safe](double theta) {
            Point2 dir{std::cos(theta), std::sin(theta)};
            double slope = f(c + r_safe * dir) * std::pow(r_safe, e) / q;
            auto integrand = [&](double t) {
                if (t <= 0.0) return 0.0;
                if (t <= t_safe) return slope * t;
                double r = std::pow(t, 1.0 / q);
                return f(c + r * dir) * r * r / (q * t);
            };
            double err = 0.0;
            double v = GK::integrate(integrand, 0.0, T, 12, 1e-12, &err);
            return std::pair{v, err};
        };
    } else {
        // t = 1/(1 - log r). The integrand tends to a finite limit at t = 0
        // but its factors leave double range once 1/t exceeds ~350 (or once
        // r drops below ulp of an off-origin center); integrate down to a
        // floor and complete with the near-constant strip.
        double T = 1.0 / (1.0 - std::log(r_patch));
        double t_floor = 1.0 / 350.0;
        if (norm(c) > 0.0)
            t_floor = std::max(t_floor, 1.0 / (1.0 - std::log(1e-13 * norm(c))));
        t_floor = std::min(t_floor, 0.5 * T);
        ray_integral = [&f, c, T, t_floor](double theta) {
            Point2 dir{std::cos(theta), std::sin(theta)};
            auto integrand = [&](double t) {
                if (t <= 0.0) return 0.0;
                double r = std::exp(1.0 - 1.0 / t);
                if (r <= 0.0) return 0.0;
                return f(c + r * dir) * r * r / (t * t);
            };
            double err = 0.0;
            double v = GK::integrate(integrand, t_floor, T, 12, 1e-12, &err);
            double g_lo = integrand(t_floor), g_hi = integrand(std::min(1.5 * t_floor, T));
            v += 0.5 * (g_lo + g_hi) * t_floor;
            err += std::abs(g_hi - g_lo) * t_floor;
            return std::pair{v, err};
        };
    }

    // Periodic trapezoid in theta with doubling; spectrally accurate for the
    // smooth angular dependence, exact after one level for radial integrands.
    double prev = 0.0, cur = 0.0, inner_err = 0.0;
    int M = 8;
    for (;; M *= 2) {
        double sum = 0.0, esum = 0.0;
        for (int j = 0; j < M; ++j) {
            auto [v, e] = ray_integral(2.0 * pi * j / M);
            sum += v;
            esum += e;
        }
        cur = sum * 2.0 * pi / M;
        inner_err = esum * 2.0 * pi / M;
        if (M > 8 && std::abs(cur - prev) <= std::max(1e-13, 0.25 * rel_tol * std::abs(cur))) break;
        if (M >= 512) break;
        prev = cur;
    }
    return {cur, std::abs(cur - prev) + inner_err};
}

// --- adaptive cell engine ----------------------------------------------------

struct CellEval {
    Box box;
    double value = 0.0;
    double err = 0.0;
    bool refinable = true;
};

// Integral of f over the box in polar coordinates about jc, with the radial
// range split exactly at R (the integrand may jump across that circle; with
// skip_inside the part r < R is omitted entirely, which resolves patch rims).
// The box's angular extent is cut at corner angles so the ray-box limits are
// smooth on each theta piece; the tensor rule is then high-order per side.
// side_mode: 0 = both sides of the circle, 1 = outside only, 2 = inside only.
template <int N>
double polar_split_rule(const std::function<double(Point2)>& f, Point2 jc, double R, const Box& b,
                        int side_mode, const double* x, const double* w) {
    Point2 corners[4] = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x0, b.y1}, {b.x1, b.y1}};
    double theta_c = std::atan2(b.center().y - jc.y, b.center().x - jc.x);
    // Theta breakpoints: box corners plus the circle/box-edge intersection
    // angles (the radial-limit formulas are smooth between breakpoints).
    double offs[14];
    int noffs = 0;
    for (int i = 0; i < 4; ++i)
        offs[noffs++] =
            std::remainder(std::atan2(corners[i].y - jc.y, corners[i].x - jc.x) - theta_c, 2.0 * pi);
    for (double X : {b.x0, b.x1}) {
        double dx = X - jc.x;
        double disc = R * R - dx * dx;
        if (disc > 0.0) {
            double s = std::sqrt(disc);
            for (double Y : {jc.y + s, jc.y - s})
                if (Y >= b.y0 && Y <= b.y1)
                    offs[noffs++] = std::remainder(std::atan2(Y - jc.y, dx) - theta_c, 2.0 * pi);
        }
    }
    for (double Y : {b.y0, b.y1}) {
        double dy = Y - jc.y;
        double disc = R * R - dy * dy;
        if (disc > 0.0) {
            double s = std::sqrt(disc);
            for (double X : {jc.x + s, jc.x - s})
                if (X >= b.x0 && X <= b.x1)
                    offs[noffs++] = std::remainder(std::atan2(dy, X - jc.x) - theta_c, 2.0 * pi);
        }
    }
    std::sort(offs, offs + noffs);
    int nseg = noffs - 1;
    if (b.contains(jc)) {
        offs[noffs] = offs[0] + 2.0 * pi;  // wrap segment for interior centers
        nseg = noffs;
    }

    auto slab = [&](double theta, double& t0, double& t1) {
        double ux = std::cos(theta), uy = std::sin(theta);
        t0 = 0.0;
        t1 = std::numeric_limits<double>::infinity();
        if (ux != 0.0) {
            double a = (b.x0 - jc.x) / ux, c = (b.x1 - jc.x) / ux;
            t0 = std::max(t0, std::min(a, c));
            t1 = std::min(t1, std::max(a, c));
        } else if (jc.x < b.x0 || jc.x > b.x1) {
            t1 = 0.0;
        }
        if (uy != 0.0) {
            double a = (b.y0 - jc.y) / uy, c = (b.y1 - jc.y) / uy;
            t0 = std::max(t0, std::min(a, c));
            t1 = std::min(t1, std::max(a, c));
        } else if (jc.y < b.y0 || jc.y > b.y1) {
            t1 = 0.0;
        }
    };

    double total = 0.0;
    for (int seg = 0; seg + 1 <= nseg; ++seg) {
        double a = offs[seg], c = offs[seg + 1];
        if (c - a <= 1e-15) continue;
        double hth = 0.5 * (c - a);
        double mth = theta_c + 0.5 * (a + c);
        for (int i = 0; i < N; ++i) {
            double theta = mth + hth * x[i];
            double t0, t1;
            slab(theta, t0, t1);
            if (!(t1 > t0)) continue;
            double u0 = std::cos(theta), u1 = std::sin(theta);
            double ray = 0.0;
            double splits[2][2] = {{t0, std::min(t1, R)}, {std::max(t0, R), t1}};
            int side_lo = side_mode == 1 ? 1 : 0;
            int side_hi = side_mode == 2 ? 1 : 2;
            for (int side = side_lo; side < side_hi; ++side) {
                if (!(splits[side][1] > splits[side][0])) continue;
                double hr = 0.5 * (splits[side][1] - splits[side][0]);
                double mr = 0.5 * (splits[side][1] + splits[side][0]);
                for (int j = 0; j < N; ++j) {
                    double t = mr + hr * x[j];
                    ray += w[j] * hr * f({jc.x + t * u0, jc.y + t * u1}) * t;
                }
            }
            total += w[i] * hth * ray;
        }
    }
    return total;
}

struct Engine {
    const std::function<double(Point2)>& f;
    const PlanarDomain& d;
    const std::vector<Patch>& patches;
    const std::vector<JumpCircle>& jumps;
    const std::vector<Singularity>& all_singular;  // including exterior ones
    double floor_diam;

    double region_overlap(const Box& b) const {
        double ov = d.overlap_area(b);
        if (ov <= 0.0) return 0.0;
        for (const auto& p : patches) ov -= circle_box_overlap(Circle{p.sing.center, p.radius}, b);
        return std::max(ov, 0.0);
    }

    // Sample point for straddling cells, pushed out of any patch disk so the
    // evaluation stays in the integration region's smooth range. Hits close to
    // a bare singular point (an atom inside a hole, say) are displaced by a
    // fraction of the cell size: the sample then represents the cell's value
    // scale instead of an astronomical near-atom value, and the displacement
    // is covered by the variation-based error estimate.
    Point2 sample_point(Point2 z, double cell_diam) const {
        for (const auto& p : patches) {
            double rc = dist(z, p.sing.center);
            if (rc < p.radius) {
                Vec2 u = rc > 0.0 ? (1.0 / rc) * (z - p.sing.center) : Vec2{1.0, 0.0};
                return p.sing.center + (p.radius * 1.0000001) * u;
            }
        }
        for (const auto& s : all_singular) {
            double rc = dist(z, s.center);
            if (rc < 1e-9 * cell_diam) {
                Vec2 u = rc > 0.0 ? (1.0 / rc) * (z - s.center) : Vec2{0.894427191, 0.4472135955};
                return s.center + (0.2 * cell_diam) * u;
            }
        }
        return z;
    }

    CellEval evaluate(const Box& b) const {
        CellEval out;
        out.box = b;
        double dom_ov = d.overlap_area(b);
        if (dom_ov <= 1e-300) {
            out.refinable = false;
            return out;
        }
        double patch_ov = 0.0;
        const Patch* patch_cross = nullptr;
        int n_patch_cross = 0;
        for (const auto& p : patches) {
            patch_ov += circle_box_overlap(Circle{p.sing.center, p.radius}, b);
            if (circle_crosses_box(p.sing.center, p.radius, b)) {
                if (patch_cross == nullptr) patch_cross = &p;
                ++n_patch_cross;
            }
        }
        double ov = std::max(dom_ov - patch_ov, 0.0);
        if (ov <= 1e-300) {
            out.refinable = false;
            return out;
        }

        const JumpCircle* crossing = nullptr;
        int n_crossing = 0;
        for (const auto& j : jumps) {
            if (circle_crosses_box(j.center, j.radius, b)) {
                if (crossing == nullptr) crossing = &j;
                ++n_crossing;
            }
        }
        bool full = dom_ov >= b.area() * (1.0 - 1e-12);
        bool near_patch = n_patch_cross > 0;

        if (full && !crossing && patch_ov <= 0.0) {
            double v5 = tensor_rule<5>(f, b, gl5_x, gl5_w);
            double v3 = tensor_rule<3>(f, b, gl3_x, gl3_w);
            out.value = v5;
            out.err = std::abs(v5 - v3);
            return out;
        }

        if (full && patch_ov <= 0.0 && n_crossing == 1) {
            // Exact geometric split of the jump circle in polar coordinates.
            double v5 = polar_split_rule<5>(f, crossing->center, crossing->radius, b, 0, gl5_x, gl5_w);
            double v3 = polar_split_rule<3>(f, crossing->center, crossing->radius, b, 0, gl3_x, gl3_w);
            out.value = v5;
            out.err = std::abs(v5 - v3);
            return out;
        }

        if (full && !crossing && n_patch_cross == 1) {
            // Cell inside the domain cut by a single patch rim: the patch part
            // is integrated separately, so integrate the outside only.
            double v5 = polar_split_rule<5>(f, patch_cross->sing.center, patch_cross->radius, b, 1,
                                            gl5_x, gl5_w);
            double v3 = polar_split_rule<3>(f, patch_cross->sing.center, patch_cross->radius, b, 1,
                                            gl3_x, gl3_w);
            out.value = v5;
            out.err = std::abs(v5 - v3);
            return out;
        }

        // Boundary-straddling cells with clean geometry: resolve a single
        // crossing domain curve at high order instead of midpoint refinement.
        if (!full && !crossing && !near_patch && patch_ov <= 0.0) {
            const Circle* circ = nullptr;
            bool keep_inside = true;
            int n_curves = 0;
            const Polygon* poly = nullptr;
            bool poly_is_hole = false;
            auto classify = [&](const BoundaryCurve& curve, bool is_hole) {
                if (const auto* cc = std::get_if<Circle>(&curve)) {
                    if (circle_crosses_box(cc->center, cc->radius, b)) {
                        circ = cc;
                        keep_inside = !is_hole;
                        ++n_curves;
                    }
                } else {
                    const auto& pp = std::get<Polygon>(curve);
                    double pov = polygon_box_overlap(pp, b);
                    if (pov > 0.0 && pov < b.area() * (1.0 - 1e-12)) {
                        poly = &pp;
                        poly_is_hole = is_hole;
                        ++n_curves;
                    }
                }
            };
            classify(d.outer(), false);
            for (const auto& h : d.holes()) classify(h, true);

            if (n_curves == 1 && circ != nullptr) {
                double v5 = polar_split_rule<5>(f, circ->center, circ->radius, b, keep_inside ? 2 : 1,
                                                gl5_x, gl5_w);
                double v3 = polar_split_rule<3>(f, circ->center, circ->radius, b, keep_inside ? 2 : 1,
                                                gl3_x, gl3_w);
                out.value = v5;
                out.err = std::abs(v5 - v3);
                return out;
            }
            if (n_curves == 1 && poly != nullptr) {
                std::vector<Point2> clipped = clip_polygon_to_box(*poly, b);
                auto [pv, pe] = polygon_region_rule(f, clipped);
                if (poly_is_hole) {
                    double v5 = tensor_rule<5>(f, b, gl5_x, gl5_w);
                    double v3 = tensor_rule<3>(f, b, gl3_x, gl3_w);
                    out.value = v5 - pv;
                    out.err = std::abs(v5 - v3) + pe;
                } else {
                    out.value = pv;
                    out.err = pe;
                }
                return out;
            }
        }

        // Straddling (domain boundary, patch rim, or jump circle).
        if (crossing) {
            double circle_ov = circle_box_overlap(Circle{crossing->center, crossing->radius}, b);
            double ov_in = std::min(ov, circle_ov);
            double ov_out = std::max(ov - ov_in, 0.0);
            // Bounds of the unresolved three-way overlap.
            double geo_err = ov_in - std::max(0.0, ov + circle_ov - b.area());

            Point2 c = b.center();
            double rc = dist(c, crossing->center);
            Vec2 u = rc > 0.0 ? (1.0 / rc) * (c - crossing->center) : Vec2{1.0, 0.0};
            double R = crossing->radius;
            double delta = 0.45 * b.diam();
            double r_in = std::max(R - 0.5 * delta, 0.25 * R);
            double r_out = R + 0.5 * delta;
            Point2 z_in = sample_point(crossing->center + r_in * u, b.diam());
            Point2 z_out = sample_point(crossing->center + r_out * u, b.diam());
            double f_in = f(z_in), f_out = f(z_out);

            // Variation probes on each side: radial and along-circle.
            double ang = delta / std::max(R, 1e-12);
            Vec2 u2{u.x * std::cos(ang) - u.y * std::sin(ang), u.x * std::sin(ang) + u.y * std::cos(ang)};
            double var_in =
                std::max(std::abs(f_in - f(sample_point(crossing->center + std::max(R - delta, 0.2 * R) * u, b.diam()))),
                         std::abs(f_in - f(sample_point(crossing->center + r_in * u2, b.diam()))));
            double var_out = std::max(std::abs(f_out - f(sample_point(crossing->center + (R + delta) * u, b.diam()))),
                                      std::abs(f_out - f(sample_point(crossing->center + r_out * u2, b.diam()))));

            out.value = ov_in * f_in + ov_out * f_out;
            out.err = ov_in * var_in + ov_out * var_out + geo_err * std::abs(f_in - f_out);
            return out;
        }

        Point2 z0 = sample_point(b.center(), b.diam());
        double fc = f(z0);
        out.value = ov * fc;
        double var = 0.0;
        for (Point2 corner : {Point2{b.x0, b.y0}, Point2{b.x1, b.y0}, Point2{b.x0, b.y1}, Point2{b.x1, b.y1}})
            var = std::max(var, std::abs(f(sample_point(corner, b.diam())) - fc));
        out.err = ov * var;
        if (b.diam() <= floor_diam) out.refinable = false;
        return out;
    }
};

}  // namespace

QuadResult integrate_over_domain(const std::function<double(Point2)>& f, const FieldInfo& info_in,
                                 const PlanarDomain& d, QuadOptions opts) {
    // Deduplicate structure hints (metric and weight catalogs often repeat),
    // and drop jump circles that coincide with a boundary circle or never
    // enter the domain: the jump then never materializes in the interior.
    auto jump_relevant = [&](const JumpCircle& j) {
        auto coincides = [&](const BoundaryCurve& c) {
            const auto* circ = std::get_if<Circle>(&c);
            return circ != nullptr && circ->center == j.center && circ->radius == j.radius;
        };
        if (coincides(d.outer())) return false;
        for (const auto& h : d.holes())
            if (coincides(h)) return false;
        for (int k = 0; k < 64; ++k) {
            double t = 2.0 * pi * k / 64.0;
            Point2 z = j.center + Point2{j.radius * std::cos(t), j.radius * std::sin(t)};
            if (d.locate(z) == Location::Inside) return true;
        }
        return false;
    };
    FieldInfo info;
    for (const auto& j : info_in.jump_circles) {
        if (!jump_relevant(j)) continue;
        bool seen = false;
        for (const auto& k : info.jump_circles)
            if (k.center == j.center && k.radius == j.radius) seen = true;
        if (!seen) info.jump_circles.push_back(j);
    }
    for (const auto& s : info_in.singular_points) {
        bool seen = false;
        for (const auto& t : info.singular_points)
            if (t.center == s.center) seen = true;
        if (!seen) info.singular_points.push_back(s);
    }

    // Build patches around singular points interior to the domain.
    std::vector<Patch> patches;
    std::vector<Singularity> interior;
    for (const auto& s : info.singular_points) {
        Location loc = d.locate(s.center);
        if (loc == Location::Boundary)
            throw numerical_rejection("quadrature: singular point on the integration boundary");
        if (loc == Location::Inside) interior.push_back(s);
    }
    for (const auto& s : interior) {
        double r = std::min(0.1, 0.25 * d.distance_to_boundary(s.center));
        for (const auto& t : interior)
            if (!(t.center == s.center)) r = std::min(r, 0.25 * dist(s.center, t.center));
        for (const auto& j : info.jump_circles) {
            double dj = std::abs(dist(s.center, j.center) - j.radius);
            if (dj > 0.0) r = std::min(r, 0.25 * dj);
        }
        if (!(r > 0.0)) throw numerical_rejection("quadrature: cannot build polar patch (degenerate geometry)");
        patches.push_back({s, r});
    }

    std::function<double(Point2)> f_dbg = f;
    if (std::getenv("SCM_QUAD_TRACE") != nullptr) {
        auto inner = f;
        f_dbg = [inner](Point2 z) {
            try {
                return inner(z);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "[quad] integrand threw at (%.17g, %.17g): %s\n", z.x, z.y, e.what());
                throw;
            }
        };
    }

    QuadResult result;
    result.singular_patches = static_cast<int>(patches.size());
    double patch_value = 0.0, patch_err = 0.0;
    for (const auto& p : patches) {
        auto [v, e] = patch_integral(f_dbg, p.sing, p.radius, std::min(opts.rel_tol, 1e-10));
        patch_value += v;
        patch_err += e;
    }

    Engine eng{f_dbg, d, patches, info.jump_circles, info.singular_points,
               opts.min_cell_factor * d.diameter()};

    struct QueueItem {
        double err;
        std::size_t index;
        bool operator<(const QueueItem& other) const {
            if (err != other.err) return err < other.err;
            return index > other.index;
        }
    };
    std::priority_queue<QueueItem> queue;
    std::vector<CellEval> leaves;  // refinement arena; split parents are marked dead
    std::vector<char> alive;
    // Running totals steer the refinement; the returned value is re-summed
    // exactly over the surviving leaves (fixed-order pairwise reduction).
    double total_value = 0.0, total_err = 0.0;
    long cells = 0;

    auto push = [&](const Box& b) {
        CellEval ce = eng.evaluate(b);
        ++cells;
        total_value += ce.value;
        total_err += ce.err;
        bool queueable = ce.refinable && ce.err > 0.0;
        leaves.push_back(std::move(ce));
        alive.push_back(1);
        if (queueable) queue.push({leaves.back().err, leaves.size() - 1});
    };

    // Slightly padded root so the domain boundary never coincides with the
    // root cell edges.
    Box root = d.bounding_box();
    double pad = 1e-9 * (1.0 + root.diam());
    root = {root.x0 - pad, root.y0 - pad, root.x1 + pad, root.y1 + pad};
    push(root);

    while (!queue.empty() && cells < opts.max_cells) {
        double target = std::max(opts.abs_floor, opts.rel_tol * std::abs(total_value + patch_value));
        if (total_err + patch_err <= target) break;
        QueueItem item = queue.top();
        queue.pop();
        Box b = leaves[item.index].box;
        if (b.diam() <= eng.floor_diam) continue;
        total_value -= leaves[item.index].value;
        total_err -= leaves[item.index].err;
        alive[item.index] = 0;
        double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);
        push({b.x0, b.y0, xm, ym});
        push({xm, b.y0, b.x1, ym});
        push({b.x0, ym, xm, b.y1});
        push({xm, ym, b.x1, b.y1});
    }

    // Exact pairwise reduction over surviving leaves.
    std::vector<double> vals, errs;
    vals.reserve(leaves.size());
    errs.reserve(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (!alive[i]) continue;
        vals.push_back(leaves[i].value);
        errs.push_back(leaves[i].err);
    }
    auto pairwise = [](std::vector<double> xs) {
        if (xs.empty()) return 0.0;
        while (xs.size() > 1) {
            std::size_t half = (xs.size() + 1) / 2;
            for (std::size_t i = 0; i + half < xs.size(); ++i) xs[i] += xs[i + half];
            xs.resize(half);
        }
        return xs[0];
    };
    result.value = pairwise(std::move(vals)) + patch_value;
    result.error_estimate = std::max(pairwise(std::move(errs)), 0.0) + patch_err;
    result.cells_used = cells;
    if (std::getenv("SCM_QUAD_DEBUG") != nullptr) {
        std::fprintf(stderr, "[quad] cells=%ld err=%.3e patch_err=%.3e queue=%zu\n", cells,
                     total_err, patch_err, queue.size());
        for (int k = 0; k < 10 && !queue.empty(); ++k) {
            const auto& it = queue.top();
            const CellEval& ce = leaves[it.index];
            std::fprintf(stderr, "  worst: err=%.3e box=[%.6f,%.6f]x[%.6f,%.6f] diam=%.3e val=%.6e\n",
                         it.err, ce.box.x0, ce.box.x1, ce.box.y0, ce.box.y1, ce.box.diam(), ce.value);
            queue.pop();
        }
    }
    return result;
}

QuadResult boundary_length(const MetricSpec& g, const PlanarDomain& d, double rel_tol) {
    const SignedAtomicMeasure metric_atoms = atoms_of(g);
    for (const auto& a : metric_atoms.atoms()) {
        if (d.distance_to_boundary(a.position) <= boundary_band)
            throw numerical_rejection("boundary_length: atom lies on the integration path");
    }
    QuadResult out;
    for (const auto& arc : d.boundary_arcs()) {
        auto integrand = [&](double t) {
            Point2 z = arc.position(t);
            return std::exp(0.5 * eval_rho(g, z)) * arc.speed(t);
        };
        double err = 0.0;
        out.value += GK::integrate(integrand, arc.t0, arc.t1, 15, rel_tol * 0.1, &err);
        out.error_estimate += err;
        ++out.cells_used;
    }
    return out;
}

QuadResult area(const MetricSpec& g, const PlanarDomain& d, QuadOptions opts) {
    const SignedAtomicMeasure metric_atoms = atoms_of(g);
    for (const auto& a : metric_atoms.atoms()) {
        if (a.weight >= 4.0 * pi && d.locate(a.position) == Location::Inside)
            throw numerical_rejection("area: cusp atom inside the domain; e^rho is not integrable");
    }
    MetricSpec metric = g;
    auto f = [metric](Point2 z) { return eval_conformal_factor(metric, z); };
    return integrate_over_domain(f, metric_field_info(g), d, opts);
}

QuadResult weighted_area(const MetricSpec& g, const PlanarDomain& d, const ScalarField& w,
                         QuadOptions opts) {
    const SignedAtomicMeasure metric_atoms = atoms_of(g);
    for (const auto& a : metric_atoms.atoms()) {
        if (a.weight >= 4.0 * pi && d.locate(a.position) == Location::Inside)
            throw numerical_rejection("weighted_area: cusp atom inside the domain");
    }
    FieldInfo info = w.info;
    // Metric atoms not covered by the weight's catalog keep their own
    // exponents (weight locally bounded there).
    FieldInfo metric_info = metric_field_info(g);
    for (const auto& s : metric_info.singular_points) {
        bool covered = false;
        for (const auto& t : info.singular_points)
            if (t.center == s.center) covered = true;
        if (!covered) info.singular_points.push_back(s);
    }
    for (const auto& j : metric_info.jump_circles) info.jump_circles.push_back(j);

    MetricSpec metric = g;
    auto weight = w.eval;
    auto f = [metric, weight](Point2 z) { return weight(z) * eval_conformal_factor(metric, z); };
    return integrate_over_domain(f, info, d, opts);
}

namespace {

double annulus_integral(const std::function<double(Point2)>& f, Point2 c, double r_lo, double r_hi) {
    // log-radius substitution; periodic trapezoid in theta with doubling.
    double s_lo = std::log(r_lo), s_hi = std::log(r_hi);
    double prev = 0.0, cur = 0.0;
    for (int M = 8;; M *= 2) {
        double sum = 0.0;
        for (int j = 0; j < M; ++j) {
            double theta = 2.0 * pi * j / M;
            Point2 dir{std::cos(theta), std::sin(theta)};
            auto integrand = [&](double s) {
                double r = std::exp(s);
                return f(c + r * dir) * r * r;
            };
            double err = 0.0;
            sum += GK::integrate(integrand, s_lo, s_hi, 12, 1e-11, &err);
        }
        cur = sum * 2.0 * pi / M;
        if (M > 8 && std::abs(cur - prev) <= std::max(1e-14, 1e-10 * std::abs(cur))) break;
        if (M >= 256) break;
        prev = cur;
    }
    return cur;
}

}  // namespace

std::vector<double> lp_probe_increments(const ScalarField& density, Point2 center, double p,
                                        const std::vector<double>& radii) {
    if (!(p >= 1.0)) throw config_error("lp_probe: p must be >= 1");
    if (radii.size() < 2) throw config_error("lp_probe: need at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]) || !(radii[i] > 0.0))
            throw config_error("lp_probe: radii must be strictly decreasing and positive");

    auto dens = density.eval;
    auto f = [dens, p](Point2 z) { return std::pow(std::abs(dens(z)), p); };
    std::vector<double> increments;
    increments.reserve(radii.size() - 1);
    for (std::size_t i = 1; i < radii.size(); ++i)
        increments.push_back(annulus_integral(f, center, radii[i], radii[i - 1]));
    return increments;
}

std::vector<double> lp_probe(const ScalarField& density, Point2 center, double p,
                             const std::vector<double>& radii) {
    std::vector<double> cumulative = lp_probe_increments(density, center, p, radii);
    for (std::size_t i = 1; i < cumulative.size(); ++i) cumulative[i] += cumulative[i - 1];
    return cumulative;
}

}  // namespace scm
