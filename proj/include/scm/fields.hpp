#pragma once

#include <functional>
#include <vector>

#include "scm/geometry.hpp"

namespace scm {

// Structure hints attached to an integrand so the quadrature engine can place
// polar patches and resolve known discontinuity circles exactly.
//
// Power: the integrand behaves like |z-c|^{-exponent} * (bounded) near c.
// InvLog: the integrand behaves like |z-c|^{-2} * (1 - log|z-c|)^{-exponent}
//         with exponent >= 2 (borderline-integrable logarithmic type).
struct Singularity {
    enum class Kind { Power, InvLog };
    Point2 center;
    Kind kind = Kind::Power;
    double exponent = 0.0;
};

// The integrand jumps (or kinks) across this circle.
struct JumpCircle {
    Point2 center;
    double radius = 1.0;
};

struct FieldInfo {
    std::vector<Singularity> singular_points;
    std::vector<JumpCircle> jump_circles;

    FieldInfo merged_with(const FieldInfo& other) const {
        FieldInfo out = *this;
        out.singular_points.insert(out.singular_points.end(), other.singular_points.begin(),
                                   other.singular_points.end());
        out.jump_circles.insert(out.jump_circles.end(), other.jump_circles.begin(),
                                other.jump_circles.end());
        return out;
    }
};

// A pointwise-evaluable scalar function with structure hints. For fields used
// as weighted-area weights, `info.singular_points` describes the local
// behaviour of the *product* weight * e^rho (the engine integrates that
// product); metric atoms not listed here keep their own power behaviour with
// the weight assumed locally bounded.
struct ScalarField {
    std::function<double(Point2)> eval;
    std::function<double(Point2)> laplacian;  // optional analytic Laplacian
    FieldInfo info;

    double operator()(Point2 z) const { return eval(z); }
    explicit operator bool() const { return static_cast<bool>(eval); }
};

inline ScalarField constant_field(double value) {
    ScalarField f;
    f.eval = [value](Point2) { return value; };
    f.laplacian = [](Point2) { return 0.0; };
    return f;
}

}  // namespace scm
