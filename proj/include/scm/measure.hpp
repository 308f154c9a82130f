#pragma once

#include <vector>
#include <limits>
#include <utility>

#include "scm/geometry.hpp"

namespace scm {

struct WeightedPoint {
    Point2 position;
    double weight = 0.0;  // plain real; angle-measure units (multiples of pi are typical)
};

// Finite signed atomic measure on the plane. Atoms at exactly coincident
// coordinates are merged on construction and zero-weight atoms dropped, so the
// stored list is canonical: distinct supports, nonzero weights, sorted by
// (x, y) for reproducible iteration order.
//
// Merging uses exact coordinate equality; callers must canonicalize coincident
// atoms produced by arithmetic themselves.
class SignedAtomicMeasure {
  public:
    SignedAtomicMeasure() = default;
    explicit SignedAtomicMeasure(std::vector<WeightedPoint> atoms);

    const std::vector<WeightedPoint>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    double total_variation() const;
    // Weight of the atom exactly at x, 0 if none.
    double weight_at(Point2 x) const;
    // max(weight_at(x), 0): the omega_+ mass of the single point {x}.
    double positive_mass_at(Point2 x) const;

    SignedAtomicMeasure positive_part() const;
    SignedAtomicMeasure negative_part() const;

    // Sum of positive weights at atoms for which `inside` holds.
    template <typename Pred>
    double positive_mass_where(Pred&& inside) const {
        double s = 0.0;
        for (const auto& a : atoms_)
            if (a.weight > 0.0 && inside(a.position)) s += a.weight;
        return s;
    }
    template <typename Pred>
    double mass_where(Pred&& inside) const {
        double s = 0.0;
        for (const auto& a : atoms_)
            if (inside(a.position)) s += a.weight;
        return s;
    }

    friend SignedAtomicMeasure operator+(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b);

  private:
    std::vector<WeightedPoint> atoms_;
};

// Points carrying positive mass >= threshold.
struct SingularSet {
    std::vector<Point2> points;
    double threshold = 2.0 * pi;

    bool contains(Point2 p) const {
        for (const auto& q : points)
            if (q == p) return true;
        return false;
    }
};

// Splits m into (positive, negative), both nonnegative with disjoint supports;
// positive - negative reconstructs m exactly on the stored weights.
std::pair<SignedAtomicMeasure, SignedAtomicMeasure> jordan_decompose(const SignedAtomicMeasure& m);

// Atoms of the positive part with weight >= threshold. threshold must be > 0.
SingularSet singular_set(const SignedAtomicMeasure& m, double threshold = 2.0 * pi);

// True iff every positive atom has weight < 4*pi (strict).
bool assert_no_cusps(const SignedAtomicMeasure& m);

// Local integrability threshold of e^{f_+} near x under the kernel
// (1/2pi) log(1/|z-y|): p*(x) = 4pi / omega_+({x}) for a positive atom,
// +infinity otherwise. p* > 2 iff x is outside S_{2pi}; p* > 1 iff x is not a
// cusp.
double critical_exponent(const SignedAtomicMeasure& m, Point2 x);

}  // namespace scm
