#include "scm/measure.hpp"

#include <algorithm>
#include <cmath>

#include "scm/errors.hpp"

namespace scm {

SignedAtomicMeasure::SignedAtomicMeasure(std::vector<WeightedPoint> atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const WeightedPoint& a, const WeightedPoint& b) {
        if (a.position.x != b.position.x) return a.position.x < b.position.x;
        return a.position.y < b.position.y;
    });
    for (const auto& a : atoms) {
        if (!atoms_.empty() && atoms_.back().position == a.position) {
            atoms_.back().weight += a.weight;
        } else {
            atoms_.push_back(a);
        }
    }
    std::erase_if(atoms_, [](const WeightedPoint& a) { return a.weight == 0.0; });
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.weight) || !std::isfinite(a.position.x) || !std::isfinite(a.position.y))
            throw config_error("atomic measure: non-finite atom");
    }
}

double SignedAtomicMeasure::total_variation() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += std::abs(a.weight);
    return s;
}

double SignedAtomicMeasure::weight_at(Point2 x) const {
    for (const auto& a : atoms_)
        if (a.position == x) return a.weight;
    return 0.0;
}

double SignedAtomicMeasure::positive_mass_at(Point2 x) const { return std::max(weight_at(x), 0.0); }

SignedAtomicMeasure SignedAtomicMeasure::positive_part() const {
    std::vector<WeightedPoint> out;
    for (const auto& a : atoms_)
        if (a.weight > 0.0) out.push_back(a);
    return SignedAtomicMeasure(std::move(out));
}

SignedAtomicMeasure SignedAtomicMeasure::negative_part() const {
    std::vector<WeightedPoint> out;
    for (const auto& a : atoms_)
        if (a.weight < 0.0) out.push_back({a.position, -a.weight});
    return SignedAtomicMeasure(std::move(out));
}

SignedAtomicMeasure operator+(const SignedAtomicMeasure& a, const SignedAtomicMeasure& b) {
    std::vector<WeightedPoint> all = a.atoms();
    all.insert(all.end(), b.atoms().begin(), b.atoms().end());
    return SignedAtomicMeasure(std::move(all));
}

std::pair<SignedAtomicMeasure, SignedAtomicMeasure> jordan_decompose(const SignedAtomicMeasure& m) {
    return {m.positive_part(), m.negative_part()};
}

SingularSet singular_set(const SignedAtomicMeasure& m, double threshold) {
    if (!(threshold > 0.0)) throw config_error("singular_set: threshold must be positive");
    SingularSet s;
    s.threshold = threshold;
    for (const auto& a : m.atoms())
        if (a.weight >= threshold) s.points.push_back(a.position);
    return s;
}

bool assert_no_cusps(const SignedAtomicMeasure& m) {
    for (const auto& a : m.atoms())
        if (a.weight >= 4.0 * pi) return false;
    return true;
}

double critical_exponent(const SignedAtomicMeasure& m, Point2 x) {
    double w = m.positive_mass_at(x);
    if (w <= 0.0) return std::numeric_limits<double>::infinity();
    return 4.0 * pi / w;
}

}  // namespace scm
