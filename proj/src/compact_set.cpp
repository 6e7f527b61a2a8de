#include "uslab/compact_set.hpp"

#include <numbers>

namespace uslab {

CompactSet CompactSet::interval(Rational a, Rational b, std::size_t density) {
    if (b < a) throw DomainError("interval endpoints out of order");
    CompactSet s;
    s.shape_ = Interval{std::move(a), std::move(b)};
    s.density_ = density;
    return s;
}

CompactSet CompactSet::disc(Complex center, double radius, std::size_t density) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw DomainError("disc radius must be finite and >= 0");
    CompactSet s;
    s.shape_ = Disc{center, radius};
    s.density_ = density;
    return s;
}

CompactSet CompactSet::points(std::vector<Complex> pts) {
    if (pts.empty()) throw DomainError("finite point set is empty");
    CompactSet s;
    s.density_ = pts.size();
    s.shape_ = FinitePoints{std::move(pts)};
    return s;
}

const Interval& CompactSet::as_interval() const {
    if (!is_interval()) throw DomainError("compact set is not an interval");
    return std::get<Interval>(shape_);
}
const Disc& CompactSet::as_disc() const {
    if (!is_disc()) throw DomainError("compact set is not a disc");
    return std::get<Disc>(shape_);
}
const FinitePoints& CompactSet::as_points() const {
    if (!is_points()) throw DomainError("compact set is not a finite point set");
    return std::get<FinitePoints>(shape_);
}

CompactSet CompactSet::with_density(std::size_t n) const {
    CompactSet s = *this;
    if (!is_points()) s.density_ = n;
    return s;
}

void CompactSet::validate(std::size_t min_density) const {
    if (is_points()) {
        if (as_points().points.empty()) throw DomainError("finite point set is empty");
        return;
    }
    if (density_ < min_density)
        throw DomainError("sample density " + std::to_string(density_) + " below the minimum " +
                          std::to_string(min_density));
}

std::vector<double> CompactSet::real_samples() const {
    const Interval& iv = as_interval();
    const double a = to_double(iv.a), b = to_double(iv.b);
    std::vector<double> xs(density_ + 1);
    for (std::size_t i = 0; i <= density_; ++i)
        xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(density_);
    xs.back() = b;
    return xs;
}

std::vector<Complex> CompactSet::samples() const {
    if (is_points()) return as_points().points;
    if (is_interval()) {
        std::vector<Complex> out;
        for (double x : real_samples()) out.emplace_back(x, 0.0);
        return out;
    }
    const Disc& d = as_disc();
    if (d.radius == 0.0) return {d.center};
    std::vector<Complex> out(density_);
    for (std::size_t i = 0; i < density_; ++i) {
        double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(density_);
        out[i] = d.center + std::polar(d.radius, t);
    }
    return out;
}

double CompactSet::max_distance_from(Complex c) const {
    if (is_interval()) {
        const Interval& iv = as_interval();
        return std::max(std::abs(Complex(to_double(iv.a), 0) - c), std::abs(Complex(to_double(iv.b), 0) - c));
    }
    if (is_disc()) {
        const Disc& d = as_disc();
        return std::abs(d.center - c) + d.radius;
    }
    double m = 0;
    for (const auto& z : as_points().points) m = std::max(m, std::abs(z - c));
    return m;
}

}  // namespace uslab
