#pragma once
// Compact sets with fixed deterministic sampling for sup norms.

#include "uslab/scalar.hpp"

#include <variant>
#include <vector>

namespace uslab {

inline constexpr std::size_t kDefaultSampleDensity = 512;
inline constexpr std::size_t kVerificationFactor = 4;

struct Interval {
    Rational a, b;  // a <= b
};
struct Disc {
    Complex center;
    double radius = 0.0;
};
struct FinitePoints {
    std::vector<Complex> points;
};

class CompactSet {
public:
    CompactSet() : shape_(FinitePoints{}) {}
    static CompactSet interval(Rational a, Rational b, std::size_t density = kDefaultSampleDensity);
    static CompactSet disc(Complex center, double radius, std::size_t density = kDefaultSampleDensity);
    static CompactSet points(std::vector<Complex> pts);

    bool is_interval() const { return shape_.index() == 0; }
    bool is_disc() const { return shape_.index() == 1; }
    bool is_points() const { return shape_.index() == 2; }
    const Interval& as_interval() const;
    const Disc& as_disc() const;
    const FinitePoints& as_points() const;

    std::size_t density() const { return density_; }
    CompactSet with_density(std::size_t n) const;
    // Same shape sampled kVerificationFactor times more densely.
    CompactSet refined() const { return with_density(density_ * kVerificationFactor); }

    // Throws DomainError when the density is below the configured minimum or the shape is degenerate.
    void validate(std::size_t min_density = kDefaultSampleDensity) const;

    // Interval: density+1 equispaced points including both ends.
    // Disc: density boundary points at angles 2*pi*i/density (the center when radius is 0).
    std::vector<Complex> samples() const;
    // Real sample abscissae; intervals only.
    std::vector<double> real_samples() const;

    // Largest |z - c| over the set (from the shape, not the samples).
    double max_distance_from(Complex c) const;

private:
    std::variant<Interval, Disc, FinitePoints> shape_;
    std::size_t density_ = kDefaultSampleDensity;
};

}  // namespace uslab
