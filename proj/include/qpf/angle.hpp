#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace qpf {

// A point of R/Z stored as its representative in [0,1).
class Angle {
public:
    constexpr Angle() = default;
    // Wraps t into [0,1). Throws std::domain_error for non-finite t.
    explicit Angle(double t);

    constexpr double value() const { return v_; }
    constexpr operator double() const { return v_; }

    friend constexpr bool operator==(Angle a, Angle b) { return a.v_ == b.v_; }

private:
    double v_ = 0.0;
};

Angle wrap(double t);

// Fractional part in [0,1) without validation; used in hot loops.
inline double frac01(double t) {
    double r = t - std::floor(t);
    return r >= 1.0 ? 0.0 : r;
}

double circle_dist(Angle a, Angle b);

// Signed offset (b - a) reduced to [0,1).
double forward_gap(Angle a, Angle b);

// x + k*omega with the product error folded back in, so that large k keeps
// near full absolute precision.
Angle rotate(Angle x, std::int64_t k, double omega);

// dist(k*omega, Z) with the same compensation.
double dist_to_int(std::int64_t k, double omega);

// Positively oriented closed arc [start, start+length].
struct ArcInterval {
    Angle start;
    double length = 0.0;

    ArcInterval() = default;
    ArcInterval(Angle s, double len);
    static ArcInterval from_lift(double lo, double hi);

    Angle end() const;
    double mid() const;
    bool contains(Angle y) const;
    bool contains_open(Angle y) const;
    ArcInterval translated(double shift) const;
    ArcInterval translated(std::int64_t k, double omega) const;
    // Grows the arc by pad on both sides (length clamped to 1).
    ArcInterval padded(double pad) const;
    // Arc with the same midpoint and length scaled by factor.
    ArcInterval scaled(double factor) const;
};

ArcInterval arc_between(Angle y, Angle eta);

bool arcs_intersect(const ArcInterval& a, const ArcInterval& b);
// Distance between closed arcs; 0 when they meet.
double arc_distance(const ArcInterval& a, const ArcInterval& b);
// Union of two intersecting arcs. Empty when disjoint.
std::optional<ArcInterval> arc_hull(const ArcInterval& a, const ArcInterval& b);
// a contains b (closed).
bool arc_contains(const ArcInterval& a, const ArcInterval& b, double tol = 0.0);

class ArcSet {
public:
    ArcSet() = default;
    // Merges overlapping pieces and orders components by start.
    explicit ArcSet(std::vector<ArcInterval> arcs);

    const std::vector<ArcInterval>& components() const { return comps_; }
    std::size_t size() const { return comps_.size(); }
    bool empty() const { return comps_.empty(); }
    const ArcInterval& operator[](std::size_t i) const { return comps_[i]; }

    double measure() const;
    bool contains(Angle y) const;
    bool intersects(const ArcInterval& a) const;
    bool intersects(const ArcSet& other) const;
    double distance(const ArcSet& other) const;
    ArcSet translated(std::int64_t k, double omega) const;
    ArcSet padded(double pad) const;
    double min_length() const;
    double max_length() const;

private:
    std::vector<ArcInterval> comps_;
};

}  // namespace qpf
