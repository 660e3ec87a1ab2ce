#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpf/angle.hpp"
#include "qpf/circle_map.hpp"
#include "qpf/skew_product.hpp"

namespace qpf {

// Raised when a map fails one of the structural hypotheses a construction
// depends on.
class AssumptionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CriticalSets {
    double eps = 0.0;
    ArcInterval A;   // contracting hole, |A| < eps
    ArcInterval A1;  // A padded by eps
    ArcInterval A2;  // A padded by eps/2
    ArcInterval B;
    ArcInterval R;   // f(T \ A)
    Angle beta;      // right end of A plus eps/4
};

CriticalSets build_critical_sets(const CircleMap& f, double eps, const ArcInterval& A, const ArcInterval& B);
// Uses the witness arcs of verify_A2; throws AssumptionFailure if it fails.
CriticalSets build_critical_sets(const CircleMap& f, double eps, double rho);

class StripSection {
public:
    StripSection(const SkewProductMap& T, const ArcInterval& R) : T_(&T), R_(R) {}
    ArcInterval section(Angle x) const;
    bool contains(Angle x, Angle y, double tol = 1e-12) const;

private:
    const SkewProductMap* T_;
    ArcInterval R_;
};

// {x : (R + g(x)) meets A'}; one component per unit of degree when they do
// not overlap.
ArcSet compute_I0(const SkewProductMap& T, const CriticalSets& sets);

struct Resonance {
    std::int64_t nu = 0;
    ArcInterval I1;  // labelled so that I1 meets I2 - nu omega
    ArcInterval I2;
    ArcInterval J;   // I1 union (I2 - nu omega)
};

std::optional<Resonance> detect_resonance(const ArcSet& I, double omega, std::int64_t nu_max);

// A curve sampled on a common grid, in lift coordinates.
struct SampledCurve {
    std::vector<double> x;
    std::vector<double> lift;
};

SampledCurve sample_curve(const std::function<double(double)>& lift, double lo, double hi, std::size_t n);

struct OvertakeResult {
    std::vector<double> crossings;  // lift difference increases through an integer
    std::size_t reverse_crossings = 0;
    bool tangential = false;
};

OvertakeResult overtake_points(const SampledCurve& psi, const SampledCurve& phi, double tol = 1e-12);

// Parameter intervals [lo, hi] where an increasing lift curve lies in
// target (closed), refined by bisection to full precision.
struct PreimageIntervals {
    std::vector<std::pair<double, double>> intervals;
    bool touches_lo = false;
    bool touches_hi = false;
};

PreimageIntervals preimage_intervals(const std::function<double(double)>& lift, double lo, double hi,
                                     const ArcInterval& target);

// Same on a sampled monotone curve (linear interpolation between samples).
// Throws std::invalid_argument on non-monotone samples.
ArcSet preimage_components(const SampledCurve& curve, const ArcInterval& target);

}  // namespace qpf
