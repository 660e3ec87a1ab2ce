#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qpf/angle.hpp"
#include "qpf/circle_map.hpp"

namespace qpf {

struct TorusPoint {
    Angle x;
    Angle y;
};

class SkewProductMap {
public:
    SkewProductMap(double omega, CircleMap g, CircleMap f);

    double omega() const { return omega_; }
    const CircleMap& g() const { return g_; }
    const CircleMap& f() const { return f_; }

    TorusPoint step(TorusPoint p) const {
        return {Angle(p.x.value() + omega_), Angle(g_.lift(p.x.value()) + f_.lift(p.y.value()))};
    }
    TorusPoint step_back(TorusPoint p) const;

private:
    double omega_;
    CircleMap g_;
    CircleMap f_;
};

struct RecordFlags {
    bool points = true;
    bool log_derivs = true;
};

struct OrbitRecord {
    std::vector<TorusPoint> points;
    std::vector<double> log_derivs;
    std::int64_t length = 0;  // number of steps taken
    TorusPoint last;
};

// n >= 0 steps forward, n < 0 steps backward; records n+1 states.
OrbitRecord iterate(const SkewProductMap& T, TorusPoint p, std::int64_t n, RecordFlags flags = {});

// Calls visit(k, point) for k = 0..n without storing anything.
template <class Visitor>
TorusPoint for_each_orbit_point(const SkewProductMap& T, TorusPoint p, std::int64_t n, Visitor&& visit) {
    for (std::int64_t k = 0; k < n; ++k) {
        visit(k, p);
        p = T.step(p);
    }
    visit(n, p);
    return p;
}

double fiber_derivative_log_product(const SkewProductMap& T, Angle x, Angle y, std::int64_t l, std::int64_t k);

double lyapunov_estimate(const SkewProductMap& T, TorusPoint p, std::int64_t n);

// Finite-n average plus the largest average over trailing windows, a
// stand-in for the limsup.
struct LyapunovProfile {
    double mean = 0.0;
    double tail_max = 0.0;
    std::int64_t n = 0;
    std::int64_t window = 0;
};

LyapunovProfile lyapunov_profile(const SkewProductMap& T, TorusPoint p, std::int64_t n, int windows = 10);

// A curve x -> y0(x) over a base interval, given by its lift and derivative.
struct LiftCurve {
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> lift;
    std::function<double(double)> derivative;
};

struct CurveDerivative {
    double value = 0.0;
    double log_value = 0.0;
    bool breakpoint_collision = false;
};

// Derivative of x -> pi_2 T^n(x, y0(x)).
CurveDerivative curve_derivative(const SkewProductMap& T, const LiftCurve& y0, double x, std::int64_t n);

struct CurveIncrement {
    double delta = 0.0;
    bool crossed = false;  // the two trajectories straddle a breakpoint
};

// Lift difference pi_2 T^n(x+h, y0(x+h)) - pi_2 T^n(x, y0(x)), tracked by
// exact increments so that nearby x keep their separation.
CurveIncrement iterated_curve_difference(const SkewProductMap& T, const LiftCurve& y0, double x, double h,
                                         std::int64_t n);

struct FiniteDifference {
    double value = 0.0;
    bool crossed = false;
};

FiniteDifference centered_difference(const SkewProductMap& T, const LiftCurve& y0, double x, double h,
                                     std::int64_t n);

ArcInterval arc_image(const SkewProductMap& T, Angle x, const ArcInterval& Y);

}  // namespace qpf
