#include "qpf/skew_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpf {

namespace {

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

bool near_breakpoint(const CircleMap& m, double y, double tol) {
    for (double b : m.breakpoints())
        if (circle_dist(Angle(y), Angle(b)) < tol) return true;
    return false;
}

bool straddles(const CircleMap& m, double y, double delta) {
    if (!m.is_piecewise_linear()) return false;
    if (std::fabs(delta) >= 1.0) return true;
    return m.piece_index(y) != m.piece_index(y + delta) || near_breakpoint(m, y, 0.0);
}

}  // namespace

SkewProductMap::SkewProductMap(double omega, CircleMap g, CircleMap f)
    : omega_(Angle(omega).value()), g_(std::move(g)), f_(std::move(f)) {
    if (f_.degree() != 1) throw std::invalid_argument("skew product: fiber map must have degree 1");
}

TorusPoint SkewProductMap::step_back(TorusPoint p) const {
    Angle xb(p.x.value() - omega_);
    return {xb, Angle(f_.inverse_lift(p.y.value() - g_.lift(xb.value())))};
}

OrbitRecord iterate(const SkewProductMap& T, TorusPoint p, std::int64_t n, RecordFlags flags) {
    OrbitRecord rec;
    const std::int64_t steps = n < 0 ? -n : n;
    rec.length = steps;
    try {
        if (flags.points) rec.points.reserve(static_cast<std::size_t>(steps) + 1);
        if (flags.log_derivs) rec.log_derivs.reserve(static_cast<std::size_t>(steps) + 1);
    } catch (const std::length_error&) {
        throw std::length_error("iterate: orbit record exceeds allocation limits");
    }
    for (std::int64_t k = 0;; ++k) {
        if (flags.points) rec.points.push_back(p);
        if (flags.log_derivs) rec.log_derivs.push_back(T.f().log_derivative(p.y.value()));
        if (k == steps) break;
        p = n >= 0 ? T.step(p) : T.step_back(p);
    }
    rec.last = p;
    return rec;
}

double fiber_derivative_log_product(const SkewProductMap& T, Angle x, Angle y, std::int64_t l, std::int64_t k) {
    if (l < 0 || k < l) throw std::invalid_argument("fiber_derivative_log_product: need 0 <= l <= k");
    TorusPoint p{x, y};
    double s = 0.0;
    for (std::int64_t j = 0; j <= k; ++j) {
        if (j >= l) s += T.f().log_derivative(p.y.value());
        if (j < k) p = T.step(p);
    }
    return s;
}

double lyapunov_estimate(const SkewProductMap& T, TorusPoint p, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("lyapunov_estimate: n must be positive");
    double s = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        s += T.f().log_derivative(p.y.value());
        p = T.step(p);
    }
    return s / static_cast<double>(n);
}

LyapunovProfile lyapunov_profile(const SkewProductMap& T, TorusPoint p, std::int64_t n, int windows) {
    if (n < 1) throw std::invalid_argument("lyapunov_profile: n must be positive");
    windows = std::max(1, windows);
    LyapunovProfile out;
    out.n = n;
    out.window = std::max<std::int64_t>(1, n / windows);
    out.tail_max = -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        s += T.f().log_derivative(p.y.value());
        p = T.step(p);
        std::int64_t m = k + 1;
        if (2 * m >= n && (m % out.window == 0 || m == n)) out.tail_max = std::max(out.tail_max, s / m);
    }
    out.mean = s / static_cast<double>(n);
    return out;
}

CurveDerivative curve_derivative(const SkewProductMap& T, const LiftCurve& y0, double x, std::int64_t n) {
    CurveDerivative out;
    double d0 = y0.derivative ? y0.derivative(x) : 0.0;
    double logD = d0 > 0.0 ? std::log(d0) : -std::numeric_limits<double>::infinity();
    double xs = frac01(x);
    double y = frac01(y0.lift(x));
    const double tol = 1e-9;
    for (std::int64_t k = 0; k < n; ++k) {
        if (near_breakpoint(T.g(), xs, tol) || near_breakpoint(T.f(), y, tol)) out.breakpoint_collision = true;
        logD = log_add(T.g().log_derivative(xs), T.f().log_derivative(y) + logD);
        y = frac01(T.g().lift(xs) + T.f().lift(y));
        xs = frac01(xs + T.omega());
    }
    out.log_value = logD;
    out.value = std::exp(logD);
    return out;
}

CurveIncrement iterated_curve_difference(const SkewProductMap& T, const LiftCurve& y0, double x, double h,
                                         std::int64_t n) {
    CurveIncrement out;
    double xs = frac01(x);
    double base = y0.lift(x);
    double y = frac01(base);
    double delta = y0.lift(x + h) - base;
    for (std::int64_t k = 0; k < n; ++k) {
        if (straddles(T.g(), xs, h) || straddles(T.f(), y, delta)) out.crossed = true;
        delta = T.g().lift_increment(xs, h) + T.f().lift_increment(y, delta);
        y = frac01(T.g().lift(xs) + T.f().lift(y));
        xs = frac01(xs + T.omega());
    }
    out.delta = delta;
    return out;
}

FiniteDifference centered_difference(const SkewProductMap& T, const LiftCurve& y0, double x, double h,
                                     std::int64_t n) {
    auto up = iterated_curve_difference(T, y0, x, h, n);
    auto down = iterated_curve_difference(T, y0, x, -h, n);
    return {(up.delta - down.delta) / (2.0 * h), up.crossed || down.crossed};
}

ArcInterval arc_image(const SkewProductMap& T, Angle x, const ArcInterval& Y) {
    Angle s(T.g().lift(x.value()) + T.f().lift(Y.start.value()));
    if (Y.length >= 1.0) return ArcInterval(Angle(), 1.0);
    return ArcInterval(s, T.f().lift_increment(Y.start.value(), Y.length));
}

}  // namespace qpf
