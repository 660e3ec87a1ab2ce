#include "qpf/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpf {

namespace {

constexpr double kPi = std::numbers::pi;

bool same(const PiecewiseLinearLift& a, const PiecewiseLinearLift& b) {
    return a.breakpoints == b.breakpoints && a.lift_values == b.lift_values && a.slopes == b.slopes &&
           a.degree == b.degree;
}

std::size_t piece_of(const PiecewiseLinearLift& p, double r) {
    auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), r);
    if (it == p.breakpoints.begin()) return 0;
    return static_cast<std::size_t>(it - p.breakpoints.begin()) - 1;
}

// Reduces t to r in [b0, b0+1) with t = r + n.
double reduce(const PiecewiseLinearLift& p, double t, double& n) {
    const double b0 = p.breakpoints.front();
    double u = t - b0;
    n = std::floor(u);
    double r = b0 + (u - n);
    if (r >= b0 + 1.0) {
        r = b0;
        n += 1.0;
    }
    return r;
}

double pl_lift(const PiecewiseLinearLift& p, double t) {
    double n;
    double r = reduce(p, t, n);
    std::size_t i = piece_of(p, r);
    return p.lift_values[i] + p.slopes[i] * (r - p.breakpoints[i]) + n * p.degree;
}

double pl_piece_end(const PiecewiseLinearLift& p, std::size_t i) {
    return i + 1 < p.breakpoints.size() ? p.breakpoints[i + 1] : p.breakpoints.front() + 1.0;
}

double pl_increment(const PiecewiseLinearLift& p, double t, double delta) {
    if (delta == 0.0) return 0.0;
    const std::size_t m = p.breakpoints.size();
    double n;
    double r = reduce(p, t, n);
    std::size_t i = piece_of(p, r);
    double acc = 0.0;
    if (delta > 0.0) {
        double whole = std::floor(delta);
        double rem = delta - whole;
        acc = whole * p.degree;
        while (rem > 0.0) {
            double e = pl_piece_end(p, i);
            double step = std::min(rem, e - r);
            acc += p.slopes[i] * step;
            rem -= step;
            if (rem <= 0.0) break;
            i = (i + 1) % m;
            r = (i == 0) ? p.breakpoints.front() : e;
        }
        return acc;
    }
    double mag = -delta;
    double whole = std::floor(mag);
    double rem = mag - whole;
    acc = whole * p.degree;
    while (rem > 0.0) {
        if (r <= p.breakpoints[i]) {
            if (i == 0) {
                i = m - 1;
                r = p.breakpoints.front() + 1.0;
            } else {
                --i;
            }
        }
        double step = std::min(rem, r - p.breakpoints[i]);
        acc += p.slopes[i] * step;
        rem -= step;
        r -= step;
    }
    return -acc;
}

double pl_inverse(const PiecewiseLinearLift& p, double v) {
    const double L0 = p.lift_values.front();
    double m = std::floor((v - L0) / p.degree);
    double w = v - m * p.degree;
    if (w < L0) {
        w += p.degree;
        m -= 1.0;
    } else if (w >= L0 + p.degree) {
        w -= p.degree;
        m += 1.0;
    }
    auto it = std::upper_bound(p.lift_values.begin(), p.lift_values.end(), w);
    std::size_t i = it == p.lift_values.begin() ? 0 : static_cast<std::size_t>(it - p.lift_values.begin()) - 1;
    return p.breakpoints[i] + (w - p.lift_values[i]) / p.slopes[i] + m;
}

double sine_lift(const SineLift& s, double t) {
    return s.degree * t + s.shift + s.amplitude * std::sin(2.0 * kPi * frac01(t));
}

double sine_increment(const SineLift& s, double t, double delta) {
    double r = frac01(t);
    return s.degree * delta + 2.0 * s.amplitude * std::cos(2.0 * kPi * r + kPi * delta) * std::sin(kPi * delta);
}

double sine_inverse(const SineLift& s, double v) {
    if (s.degree == 0) throw std::logic_error("inverse: constant map");
    const double k = s.degree;
    double t0 = (v - s.shift) / k;
    double spread = std::fabs(s.amplitude) / k + 1e-12 * (1.0 + std::fabs(t0));
    double lo = t0 - spread, hi = t0 + spread;
    double t = t0;
    for (int it = 0; it < 200; ++it) {
        double fv = sine_lift(s, t) - v;
        if (fv == 0.0) return t;
        if (fv > 0.0) hi = t; else lo = t;
        double d = k + 2.0 * kPi * s.amplitude * std::cos(2.0 * kPi * frac01(t));
        double tn = t - fv / d;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (tn == t || hi - lo <= 4e-16 * (1.0 + std::fabs(t))) return tn;
        t = tn;
    }
    return t;
}

// sin(pi t), cos(pi t) with exact argument reduction, so that half-integers
// give exact zeros.
void sincospi(double t, double& s, double& c) {
    const double n = std::nearbyint(t);
    double a = t - n;  // [-1/2, 1/2], exact
    const double sg = a < 0 ? -1.0 : 1.0;
    a = std::fabs(a);
    if (a <= 0.25) {
        s = std::sin(kPi * a);
        c = std::cos(kPi * a);
    } else {
        s = std::cos(kPi * (0.5 - a));
        c = std::sin(kPi * (0.5 - a));
    }
    s *= sg;
    if (std::fmod(n, 2.0) != 0.0) {
        s = -s;
        c = -c;
    }
}

double atan_lift(const ArctanLift& a, double t) {
    double n = std::nearbyint(t);
    double s, c;
    sincospi(t - n, s, c);
    return n + std::atan2(s, a.K2 * c) / kPi;
}

double atan_increment(const ArctanLift& a, double t, double delta) {
    double whole = std::trunc(delta);
    double rem = delta - whole;
    double r = t - std::nearbyint(t);
    double s0, c0, s1, c1, sr, cr;
    sincospi(r, s0, c0);
    sincospi(r + rem, s1, c1);
    sincospi(rem, sr, cr);
    double cross = a.K2 * sr;
    double dot = a.K2 * a.K2 * c0 * c1 + s0 * s1;
    return whole + std::atan2(cross, dot) / kPi;
}

double atan_derivative(const ArctanLift& a, double y) {
    double s, c;
    sincospi(y, s, c);
    return a.K2 / (a.K2 * a.K2 * c * c + s * s);
}

double atan_inverse(const ArctanLift& a, double v) {
    double n = std::nearbyint(v);
    double s, c;
    sincospi(v - n, s, c);
    return n + std::atan2(a.K2 * s, c) / kPi;
}

}  // namespace

bool operator==(const CircleMap& a, const CircleMap& b) {
    if (a.rep_.index() != b.rep_.index()) return false;
    if (auto p = std::get_if<PiecewiseLinearLift>(&a.rep_)) return same(*p, std::get<PiecewiseLinearLift>(b.rep_));
    if (auto s = std::get_if<SineLift>(&a.rep_)) {
        const auto& t = std::get<SineLift>(b.rep_);
        return s->degree == t.degree && s->shift == t.shift && s->amplitude == t.amplitude;
    }
    return std::get<ArctanLift>(a.rep_).K == std::get<ArctanLift>(b.rep_).K;
}

CircleMap CircleMap::piecewise_linear(std::vector<double> breakpoints, std::vector<double> lift_values,
                                      std::vector<double> slopes, int degree) {
    const std::size_t m = breakpoints.size();
    if (m == 0 || lift_values.size() != m || slopes.size() != m)
        throw std::invalid_argument("piecewise map: breakpoints, lift_values and slopes must have equal nonzero size");
    if (degree < 1) throw std::invalid_argument("piecewise map: degree must be positive");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(breakpoints[i] >= 0.0 && breakpoints[i] < 1.0))
            throw std::invalid_argument("piecewise map: breakpoint outside [0,1)");
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("piecewise map: breakpoints not strictly increasing");
        if (!(slopes[i] > 0.0) || !std::isfinite(slopes[i]))
            throw std::invalid_argument("piecewise map: slopes must be positive");
    }
    for (std::size_t i = 0; i < m; ++i) {
        double end = i + 1 < m ? breakpoints[i + 1] : breakpoints[0] + 1.0;
        double target = i + 1 < m ? lift_values[i + 1] : lift_values[0] + degree;
        double got = lift_values[i] + slopes[i] * (end - breakpoints[i]);
        if (std::fabs(got - target) > 1e-9 * (1.0 + std::fabs(target)))
            throw std::invalid_argument("piecewise map: lift not continuous or degree law violated");
    }
    PiecewiseLinearLift p;
    p.breakpoints = std::move(breakpoints);
    p.lift_values = std::move(lift_values);
    p.slopes = std::move(slopes);
    p.degree = degree;
    for (double s : p.slopes) p.log_slopes.push_back(std::log(s));
    return CircleMap(std::move(p));
}

CircleMap CircleMap::sine(int degree, double shift, double amplitude) {
    if (degree < 0) throw std::invalid_argument("sine map: degree must be non-negative");
    if (degree == 0 && amplitude != 0.0) throw std::invalid_argument("sine map: degree 0 only as a constant");
    if (degree > 0 && !(2.0 * kPi * std::fabs(amplitude) < degree))
        throw std::invalid_argument("sine map: amplitude breaks monotonicity");
    return CircleMap(SineLift{degree, shift, amplitude});
}

CircleMap CircleMap::projective_arctan(double K) {
    if (!(K > 1.0) || !std::isfinite(K)) throw std::invalid_argument("arctan map: K must exceed 1");
    return CircleMap(ArctanLift{K, K * K});
}

double CircleMap::lift(double t) const {
    return std::visit(
        [t](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, PiecewiseLinearLift>) return pl_lift(r, t);
            else if constexpr (std::is_same_v<R, SineLift>) return sine_lift(r, t);
            else return atan_lift(r, t);
        },
        rep_);
}

double CircleMap::lift_increment(double t, double delta) const {
    return std::visit(
        [t, delta](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, PiecewiseLinearLift>) return pl_increment(r, t, delta);
            else if constexpr (std::is_same_v<R, SineLift>) return sine_increment(r, t, delta);
            else return atan_increment(r, t, delta);
        },
        rep_);
}

double CircleMap::derivative(double y) const {
    return std::visit(
        [y](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, PiecewiseLinearLift>) {
                double n;
                return r.slopes[piece_of(r, reduce(r, y, n))];
            } else if constexpr (std::is_same_v<R, SineLift>) {
                return r.degree + 2.0 * kPi * r.amplitude * std::cos(2.0 * kPi * frac01(y));
            } else {
                return atan_derivative(r, y);
            }
        },
        rep_);
}

double CircleMap::log_derivative(double y) const {
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) {
        double n;
        return p->log_slopes[piece_of(*p, reduce(*p, y, n))];
    }
    return std::log(derivative(y));
}

double CircleMap::inverse_lift(double v) const {
    return std::visit(
        [v](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, PiecewiseLinearLift>) return pl_inverse(r, v);
            else if constexpr (std::is_same_v<R, SineLift>) return sine_inverse(r, v);
            else return atan_inverse(r, v);
        },
        rep_);
}

Angle CircleMap::inverse(Angle y) const {
    if (degree() != 1) throw std::logic_error("inverse: map degree is not 1");
    return Angle(inverse_lift(y.value()));
}

int CircleMap::piece_index(double y) const {
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) {
        double n;
        return static_cast<int>(piece_of(*p, reduce(*p, y, n)));
    }
    return -1;
}

int CircleMap::degree() const {
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) return p->degree;
    if (auto s = std::get_if<SineLift>(&rep_)) return s->degree;
    return 1;
}

double CircleMap::min_slope() const {
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) return *std::min_element(p->slopes.begin(), p->slopes.end());
    if (auto s = std::get_if<SineLift>(&rep_)) return s->degree - 2.0 * kPi * std::fabs(s->amplitude);
    return 1.0 / std::get<ArctanLift>(rep_).K2;
}

double CircleMap::max_slope() const {
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) return *std::max_element(p->slopes.begin(), p->slopes.end());
    if (auto s = std::get_if<SineLift>(&rep_)) return s->degree + 2.0 * kPi * std::fabs(s->amplitude);
    return std::get<ArctanLift>(rep_).K2;
}

std::vector<double> CircleMap::breakpoints() const {
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) return p->breakpoints;
    return {};
}

CircleMap CircleMap::multiplied(int factor) const {
    if (factor < 1) throw std::invalid_argument("multiplied: factor must be positive");
    if (auto p = std::get_if<PiecewiseLinearLift>(&rep_)) {
        auto lv = p->lift_values;
        auto sl = p->slopes;
        for (auto& v : lv) v *= factor;
        for (auto& s : sl) s *= factor;
        return piecewise_linear(p->breakpoints, lv, sl, p->degree * factor);
    }
    if (auto s = std::get_if<SineLift>(&rep_)) return sine(s->degree * factor, s->shift * factor, s->amplitude * factor);
    throw std::logic_error("multiplied: not supported for the arctan map");
}

std::string CircleMap::kind_name() const {
    switch (rep_.index()) {
        case 0: return "piecewise_linear";
        case 1: return "sine";
        default: return "projective_arctan";
    }
}

void to_json(nlohmann::json& j, const CircleMap& m) {
    if (auto p = std::get_if<PiecewiseLinearLift>(&m.rep())) {
        j = {{"kind", "piecewise_linear"},
             {"breakpoints", p->breakpoints},
             {"lift_values", p->lift_values},
             {"slopes", p->slopes},
             {"degree", p->degree}};
    } else if (auto s = std::get_if<SineLift>(&m.rep())) {
        j = {{"kind", "sine"}, {"degree", s->degree}, {"shift", s->shift}, {"amplitude", s->amplitude}};
    } else {
        j = {{"kind", "projective_arctan"}, {"K", std::get<ArctanLift>(m.rep()).K}};
    }
}

CircleMap circle_map_from_json(const nlohmann::json& j) {
    const std::string kind = j.value("kind", "piecewise_linear");
    if (kind == "piecewise_linear")
        return CircleMap::piecewise_linear(j.at("breakpoints").get<std::vector<double>>(),
                                           j.at("lift_values").get<std::vector<double>>(),
                                           j.at("slopes").get<std::vector<double>>(), j.at("degree").get<int>());
    if (kind == "sine")
        return CircleMap::sine(j.at("degree").get<int>(), j.at("shift").get<double>(), j.at("amplitude").get<double>());
    if (kind == "projective_arctan") return CircleMap::projective_arctan(j.at("K").get<double>());
    throw std::invalid_argument("circle map: unknown kind '" + kind + "'");
}

void MapParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(rho > 1.0)) throw std::invalid_argument("rho must exceed 1");
    if (!(kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
}

Example1Map make_example1_f(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("example1: eps must lie in (0, 1/2)");
    const double a = (2.0 * eps - eps * eps) / (4.0 - eps * eps);
    auto f = CircleMap::piecewise_linear({0.0, a}, {0.0, 2.0 * a / eps}, {2.0 / eps, eps / 2.0}, 1);
    return {f, ArcInterval(Angle(0.0), a), ArcInterval(Angle(a), 1.0 - a), a};
}

CircleMap make_affine_g(int k, double t) {
    if (k < 1) throw std::invalid_argument("affine map: k must be at least 1");
    return CircleMap::piecewise_linear({0.0}, {Angle(t).value()}, {static_cast<double>(k)}, k);
}

CircleMap make_constant(double c) { return CircleMap::sine(0, c, 0.0); }

CircleMap make_identity() { return make_affine_g(1, 0.0); }

CircleMap make_projective_arctan_f(double K) { return CircleMap::projective_arctan(K); }

CircleMap make_kkho_fiber(double eta) {
    if (!(2.0 * kPi * std::fabs(eta) < 1.0)) throw std::invalid_argument("kkho fiber: |eta|*2pi must be < 1");
    return CircleMap::sine(1, 0.0, eta);
}

A1Report verify_A1(const CircleMap& g, double kappa) {
    A1Report r;
    r.max_slope = g.max_slope();
    r.min_slope = g.min_slope();
    r.degree_ok = g.degree() == 2;
    r.easy_case = g.degree() == 1;
    if (!r.degree_ok) {
        r.reasons.push_back("degree " + std::to_string(g.degree()) + " != 2");
        if (r.easy_case) r.reasons.push_back("degree-1 easy case");
    }
    bool up = r.max_slope < kappa;
    bool down = r.min_slope > 1.0 / kappa;
    if (!up) r.reasons.push_back("max slope " + std::to_string(r.max_slope) + " >= kappa");
    if (!down) r.reasons.push_back("inverse slope " + std::to_string(1.0 / r.min_slope) + " >= kappa");
    r.pass = r.degree_ok && up && down;
    return r;
}

namespace {

struct Run {
    double start = 0.0;
    double length = 0.0;
};

// Longest cyclic run of pieces whose slope satisfies pred.
Run longest_pl_run(const PiecewiseLinearLift& p, auto pred) {
    const std::size_t m = p.slopes.size();
    Run best;
    bool all = true;
    for (std::size_t i = 0; i < m; ++i) all = all && pred(p.slopes[i]);
    if (all) return {p.breakpoints.front(), 1.0};
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t prev = (i + m - 1) % m;
        if (!pred(p.slopes[i]) || pred(p.slopes[prev])) continue;
        double len = 0.0;
        std::size_t j = i;
        while (pred(p.slopes[j])) {
            double e = pl_piece_end(p, j);
            len += e - p.breakpoints[j];
            j = (j + 1) % m;
        }
        if (len > best.length) best = {p.breakpoints[i], len};
    }
    return best;
}

// Longest cyclic run of {y : pred(f'(y))} located on a sample grid and
// refined by bisection at the class changes.
Run longest_sampled_run(const CircleMap& f, auto pred) {
    constexpr int N = 8192;
    std::vector<char> cls(N);
    for (int i = 0; i < N; ++i) cls[i] = pred(f.derivative(static_cast<double>(i) / N)) ? 1 : 0;
    bool all = std::all_of(cls.begin(), cls.end(), [](char c) { return c == 1; });
    if (all) return {0.0, 1.0};
    auto refine = [&](double lo, double hi, bool lo_in) {
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            bool in = pred(f.derivative(mid));
            if (in == lo_in) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    Run best;
    for (int i = 0; i < N; ++i) {
        int prev = (i + N - 1) % N;
        if (!cls[i] || cls[prev]) continue;
        int j = i;
        while (cls[j]) j = (j + 1) % N;
        double a_lo = static_cast<double>(i - 1) / N, a_hi = static_cast<double>(i) / N;
        double start = refine(a_lo, a_hi, false);
        double e_lo = static_cast<double>(j - 1) / N;
        double e_hi = static_cast<double>(j) / N;
        if (j < i) {
            e_lo += 1.0;
            e_hi += 1.0;
        }
        double end = refine(e_lo, e_hi, true);
        if (end - start > best.length) best = {start, end - start};
    }
    return best;
}

}  // namespace

A2Report verify_A2(const CircleMap& f, double eps, double rho) {
    A2Report r;
    if (f.degree() != 1) {
        r.reasons.push_back("fiber map degree is not 1");
        return r;
    }
    const double hi_bound = std::pow(eps, -rho);
    r.lipschitz_ok = f.max_slope() < hi_bound && f.min_slope() > 1.0 / hi_bound;
    if (!r.lipschitz_ok) r.reasons.push_back("bi-Lipschitz constant not below eps^-rho");

    auto low = [eps](double s) { return s < eps; };
    auto high = [eps](double s) { return s > 1.0 / eps; };
    Run b, a;
    if (auto p = std::get_if<PiecewiseLinearLift>(&f.rep())) {
        b = longest_pl_run(*p, low);
        a = longest_pl_run(*p, high);
    } else {
        b = longest_sampled_run(f, low);
        a = longest_sampled_run(f, high);
    }
    if (b.length <= 0.0) r.reasons.push_back("no arc with slope < eps");
    if (a.length <= 0.0) r.reasons.push_back("no arc with slope > 1/eps");
    if (b.length <= 0.0 || a.length <= 0.0) return r;

    r.witness_found = true;
    r.A = ArcInterval(Angle(a.start), a.length);
    r.B = ArcInterval(Angle(b.start), b.length);
    r.complement_B = 1.0 - b.length;
    r.image_outside_A = f.lift_increment(a.start + a.length, 1.0 - a.length);
    r.min_slope_on_A = std::min(f.derivative(a.start), f.derivative(a.start + 0.5 * a.length));
    r.max_slope_on_B = std::max(f.derivative(b.start), f.derivative(b.start + 0.5 * b.length));
    if (!(r.complement_B < eps)) r.reasons.push_back("|T \\ B| >= eps");
    if (!(r.image_outside_A < eps)) r.reasons.push_back("|f(T \\ A)| >= eps");
    r.pass = r.lipschitz_ok && r.complement_B < eps && r.image_outside_A < eps;
    return r;
}

}  // namespace qpf
