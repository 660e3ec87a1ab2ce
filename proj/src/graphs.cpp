#include "qpf/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpf {

std::vector<Angle> uniform_grid(std::size_t n) {
    std::vector<Angle> g;
    g.reserve(n);
    for (std::size_t i = 0; i < n; ++i) g.emplace_back(static_cast<double>(i) / static_cast<double>(n));
    return g;
}

Angle pullback_forward(const SkewProductMap& T, Angle x, std::int64_t depth, Angle seed, double* contraction_log) {
    const double omega = T.omega();
    double y = seed.value();
    double acc = 0.0;
    for (std::int64_t k = 0; k < depth; ++k) {
        if (k >= 1) acc += T.f().log_derivative(y);
        double xk = rotate(x, k - depth, omega).value();
        y = frac01(T.g().lift(xk) + T.f().lift(y));
    }
    if (contraction_log) *contraction_log = acc;
    return Angle(y);
}

Angle pullback_backward(const SkewProductMap& T, Angle x, std::int64_t depth, Angle seed, double* contraction_log) {
    const double omega = T.omega();
    double y = seed.value();
    double acc = 0.0;
    for (std::int64_t k = 0; k < depth; ++k) {
        double xb = rotate(x, depth - k - 1, omega).value();
        y = frac01(T.f().inverse_lift(y - T.g().lift(xb)));
        if (k >= 1) acc -= T.f().log_derivative(y);
    }
    if (contraction_log) *contraction_log = acc;
    return Angle(y);
}

namespace {

bool median_contracting(std::vector<double> logs) {
    if (logs.empty()) return false;
    std::nth_element(logs.begin(), logs.begin() + logs.size() / 2, logs.end());
    return logs[logs.size() / 2] < -1.0;
}

}  // namespace

GraphEstimate estimate_attractor(const SkewProductMap& T, const std::vector<Angle>& grid, std::int64_t depth,
                                 Angle seed) {
    if (depth < 1) throw std::invalid_argument("estimate_attractor: depth must be positive");
    GraphEstimate ge;
    ge.grid = grid;
    ge.depth = depth;
    for (Angle x : grid) {
        double c = 0.0;
        Angle u = pullback_forward(T, x, depth, seed, &c);
        Angle ahead = pullback_forward(T, Angle(x.value() + T.omega()), depth, seed);
        ge.values.push_back(u);
        ge.contraction_log.push_back(c);
        ge.residuals.push_back(circle_dist(ahead, T.step({x, u}).y));
    }
    ge.contracting = median_contracting(ge.contraction_log);
    return ge;
}

GraphEstimate estimate_repeller(const SkewProductMap& T, const std::vector<Angle>& grid, std::int64_t depth,
                                Angle seed) {
    if (depth < 1) throw std::invalid_argument("estimate_repeller: depth must be positive");
    GraphEstimate ge;
    ge.grid = grid;
    ge.depth = depth;
    for (Angle x : grid) {
        double c = 0.0;
        Angle s = pullback_backward(T, x, depth, seed, &c);
        Angle behind = pullback_backward(T, Angle(x.value() - T.omega()), depth, seed);
        ge.values.push_back(s);
        ge.contraction_log.push_back(c);
        ge.residuals.push_back(circle_dist(behind, T.step_back({x, s}).y));
    }
    ge.contracting = median_contracting(ge.contraction_log);
    return ge;
}

AttractionFit attraction_rate(const SkewProductMap& T, TorusPoint p, std::int64_t n, std::int64_t depth,
                              Angle u_seed, Angle s_seed) {
    AttractionFit fit;
    Angle s0 = pullback_backward(T, p.x, depth, s_seed);
    Angle s_prev = pullback_backward(T, Angle(p.x.value() - T.omega()), depth, s_seed);
    double s_res = circle_dist(s_prev, T.step_back({p.x, s0}).y);
    if (circle_dist(p.y, s0) <= 10.0 * std::max(s_res, 1e-15)) {
        fit.flagged = true;
        return fit;
    }
    std::vector<double> ks, ls;
    TorusPoint q = p;
    for (std::int64_t k = 0; k <= n; ++k) {
        Angle u = pullback_forward(T, q.x, depth, u_seed);
        double d = circle_dist(q.y, u);
        if (!(d > 1e-13)) break;
        ks.push_back(static_cast<double>(k));
        ls.push_back(std::log(d));
        q = T.step(q);
    }
    fit.points = ks.size();
    if (ks.size() < 3) {
        fit.flagged = true;
        return fit;
    }
    double mk = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mk += ks[i];
        ml += ls[i];
    }
    mk /= ks.size();
    ml /= ks.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sxy += (ks[i] - mk) * (ls[i] - ml);
        sxx += (ks[i] - mk) * (ks[i] - mk);
    }
    fit.slope = sxy / sxx;
    fit.intercept = ml - fit.slope * mk;
    if (fit.slope > -0.1) fit.flagged = true;
    return fit;
}

AttractionReport summarize_attraction(const std::vector<AttractionFit>& fits, double eps, double tolerance) {
    AttractionReport r;
    r.bound = 0.5 * std::log(eps);
    r.tolerance = tolerance;
    for (const auto& f : fits)
        if (f.points >= 3) r.slopes.push_back(f.slope);
    if (r.slopes.empty()) return r;
    std::vector<double> s = r.slopes;
    std::sort(s.begin(), s.end());
    std::size_t m = s.size();
    r.median = m % 2 ? s[m / 2] : 0.5 * (s[m / 2 - 1] + s[m / 2]);
    r.pass = r.median <= r.bound + tolerance;
    return r;
}

Observable parse_observable(const std::string& name) {
    if (name == "one") return Observable::One;
    if (name == "cos_x") return Observable::CosX;
    if (name == "sin_y") return Observable::SinY;
    if (name == "cos_x_plus_y") return Observable::CosXPlusY;
    if (name == "log_fprime") return Observable::LogFPrime;
    throw std::invalid_argument("unknown observable '" + name + "'");
}

double evaluate(Observable o, const SkewProductMap& T, TorusPoint p) {
    constexpr double tau = 2.0 * std::numbers::pi;
    switch (o) {
        case Observable::One: return 1.0;
        case Observable::CosX: return std::cos(tau * p.x.value());
        case Observable::SinY: return std::sin(tau * p.y.value());
        case Observable::CosXPlusY: return std::cos(tau * (p.x.value() + p.y.value()));
        case Observable::LogFPrime: return T.f().log_derivative(p.y.value());
    }
    return 0.0;
}

double birkhoff_average(const SkewProductMap& T, TorusPoint p, Observable o, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("birkhoff_average: n must be positive");
    double s = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        s += evaluate(o, T, p);
        p = T.step(p);
    }
    return s / static_cast<double>(n);
}

EmpiricalMeasure::EmpiricalMeasure(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), counts_(nx * ny, 0) {
    if (nx == 0 || ny == 0) throw std::invalid_argument("empirical measure: empty grid");
}

void EmpiricalMeasure::add(TorusPoint p) {
    std::size_t ix = std::min(nx_ - 1, static_cast<std::size_t>(p.x.value() * static_cast<double>(nx_)));
    std::size_t iy = std::min(ny_ - 1, static_cast<std::size_t>(p.y.value() * static_cast<double>(ny_)));
    ++counts_[ix * ny_ + iy];
    ++total_;
}

double EmpiricalMeasure::coverage() const {
    std::size_t hit = 0;
    for (auto c : counts_) hit += c > 0;
    return static_cast<double>(hit) / static_cast<double>(counts_.size());
}

EmpiricalMeasure empirical_measure(const OrbitRecord& orbit, std::size_t nx, std::size_t ny) {
    if (orbit.points.empty() || orbit.length == 0)
        throw std::invalid_argument("empirical_measure: orbit of length 0");
    EmpiricalMeasure m(nx, ny);
    for (const auto& p : orbit.points) m.add(p);
    return m;
}

EmpiricalMeasure orbit_histogram(const SkewProductMap& T, TorusPoint p, std::int64_t n, std::size_t nx,
                                 std::size_t ny, std::int64_t burn_in) {
    if (n == 0) throw std::invalid_argument("orbit_histogram: orbit of length 0");
    const bool fwd = n > 0;
    const std::int64_t steps = fwd ? n : -n;
    for (std::int64_t k = 0; k < burn_in; ++k) p = fwd ? T.step(p) : T.step_back(p);
    EmpiricalMeasure m(nx, ny);
    for (std::int64_t k = 0; k < steps; ++k) {
        m.add(p);
        p = fwd ? T.step(p) : T.step_back(p);
    }
    return m;
}

EmpiricalMeasure graph_pushforward(const SkewProductMap& T, std::size_t samples, std::int64_t depth, Angle seed,
                                   std::size_t nx, std::size_t ny) {
    EmpiricalMeasure m(nx, ny);
    for (std::size_t i = 0; i < samples; ++i) {
        Angle x((static_cast<double>(i) + 0.5) / static_cast<double>(samples));
        m.add({x, pullback_forward(T, x, depth, seed)});
    }
    return m;
}

double measure_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.nx() != b.nx() || a.ny() != b.ny()) throw std::invalid_argument("measure_distance: shape mismatch");
    if (a.total() == 0 || b.total() == 0) throw std::invalid_argument("measure_distance: empty histogram");
    const double ta = static_cast<double>(a.total()), tb = static_cast<double>(b.total());
    double s = 0.0;
    for (std::size_t i = 0; i < a.counts().size(); ++i)
        s += std::fabs(static_cast<double>(a.counts()[i]) / ta - static_cast<double>(b.counts()[i]) / tb);
    return 0.5 * s;
}

double minimality_coverage(const OrbitRecord& orbit, std::size_t nx, std::size_t ny) {
    return empirical_measure(orbit, nx, ny).coverage();
}

std::vector<double> coverage_profile(const SkewProductMap& T, TorusPoint p, const std::vector<std::int64_t>& checkpoints,
                                     std::size_t nx, std::size_t ny) {
    EmpiricalMeasure m(nx, ny);
    std::vector<double> out;
    std::int64_t done = 0;
    for (std::int64_t cp : checkpoints) {
        for (; done < cp; ++done) {
            m.add(p);
            p = T.step(p);
        }
        out.push_back(m.coverage());
    }
    return out;
}

}  // namespace qpf
