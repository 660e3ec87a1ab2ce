#include "qpf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qpf {

CriticalSets build_critical_sets(const CircleMap& f, double eps, const ArcInterval& A, const ArcInterval& B) {
    if (!(A.length < eps)) throw AssumptionFailure("critical sets: |A| >= eps");
    CriticalSets s;
    s.eps = eps;
    s.A = A;
    s.B = B;
    s.A1 = A.padded(eps);
    s.A2 = A.padded(0.5 * eps);
    const double a2 = A.start.value() + A.length;
    s.beta = Angle(a2 + 0.25 * eps);
    s.R = ArcInterval(f(Angle(a2)), f.lift_increment(a2, 1.0 - A.length));
    return s;
}

CriticalSets build_critical_sets(const CircleMap& f, double eps, double rho) {
    auto rep = verify_A2(f, eps, rho);
    if (!rep.pass) {
        std::string why = "critical sets: (A2) not satisfied";
        for (const auto& r : rep.reasons) why += "; " + r;
        throw AssumptionFailure(why);
    }
    return build_critical_sets(f, eps, rep.A, rep.B);
}

ArcInterval StripSection::section(Angle x) const {
    return R_.translated(T_->g().lift(x.value() - T_->omega()));
}

bool StripSection::contains(Angle x, Angle y, double tol) const { return section(x).padded(tol).contains(y); }

ArcSet compute_I0(const SkewProductMap& T, const CriticalSets& sets) {
    const CircleMap& g = T.g();
    // (R + G(x)) meets A' iff G(x) lies in W = [a1' - r_s - |R|, a2' - r_s] mod 1.
    const double w_lo = sets.A1.start.value() - sets.R.start.value() - sets.R.length;
    const double w_len = sets.A1.length + sets.R.length;
    if (w_len >= 1.0) throw AssumptionFailure("I0: strip window covers the circle");
    const int k = g.degree();
    const double m0 = std::floor(g.lift(0.0) - w_lo);
    std::vector<ArcInterval> arcs;
    for (int m = 0; m < k; ++m) {
        double lo = g.inverse_lift(w_lo + m0 + m);
        double hi = g.inverse_lift(w_lo + w_len + m0 + m);
        arcs.push_back(ArcInterval::from_lift(lo, hi));
    }
    ArcSet I0(std::move(arcs));
    if (k >= 2 && I0.size() != static_cast<std::size_t>(k))
        throw AssumptionFailure("I0: expected " + std::to_string(k) + " components, found " +
                                std::to_string(I0.size()));
    return I0;
}

std::optional<Resonance> detect_resonance(const ArcSet& I, double omega, std::int64_t nu_max) {
    if (I.size() != 2) return std::nullopt;
    for (std::int64_t nu = 1; nu <= nu_max; ++nu) {
        for (int lab = 0; lab < 2; ++lab) {
            const ArcInterval& a = I[lab];
            const ArcInterval& b = I[1 - lab];
            ArcInterval shifted = b.translated(-nu, omega);
            if (!arcs_intersect(a, shifted)) continue;
            return Resonance{nu, a, b, *arc_hull(a, shifted)};
        }
    }
    return std::nullopt;
}

SampledCurve sample_curve(const std::function<double(double)>& lift, double lo, double hi, std::size_t n) {
    SampledCurve c;
    n = std::max<std::size_t>(n, 2);
    c.x.resize(n);
    c.lift.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        c.x[i] = x;
        c.lift[i] = lift(x);
    }
    return c;
}

OvertakeResult overtake_points(const SampledCurve& psi, const SampledCurve& phi, double tol) {
    if (psi.x.size() != phi.x.size()) throw std::invalid_argument("overtake_points: grids differ");
    OvertakeResult out;
    const std::size_t n = psi.x.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = psi.lift[i] - phi.lift[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = d[i], b = d[i + 1];
        if (b > a) {
            for (double m = std::floor(a) + 1.0; m <= b; m += 1.0)
                out.crossings.push_back(psi.x[i] + (m - a) / (b - a) * (psi.x[i + 1] - psi.x[i]));
        } else if (b < a) {
            for (double m = std::ceil(a) - 1.0; m >= b; m -= 1.0) ++out.reverse_crossings;
        }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double m = std::nearbyint(d[i]);
        if (std::fabs(d[i] - m) > tol) continue;
        double l = d[i - 1] - m, r = d[i + 1] - m;
        if ((l > tol && r > tol) || (l < -tol && r < -tol)) out.tangential = true;
    }
    return out;
}

namespace {

// Smallest x in [lo, hi] with lift(x) >= v (lift increasing, lift(hi) >= v).
double first_at_least(const std::function<double(double)>& lift, double lo, double hi, double v) {
    for (int it = 0; it < 4000; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (lift(mid) >= v) hi = mid; else lo = mid;
    }
    return hi;
}

// Largest x in [lo, hi] with lift(x) <= v (lift(lo) <= v).
double last_at_most(const std::function<double(double)>& lift, double lo, double hi, double v) {
    for (int it = 0; it < 4000; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (lift(mid) <= v) lo = mid; else hi = mid;
    }
    return lo;
}

}  // namespace

PreimageIntervals preimage_intervals(const std::function<double(double)>& lift, double lo, double hi,
                                     const ArcInterval& target) {
    PreimageIntervals out;
    const double f_lo = lift(lo), f_hi = lift(hi);
    if (!(f_hi >= f_lo)) throw std::invalid_argument("preimage_intervals: curve not increasing");
    const double t0 = target.start.value(), L = target.length;
    const double m_min = std::ceil(f_lo - t0 - L);
    const double m_max = std::floor(f_hi - t0);
    for (double m = m_min; m <= m_max; m += 1.0) {
        const double a = t0 + m, b = t0 + L + m;
        if (b < f_lo || a > f_hi) continue;
        double x0 = f_lo >= a ? lo : first_at_least(lift, lo, hi, a);
        double x1 = f_hi <= b ? hi : last_at_most(lift, x0, hi, b);
        if (x1 < x0) continue;
        if (x0 == lo) out.touches_lo = true;
        if (x1 == hi) out.touches_hi = true;
        out.intervals.emplace_back(x0, x1);
    }
    return out;
}

ArcSet preimage_components(const SampledCurve& curve, const ArcInterval& target) {
    const auto& xs = curve.x;
    const auto& ys = curve.lift;
    if (xs.size() < 2 || xs.size() != ys.size()) throw std::invalid_argument("preimage_components: bad samples");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i + 1] > xs[i]) || ys[i + 1] < ys[i])
            throw std::invalid_argument("preimage_components: curve not monotone");
    auto interp = [&](double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        if (i + 1 >= xs.size()) return ys.back();
        double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return ys[i] + t * (ys[i + 1] - ys[i]);
    };
    auto pre = preimage_intervals(interp, xs.front(), xs.back(), target);
    std::vector<ArcInterval> arcs;
    for (const auto& iv : pre.intervals) arcs.push_back(ArcInterval::from_lift(iv.first, iv.second));
    return ArcSet(std::move(arcs));
}

}  // namespace qpf
