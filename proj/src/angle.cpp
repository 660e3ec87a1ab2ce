#include "qpf/angle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpf {

namespace {

double wrap_value(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r = 0.0;  // t = -tiny rounds up to 1
    return r;
}

}  // namespace

Angle::Angle(double t) {
    if (!std::isfinite(t)) throw std::domain_error("angle: non-finite value");
    v_ = wrap_value(t);
}

Angle wrap(double t) { return Angle(t); }

double circle_dist(Angle a, Angle b) {
    double d = std::fabs(a.value() - b.value());
    return std::min(d, 1.0 - d);
}

double forward_gap(Angle a, Angle b) {
    double d = b.value() - a.value();
    if (d < 0.0) d += 1.0;
    if (d >= 1.0) d = 0.0;
    return d;
}

Angle rotate(Angle x, std::int64_t k, double omega) {
    const double kd = static_cast<double>(k);
    const double p = kd * omega;
    const double err = std::fma(kd, omega, -p);
    const double fp = p - std::floor(p);
    return Angle((x.value() + fp) + err);
}

double dist_to_int(std::int64_t k, double omega) {
    double r = rotate(Angle(), k, omega).value();
    return std::min(r, 1.0 - r);
}

ArcInterval::ArcInterval(Angle s, double len) : start(s), length(len) {
    if (!(len >= 0.0)) throw std::invalid_argument("arc: negative length");
    if (len >= 1.0) {
        start = Angle();
        length = 1.0;
    }
}

ArcInterval ArcInterval::from_lift(double lo, double hi) {
    return ArcInterval(Angle(lo), std::max(0.0, hi - lo));
}

Angle ArcInterval::end() const { return Angle(start.value() + length); }

double ArcInterval::mid() const { return wrap_value(start.value() + 0.5 * length); }

bool ArcInterval::contains(Angle y) const { return forward_gap(start, y) <= length; }

bool ArcInterval::contains_open(Angle y) const {
    double d = forward_gap(start, y);
    return d > 0.0 && d < length;
}

ArcInterval ArcInterval::translated(double shift) const {
    return ArcInterval(Angle(start.value() + shift), length);
}

ArcInterval ArcInterval::translated(std::int64_t k, double omega) const {
    return ArcInterval(rotate(start, k, omega), length);
}

ArcInterval ArcInterval::padded(double pad) const {
    return ArcInterval(Angle(start.value() - pad), std::max(0.0, length + 2.0 * pad));
}

ArcInterval ArcInterval::scaled(double factor) const {
    double len = length * factor;
    return ArcInterval(Angle(start.value() + 0.5 * (length - len)), len);
}

ArcInterval arc_between(Angle y, Angle eta) { return ArcInterval(y, forward_gap(y, eta)); }

bool arcs_intersect(const ArcInterval& a, const ArcInterval& b) {
    return forward_gap(a.start, b.start) <= a.length || forward_gap(b.start, a.start) <= b.length;
}

double arc_distance(const ArcInterval& a, const ArcInterval& b) {
    if (arcs_intersect(a, b)) return 0.0;
    return std::min(forward_gap(a.end(), b.start), forward_gap(b.end(), a.start));
}

std::optional<ArcInterval> arc_hull(const ArcInterval& a, const ArcInterval& b) {
    double d = forward_gap(a.start, b.start);
    if (d <= a.length) return ArcInterval(a.start, std::max(a.length, d + b.length));
    double d2 = forward_gap(b.start, a.start);
    if (d2 <= b.length) return ArcInterval(b.start, std::max(b.length, d2 + a.length));
    return std::nullopt;
}

bool arc_contains(const ArcInterval& a, const ArcInterval& b, double tol) {
    if (a.length >= 1.0) return true;
    double d = forward_gap(a.start, b.start);
    if (d > 1.0 - tol) d -= 1.0;
    return d >= -tol && d + b.length <= a.length + tol;
}

ArcSet::ArcSet(std::vector<ArcInterval> arcs) {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(arcs.size());
    for (const auto& a : arcs) {
        if (a.length >= 1.0) {
            comps_ = {ArcInterval(Angle(), 1.0)};
            return;
        }
        iv.emplace_back(a.start.value(), a.start.value() + a.length);
    }
    if (iv.empty()) return;
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : iv) {
        if (!merged.empty() && p.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, p.second);
        else
            merged.push_back(p);
    }
    // The last piece may run past 1 into the first ones.
    while (merged.size() > 1 && merged.back().second - 1.0 >= merged.front().first) {
        merged.back().second = std::max(merged.back().second, merged.front().second + 1.0);
        merged.erase(merged.begin());
    }
    for (const auto& p : merged) {
        if (p.second - p.first >= 1.0) {
            comps_ = {ArcInterval(Angle(), 1.0)};
            return;
        }
        comps_.emplace_back(Angle(p.first), p.second - p.first);
    }
    std::sort(comps_.begin(), comps_.end(),
              [](const ArcInterval& x, const ArcInterval& y) { return x.start.value() < y.start.value(); });
}

double ArcSet::measure() const {
    double s = 0.0;
    for (const auto& c : comps_) s += c.length;
    return s;
}

bool ArcSet::contains(Angle y) const {
    return std::any_of(comps_.begin(), comps_.end(), [&](const ArcInterval& c) { return c.contains(y); });
}

bool ArcSet::intersects(const ArcInterval& a) const {
    return std::any_of(comps_.begin(), comps_.end(), [&](const ArcInterval& c) { return arcs_intersect(c, a); });
}

bool ArcSet::intersects(const ArcSet& other) const {
    return std::any_of(other.comps_.begin(), other.comps_.end(),
                       [&](const ArcInterval& c) { return intersects(c); });
}

double ArcSet::distance(const ArcSet& other) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& a : comps_)
        for (const auto& b : other.comps_) d = std::min(d, arc_distance(a, b));
    return d;
}

ArcSet ArcSet::translated(std::int64_t k, double omega) const {
    std::vector<ArcInterval> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(c.translated(k, omega));
    return ArcSet(std::move(out));
}

ArcSet ArcSet::padded(double pad) const {
    std::vector<ArcInterval> out;
    for (const auto& c : comps_) out.push_back(c.padded(pad));
    return ArcSet(std::move(out));
}

double ArcSet::min_length() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : comps_) m = std::min(m, c.length);
    return m;
}

double ArcSet::max_length() const {
    double m = 0.0;
    for (const auto& c : comps_) m = std::max(m, c.length);
    return m;
}

}  // namespace qpf
