#include "qpf/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qpf/arithmetic.hpp"

namespace qpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

std::int64_t isqrt(std::int64_t v) {
    if (v <= 0) return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

std::int64_t pow15_floor(std::int64_t m) {
    return static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(m), 1.5) * (1.0 + 1e-12)));
}

// Smallest k in [1, cap] at which one of the stage separation conditions
// fails. slack receives the min over 0<|k|<=probe_to of the distance to a
// violation (used for padding).
std::int64_t scan_separation(const ArcSet& J, const ArcSet& I, std::optional<std::int64_t> nu, double omega,
                             std::int64_t cap, std::int64_t probe_to, double* slack) {
    std::vector<ArcInterval> triple;
    for (const auto& c : J.components()) triple.push_back(c.scaled(3.0));
    double best = kInf;
    for (std::int64_t k = 1; k <= cap; ++k) {
        bool bad = false;
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            const std::int64_t kk = sgn * k;
            ArcSet Jk = J.translated(kk, omega);
            double d = J.distance(Jk);
            if (d == 0.0) bad = true;
            best = k <= probe_to ? std::min(best, d) : best;
            for (const auto& t : triple) {
                double dt = arc_distance(t, t.translated(kk, omega));
                if (dt == 0.0) bad = true;
                if (k <= probe_to) best = std::min(best, dt / 3.0);
            }
            if (nu && kk != *nu) {
                if (I.distance(Jk) == 0.0) bad = true;
            }
        }
        if (bad) {
            if (slack) *slack = best;
            return k;
        }
    }
    if (slack) *slack = best;
    return cap + 1;
}

// Chooses J from I and detects a resonance.
void assemble_J(ResonanceScale& s, const ArcSet& I, double omega, std::int64_t nu_max) {
    s.I = I;
    s.nu_max = nu_max;
    std::optional<Resonance> res;
    if (I.size() == 2 && nu_max >= 1) res = detect_resonance(I, omega, nu_max);
    if (res) {
        s.resonant = true;
        s.nu = res->nu;
        s.J = ArcSet({res->J});
    } else {
        s.resonant = false;
        s.nu.reset();
        s.J = I;
    }
}

std::int64_t practical_nu_max(const ArcSet& I, double gamma) {
    double delta = I.max_length();
    if (!(delta > 0.0)) return 0;
    double N = std::floor(std::sqrt(gamma / (2.0 * delta)));
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(N) - 1);
}

// Pads J and re-verifies the separation up to M^2.
void choose_J_hat(ResonanceScale& s, double eps, double omega) {
    const std::int64_t M2 = s.M * s.M;
    double slack = kInf;
    scan_separation(s.J, s.I, s.nu, omega, M2, M2, &slack);
    double pad = std::min({0.25 * eps, 0.1 * slack, 0.25 * s.J.min_length()});
    if (!(pad > 0.0)) pad = 0.0;
    s.pad = pad;
    s.J_hat = s.J.padded(pad);
    std::int64_t g = scan_separation(s.J_hat, s.I, std::nullopt, omega, M2, 0, nullptr);
    s.separation_verified = g > M2 && pad > 0.0;
    if (!s.separation_verified) s.notes.push_back("enlarged set fails separation up to M^2");
}

std::vector<TranslateObstacle> placement_obstacles(const std::vector<ResonanceScale>& history) {
    std::vector<TranslateObstacle> obs;
    for (const auto& h : history) obs.push_back({h.J_hat, h.M * h.M, pow15_floor(h.M)});
    return obs;
}

// Largest admissible (M, K): J - M omega and J + K omega clear of the
// earlier scales, 1/2 < M/K^2 < 2, K >= nu^2 and M^2 < gap.
bool place_practical(ResonanceScale& s, const std::vector<ResonanceScale>& history, double omega,
                     std::int64_t M_max) {
    auto obs = placement_obstacles(history);
    std::int64_t K_max = isqrt(2 * M_max - 1);
    auto clear = find_clear_translate_range(s.J, obs, omega, -M_max, K_max, true);
    std::vector<char> blocked(static_cast<std::size_t>(M_max + K_max + 1), 0);
    for (const auto& list : clear.blocked)
        for (std::int64_t k : list) blocked[static_cast<std::size_t>(k + M_max)] = 1;
    auto ok = [&](std::int64_t k) { return !blocked[static_cast<std::size_t>(k + M_max)]; };
    const std::int64_t nu2 = s.nu ? (*s.nu) * (*s.nu) : 1;
    for (std::int64_t M = M_max; M >= 1; --M) {
        if (!ok(-M)) continue;
        // Smallest K with M/K^2 < 2: the probe derivative grows like eps^-K and
        // a larger K pushes I_{n+1} below binary64 resolution.
        std::int64_t k_lo = std::max<std::int64_t>(nu2, isqrt(M / 2) + 1);
        while (k_lo > std::max<std::int64_t>(1, nu2) && 2 * (k_lo - 1) * (k_lo - 1) > M) --k_lo;
        for (std::int64_t K = k_lo; K <= isqrt(2 * M - 1); ++K) {
            if (!ok(K)) continue;
            s.M = M;
            s.K = K;
            return true;
        }
    }
    return false;
}

bool place_paper(ResonanceScale& s, const std::vector<ResonanceScale>& history, double omega, std::int64_t K,
                 std::int64_t M) {
    const std::int64_t Mn2 = history.back().M * history.back().M;
    auto obs = placement_obstacles(history);
    auto kr = find_clear_translate_range(s.J, obs, omega, K + 1, K + Mn2, false);
    std::optional<std::int64_t> m_pick;
    std::int64_t m_lo = std::max<std::int64_t>(1, M - Mn2), m_hi = M - 1;
    for (std::int64_t m = m_hi; m >= m_lo; --m) {
        auto mr = find_clear_translate_range(s.J, obs, omega, -m, -m, false);
        if (mr.k) {
            m_pick = m;
            break;
        }
    }
    s.K = kr.k.value_or(K);
    s.M = m_pick.value_or(M);
    return kr.k.has_value() && m_pick.has_value();
}

}  // namespace

ScaleMode parse_scale_mode(const std::string& s) {
    if (s == "paper") return ScaleMode::Paper;
    if (s == "practical") return ScaleMode::Practical;
    throw std::invalid_argument("unknown mode '" + s + "' (expected paper|practical)");
}

std::string to_string(ScaleMode m) { return m == ScaleMode::Paper ? "paper" : "practical"; }

std::string to_string(ProbeStatus s) {
    switch (s) {
        case ProbeStatus::Ok: return "ok";
        case ProbeStatus::ComponentCount: return "component_count";
        case ProbeStatus::NonMonotone: return "non_monotone";
        case ProbeStatus::NoExpansion: return "no_expansion";
    }
    return "unknown";
}

std::int64_t paper_power_floor(double eps, double p) {
    double lx = -p * std::log(eps);
    if (lx > std::log(9.0e18)) throw std::overflow_error("paper-mode integer exceeds int64");
    double x = std::exp(lx);
    return static_cast<std::int64_t>(std::floor(x * (1.0 + 1e-12)));
}

std::int64_t separation_gap(const ArcSet& J, const ArcSet& I, std::optional<std::int64_t> nu, double omega,
                            std::int64_t cap) {
    return scan_separation(J, I, nu, omega, cap, 0, nullptr);
}

ResonanceScale build_scale0(const SkewProductMap& T, const CriticalSets& sets, const ScaleOptions& opts) {
    const double omega = T.omega();
    ArcSet I0 = compute_I0(T, sets);
    ResonanceScale s;
    s.n = 0;
    const double eps = sets.eps;
    if (opts.mode == ScaleMode::Paper) {
        std::int64_t nu_max = paper_power_floor(eps, 1.0 / 40.0);
        assemble_J(s, I0, omega, nu_max);
        s.K = paper_power_floor(eps, s.resonant ? 1.0 / 20.0 : 1.0 / 160.0);
        s.M = s.K * s.K;
        s.separation_gap = separation_gap(s.J, s.I, s.nu, omega, std::min(opts.separation_cap, s.M * s.M + 1));
        if (s.separation_gap <= s.M * s.M) s.notes.push_back("separation fails below M^2 at the printed exponents");
    } else {
        double gamma = diophantine_gamma(omega, opts.gamma_Q).gamma_Q;
        assemble_J(s, I0, omega, practical_nu_max(I0, gamma));
        s.separation_gap = separation_gap(s.J, s.I, s.nu, omega, opts.separation_cap);
        if (s.separation_gap > opts.separation_cap)
            throw AssumptionFailure("separation unverifiable within cap");
        std::int64_t M = isqrt(s.separation_gap - 1);
        if (M < 1) throw AssumptionFailure("separation unverifiable: immediate return");
        s.M = M;
        s.K = isqrt(2 * M - 1);
        if (s.resonant && s.K < (*s.nu) * (*s.nu))
            throw AssumptionFailure("separation unverifiable: K < nu^2 at the measured gap");
    }
    choose_J_hat(s, eps, omega);
    return s;
}

ResonanceScale next_scale(const SkewProductMap& T, const std::vector<ResonanceScale>& history,
                          const ArcSet& I_next, const CriticalSets& sets, const ScaleOptions& opts) {
    if (history.empty()) throw std::invalid_argument("next_scale: empty history");
    const ResonanceScale& prev = history.back();
    const double omega = T.omega();
    const double eps = sets.eps;
    ResonanceScale s;
    s.n = prev.n + 1;
    if (opts.mode == ScaleMode::Paper) {
        std::int64_t nu_max = paper_power_floor(eps, static_cast<double>(prev.K) / 40.0);
        assemble_J(s, I_next, omega, std::min(nu_max, opts.separation_cap));
        std::int64_t K = paper_power_floor(eps, static_cast<double>(prev.K) / (s.resonant ? 20.0 : 160.0));
        s.placement_ok = place_paper(s, history, omega, K, K * K);
        s.separation_gap = separation_gap(s.J, s.I, s.nu, omega, std::min(opts.separation_cap, s.M * s.M + 1));
    } else {
        double gamma = diophantine_gamma(omega, opts.gamma_Q).gamma_Q;
        assemble_J(s, I_next, omega, practical_nu_max(I_next, gamma));
        s.separation_gap = separation_gap(s.J, s.I, s.nu, omega, opts.separation_cap);
        if (s.separation_gap > opts.separation_cap)
            throw AssumptionFailure("separation unverifiable within cap");
        std::int64_t M_max = isqrt(s.separation_gap - 1);
        s.placement_ok = M_max >= 1 && place_practical(s, history, omega, M_max);
        if (!s.placement_ok) {
            s.M = std::max<std::int64_t>(1, M_max);
            s.K = isqrt(2 * s.M - 1);
        }
    }
    if (!s.placement_ok) s.notes.push_back("no clear translate inside the placement window");
    if (s.resonant && *s.nu < prev.M * prev.M) s.notes.push_back("nu below M_n^2");
    bool nested = std::all_of(s.J.components().begin(), s.J.components().end(), [&](const ArcInterval& c) {
        return std::any_of(prev.J.components().begin(), prev.J.components().end(),
                           [&](const ArcInterval& p) { return arc_contains(p, c, 1e-15); });
    });
    if (!nested) s.notes.push_back("J_{n+1} not contained in J_n");
    choose_J_hat(s, eps, omega);
    return s;
}

ProbeCurve::ProbeCurve(const SkewProductMap& T, const ArcInterval& comp, std::int64_t M, std::int64_t K,
                       Angle beta)
    : T_(&T), start_(comp.start.value()), len_(comp.length) {
    const std::int64_t n = M + K;
    xs_.resize(static_cast<std::size_t>(n));
    ys_.resize(static_cast<std::size_t>(n));
    double y = beta.value();
    for (std::int64_t k = 0; k < n; ++k) {
        double x = rotate(comp.start, k - M, T.omega()).value();
        xs_[static_cast<std::size_t>(k)] = x;
        ys_[static_cast<std::size_t>(k)] = y;
        y = frac01(T.g().lift(x) + T.f().lift(y));
    }
    y_end_ = y;
}

double ProbeCurve::lift(double d) const {
    double delta = 0.0;
    const CircleMap& g = T_->g();
    const CircleMap& f = T_->f();
    for (std::size_t k = 0; k < xs_.size(); ++k) delta = g.lift_increment(xs_[k], d) + f.lift_increment(ys_[k], delta);
    return y_end_ + delta;
}

double ProbeCurve::log_derivative(double d) const {
    double delta = 0.0;
    double logD = -kInf;
    const CircleMap& g = T_->g();
    const CircleMap& f = T_->f();
    for (std::size_t k = 0; k < xs_.size(); ++k) {
        logD = log_add(g.log_derivative(xs_[k] + d), f.log_derivative(ys_[k] + delta) + logD);
        delta = g.lift_increment(xs_[k], d) + f.lift_increment(ys_[k], delta);
    }
    return logD;
}

bool ProbeResult::ok() const {
    return status == ProbeStatus::Ok && component_count == 2 && boundary_gap > 0.0 && covers_A1 && monotone;
}

namespace {

// Samples phi on [0, L] until consecutive lift increments drop below 0.25.
std::vector<std::pair<double, double>> adaptive_samples(const ProbeCurve& c, std::size_t base) {
    const double L = c.length();
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < base; ++i) {
        double d = L * static_cast<double>(i) / static_cast<double>(base - 1);
        pts.emplace_back(d, c.lift(d));
    }
    const double min_width = L * 1e-14;
    for (int pass = 0; pass < 60; ++pass) {
        std::vector<std::pair<double, double>> out;
        bool refined = false;
        out.reserve(pts.size() * 2);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            out.push_back(pts[i]);
            double w = pts[i + 1].first - pts[i].first;
            if (std::fabs(pts[i + 1].second - pts[i].second) >= 0.25 && w > min_width) {
                double m = pts[i].first + 0.5 * w;
                out.emplace_back(m, c.lift(m));
                refined = true;
            }
        }
        out.push_back(pts.back());
        pts.swap(out);
        if (!refined || pts.size() > 2'000'000) break;
    }
    return pts;
}

}  // namespace

ProbeResult run_probe(const SkewProductMap& T, const ResonanceScale& scale, const CriticalSets& sets,
                      const ScaleOptions& opts) {
    ProbeResult r;
    r.stage = scale.n;
    const double log_inv_eps = -std::log(sets.eps);
    r.deriv_log_window = {0.5 * static_cast<double>(scale.K) * log_inv_eps,
                          opts.rho * static_cast<double>(scale.K) * log_inv_eps};
    std::vector<ArcInterval> found;
    double gap = kInf;
    double cover_err = 0.0;
    bool covers = true;
    double dmin = kInf, dmax = -kInf;
    const double a1 = sets.A1.start.value();
    const double a_len = sets.A1.length;
    for (const auto& comp : scale.J.components()) {
        ProbeCurve curve(T, comp, scale.M, scale.K, sets.beta);
        auto pts = adaptive_samples(curve, 65);
        bool mono = true;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (!(pts[i + 1].second > pts[i].second)) mono = false;
        if (!mono) {
            pts = adaptive_samples(curve, 1025);
            mono = true;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                if (!(pts[i + 1].second > pts[i].second)) mono = false;
        }
        r.monotone = r.monotone && mono;
        std::vector<ProbeSample> samples;
        samples.reserve(pts.size());
        for (const auto& p : pts) samples.push_back({comp.start.value() + p.first, p.second});
        r.samples.push_back(std::move(samples));

        auto lift = [&curve](double d) { return curve.lift(d); };
        auto pre = preimage_intervals(lift, 0.0, curve.length(), sets.A1);
        for (const auto& iv : pre.intervals) {
            const double lo = iv.first, hi = iv.second;
            found.push_back(ArcInterval(Angle(comp.start.value() + lo), hi - lo));
            gap = std::min({gap, lo, curve.length() - hi});
            double plo = curve.lift(lo), phi = curve.lift(hi);
            double m = std::nearbyint(0.5 * (plo + phi) - (a1 + 0.5 * a_len));
            double e_lo = plo - (a1 + m);
            double e_hi = (a1 + a_len + m) - phi;
            cover_err = std::max({cover_err, std::fabs(e_lo), std::fabs(e_hi)});
            if (!(e_lo <= 1e-8 && e_hi <= 1e-8)) covers = false;
            if (hi - lo < 1e3 * std::numeric_limits<double>::epsilon()) r.precision_boundary = true;
            for (int i = 0; i <= 32; ++i) {
                double ld = curve.log_derivative(lo + (hi - lo) * i / 32.0);
                dmin = std::min(dmin, ld);
                dmax = std::max(dmax, ld);
            }
        }
    }
    r.I_next = ArcSet(found);
    r.component_count = found.size();
    r.boundary_gap = found.empty() ? 0.0 : gap;
    r.covers_A1 = covers && !found.empty();
    r.cover_error = cover_err;
    r.deriv_log_bounds = {dmin, dmax};
    r.derivative_window_ok = !found.empty() && dmin > r.deriv_log_window.first && dmax < r.deriv_log_window.second;
    if (scale.n == 0)
        r.gap_bound = scale.resonant
                          ? std::pow(sets.eps, opts.rho * static_cast<double>(scale.nu.value_or(1)) + 1.0) /
                                (6.0 * opts.kappa)
                          : sets.eps / (4.0 * opts.kappa);
    if (!r.monotone) r.status = ProbeStatus::NonMonotone;
    else if (r.component_count < 1 || r.component_count > 2) r.status = ProbeStatus::ComponentCount;
    else if (!(dmax > r.deriv_log_window.first)) r.status = ProbeStatus::NoExpansion;
    return r;
}

ScaleLadder build_scales(const SkewProductMap& T, const CriticalSets& sets, const ScaleOptions& opts) {
    ScaleLadder lad;
    std::vector<ResonanceScale> history;
    ResonanceScale s = build_scale0(T, sets, opts);
    for (int stage = 0;; ++stage) {
        ProbeResult p = run_probe(T, s, sets, opts);
        history.push_back(s);
        lad.stages.push_back({s, p});
        if (!p.ok()) {
            std::string why = to_string(p.status);
            if (p.status == ProbeStatus::Ok) {
                if (p.component_count != 2) why = std::to_string(p.component_count) + " components";
                else if (!(p.boundary_gap > 0.0)) why = "no boundary gap";
                else if (!p.covers_A1) why = "image misses A'";
                else why = "non-monotone samples";
            }
            lad.stop_reason = "probe failed (" + why + ") at stage " + std::to_string(stage);
            break;
        }
        if (p.precision_boundary) {
            lad.stop_reason = "precision boundary at stage " + std::to_string(stage);
            break;
        }
        if (stage + 1 >= opts.max_stages) {
            lad.stop_reason = "stage cap";
            break;
        }
        try {
            s = next_scale(T, history, p.I_next, sets, opts);
        } catch (const AssumptionFailure& e) {
            lad.stop_reason = e.what();
            break;
        }
    }
    return lad;
}

double excluded_measure(const std::vector<ResonanceScale>& scales) {
    double s = 0.0;
    for (const auto& sc : scales) s += 2.0 * std::pow(static_cast<double>(sc.M), 1.5) * sc.J.measure();
    return s;
}

bool in_good_set(Angle x, const std::vector<ResonanceScale>& scales, double omega) {
    for (const auto& sc : scales) {
        std::int64_t Z = pow15_floor(sc.M);
        for (std::int64_t m = -Z; m <= sc.K; ++m)
            if (sc.J.contains(rotate(x, -m, omega))) return false;
    }
    return true;
}

PaperLadder paper_scale_ladder(double eps, int stages, bool resonant) {
    PaperLadder lad;
    const double L = -std::log(eps);
    const double c = resonant ? 20.0 : 160.0;
    double K_prev = 1.0;  // exponent multiplier for stage 0
    double log_sum = -kInf;
    for (int j = 0; j < stages; ++j) {
        PaperStage st;
        double log_K = K_prev * L / c;
        st.log_J_upper = -0.5 * K_prev * L;
        if (log_K < std::log(3.0e9)) {
            std::int64_t K = paper_power_floor(eps, K_prev / c);
            K = std::max<std::int64_t>(K, 1);
            st.K = K;
            st.M = K * K;
            st.log_K = std::log(static_cast<double>(K));
        } else {
            st.log_K = log_K;
        }
        st.log_M = 2.0 * st.log_K;
        double term = std::log(2.0) + 1.5 * st.log_M + st.log_J_upper;
        if (!st.K) term = std::log(2.0) + K_prev * L * (3.0 / c - 0.5);
        log_sum = log_add(log_sum, term);
        K_prev = st.K ? static_cast<double>(*st.K) : std::exp(log_K);
        lad.stages.push_back(st);
    }
    lad.excluded_bound = std::exp(log_sum);
    return lad;
}

}  // namespace qpf
