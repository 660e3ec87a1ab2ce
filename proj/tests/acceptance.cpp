// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "qpf/arithmetic.hpp"
#include "qpf/cocycle.hpp"
#include "qpf/geometry.hpp"
#include "qpf/graphs.hpp"
#include "qpf/scales.hpp"
#include "qpf/skew_product.hpp"

using namespace qpf;

namespace {

constexpr double kEps = 0.01;

// Frozen from calibration runs of the Example 1 system.
constexpr double kGraphGapGoodSet = 0.01;  // measured 0.0152
constexpr double kForwardBackwardTV = 0.5;  // measured 0.98
constexpr double kCoverage1e7 = 0.13;       // measured 0.136

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("[%s] %2d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string num(double v, const char* f = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SkewProductMap example1() {
    return SkewProductMap(kGolden, make_affine_g(2, 0.0), make_example1_f(kEps).f);
}

CriticalSets example1_sets() {
    auto e = make_example1_f(kEps);
    return build_critical_sets(e.f, kEps, e.A, e.B);
}

void c1_null_exponent() {
    SkewProductMap T0(kGolden, make_affine_g(2, 0.0), make_identity());
    auto t0 = std::chrono::steady_clock::now();
    double L = lyapunov_estimate(T0, {Angle(0.1), Angle(0.3)}, 1'000'000);
    double dt = seconds_since(t0);
    report(1, std::fabs(L) <= 1e-12 && dt < 1.0,
           "skew-shift exponent: L=" + num(L) + " at n=1e6 in " + num(dt, "%.3f") + " s");
}

void c2_negative_exponent(const SkewProductMap& T, const CriticalSets& s) {
    const double bound = 0.5 * std::log(kEps);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto t0 = std::chrono::steady_clock::now();
    int below = 0, starts = 0, rejected = 0;
    double worst = -INFINITY;
    while (starts < 100) {
        TorusPoint p{Angle(U(rng)), Angle(U(rng))};
        Angle sx = pullback_backward(T, p.x, 200, Angle(s.A.mid()));
        if (circle_dist(p.y, sx) < 1e-6) {
            ++rejected;
            continue;
        }
        double L = lyapunov_estimate(T, p, 100000);
        worst = std::max(worst, L);
        below += L < bound;
        ++starts;
    }
    double dt = seconds_since(t0);
    report(2, below >= 99 && dt < 30.0,
           "negative exponent: " + std::to_string(below) + "/100 below " + num(bound) + ", worst " + num(worst) +
               ", " + std::to_string(rejected) + " starts on the repeller redrawn, " + num(dt, "%.2f") + " s");
}

void c3_attraction(const SkewProductMap& T, const CriticalSets& s) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<AttractionFit> fits;
    int flagged = 0;
    for (int i = 0; i < 100; ++i) {
        auto f = attraction_rate(T, {Angle(U(rng)), Angle(U(rng))}, 100, 200, s.beta, Angle(s.A.mid()));
        flagged += f.flagged;
        fits.push_back(f);
    }
    auto rep = summarize_attraction(fits, kEps);
    report(3, rep.pass,
           "attraction slope: median " + num(rep.median) + " <= " + num(rep.bound + rep.tolerance) + " over " +
               std::to_string(rep.slopes.size()) + " fits (" + std::to_string(flagged) + " flagged)");
}

void c4_two_graphs(const SkewProductMap& T, const CriticalSets& s) {
    auto grid = uniform_grid(1000);
    auto u = estimate_attractor(T, grid, 200, s.beta);
    auto r = estimate_repeller(T, grid, 200, Angle(s.A.mid()));
    int u_ok = 0, s_ok = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        u_ok += u.residuals[i] < 1e-8;
        s_ok += r.residuals[i] < 1e-8;
    }
    // Theorem-level claims hold off the excluded set of the scale ladder.
    auto lad = build_scales(T, s, ScaleOptions{});
    std::vector<ResonanceScale> scales;
    for (const auto& st : lad.stages) scales.push_back(st.scale);
    double full_min = INFINITY, good_min = INFINITY;
    int good = 0, u_in_A1 = 0, s_out_A = 0, u_in_A1_all = 0, s_out_A_all = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double d = circle_dist(u.values[i], r.values[i]);
        full_min = std::min(full_min, d);
        bool bad_u = s.A1.contains(u.values[i]);
        bool bad_s = !s.A.contains(r.values[i]);
        u_in_A1_all += bad_u;
        s_out_A_all += bad_s;
        if (!in_good_set(grid[i], scales, T.omega())) continue;
        ++good;
        good_min = std::min(good_min, d);
        u_in_A1 += bad_u;
        s_out_A += bad_s;
    }
    bool ok = u_ok >= 990 && s_ok >= 990 && good_min > kGraphGapGoodSet && u_in_A1 == 0 && s_out_A == 0 &&
              good >= 500;
    report(4, ok,
           "two graphs: residual<1e-8 on " + std::to_string(u_ok) + "/" + std::to_string(s_ok) +
               " points; on the good set (" + std::to_string(good) + "/1000) min |u-s| " + num(good_min) + " > " +
               num(kGraphGapGoodSet) + ", u in A' " + std::to_string(u_in_A1) + ", s outside A " +
               std::to_string(s_out_A) + "; full grid min |u-s| " + num(full_min) + ", u in A' " +
               std::to_string(u_in_A1_all) + ", s outside A " + std::to_string(s_out_A_all));
}

void c5_two_measures(const SkewProductMap& T, const CriticalSets& s) {
    auto push = graph_pushforward(T, 100000, 200, s.beta, 50, 50);
    TorusPoint p{Angle(0.1), Angle(0.3)};
    std::vector<double> tv;
    for (std::int64_t n : {10000, 100000, 1000000}) tv.push_back(measure_distance(orbit_histogram(T, p, n, 50, 50), push));
    double fb = measure_distance(orbit_histogram(T, p, 1000000, 50, 50), orbit_histogram(T, p, -1000000, 50, 50));
    bool ok = tv[0] > tv[1] && tv[1] > tv[2] && fb >= kForwardBackwardTV;
    report(5, ok,
           "two measures: TV to pushforward " + num(tv[0]) + ", " + num(tv[1]) + ", " + num(tv[2]) +
               " at n=1e4,1e5,1e6; forward vs backward " + num(fb) + " >= " + num(kForwardBackwardTV));
}

void c6_coverage(const SkewProductMap& T) {
    auto prof = coverage_profile(T, {Angle(0.1), Angle(0.3)}, {10000, 100000, 1000000, 10000000}, 50, 50);
    bool mono = std::is_sorted(prof.begin(), prof.end());
    bool ok = mono && prof.back() > kCoverage1e7;
    report(6, ok,
           "coverage proxy: " + num(prof[0]) + ", " + num(prof[1]) + ", " + num(prof[2]) + ", " + num(prof[3]) +
               " at n=1e4..1e7, final > " + num(kCoverage1e7));
}

void c7_I0(const SkewProductMap& T, const CriticalSets& s) {
    auto I0 = compute_I0(T, s);
    const double want = 0.5 * (s.A1.length + s.R.length);
    double err = 0.0;
    for (const auto& c : I0.components()) err = std::max(err, std::fabs(c.length - want));
    report(7, I0.size() == 2 && err <= 1e-10,
           "I0 geometry: " + std::to_string(I0.size()) + " components, length error " + num(err) + " vs " +
               num(want, "%.15g"));
}

void c8_probes(const SkewProductMap& T, const CriticalSets& s) {
    auto lad = build_scales(T, s, ScaleOptions{});
    std::string what = "probe geometry:";
    bool ok = lad.stages.size() >= 2;
    for (std::size_t n = 0; n < std::min<std::size_t>(2, lad.stages.size()); ++n) {
        const auto& p = lad.stages[n].probe;
        bool st = p.component_count == 2 && p.boundary_gap > 0.0 && p.cover_error < 1e-8;
        ok = ok && st;
        what += " stage " + std::to_string(n) + " components " + std::to_string(p.component_count) + ", gap " +
                num(p.boundary_gap) + ", cover error " + num(p.cover_error) + ";";
    }
    report(8, ok, what + " ladder stop: " + lad.stop_reason);
}

void c9_derivative() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.05, 0.95), S(0.0, 2.0), E(0.05, 0.3);
    std::uniform_int_distribution<int> N(1, 25);
    int checked = 0, skipped = 0, bad = 0;
    double worst = 0.0;
    while (checked < 1000) {
        double eps = E(rng), slope = S(rng), c = U(rng);
        SkewProductMap T(kGolden, make_affine_g(2, 0.0), make_example1_f(eps).f);
        LiftCurve y0{0.0, 1.0, [=](double x) { return c + slope * x; }, [=](double) { return slope; }};
        double x = U(rng);
        int n = N(rng);
        auto cd = curve_derivative(T, y0, x, n);
        auto fd = centered_difference(T, y0, x, 1e-7 * std::exp(-0.5 * cd.log_value), n);
        if (cd.breakpoint_collision || fd.crossed) {
            ++skipped;
            continue;
        }
        ++checked;
        double rel = std::fabs(fd.value / cd.value - 1.0);
        worst = std::max(worst, rel);
        bad += !(rel < 1e-4);
    }
    report(9, bad == 0,
           "derivative formula: worst relative error " + num(worst) + " on 1000 configurations (" +
               std::to_string(skipped) + " near breakpoints skipped)");
}

void c10_cocycle() {
    const double K = 10.0;
    double lD = lyapunov_L(constant_cocycle(kGolden, diag_matrix(K)), 0.0, 100000);
    auto C = diag_rotation_cocycle(kGolden, K, example2_phi());
    auto T = projectivized_skew_product(C);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(0.0, 1.0), V(-1.0, 1.0);
    double comm = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double x = U(rng);
        Vec2 v{V(rng), V(rng)};
        comm = std::max(comm, circle_dist(project_vector(C(x) * v), T.step({Angle(x), project_vector(v)}).y));
    }
    auto ar = angle_contraction_rate(C, 0.1, {1, 0.2}, {0.3, 1}, 100000);
    double rel = std::fabs(ar.rate - ar.comparison) / ar.comparison;
    double L = lyapunov_L(C, 0.1, 1'000'000);
    bool ok = std::fabs(lD - std::log(K)) <= 1e-9 && comm <= 1e-10 && rel < 0.05 && L > 0.5 * std::log(K);
    report(10, ok,
           "cocycle: |L_D - log K| " + num(std::fabs(lD - std::log(K))) + ", commutation " + num(comm) +
               ", |rate-2L|/2L " + num(rel) + ", L " + num(L) + " > " + num(0.5 * std::log(K)));
}

void c11_diophantine() {
    auto prof = diophantine_gamma_brute(kGolden, 10000);
    bool g_ok = std::fabs(prof.gamma_Q - 0.3819660) <= 1e-6;

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double gamma = diophantine_gamma(kGolden, 1'000'000).gamma_Q;
    int lemma71_bad = 0;
    for (int i = 0; i < 1000; ++i) {
        double delta = std::pow(10.0, -5.0 + 4.0 * U(rng));
        ArcInterval arc(Angle(U(rng)), delta * U(rng));
        std::int64_t n = return_gap_bound(gamma, delta);
        for (std::int64_t k = 1; k <= n; ++k)
            if (arcs_intersect(arc, arc.translated(k, kGolden)) || arcs_intersect(arc, arc.translated(-k, kGolden))) {
                ++lemma71_bad;
                break;
            }
    }

    int instances = 0, short_count = 0;
    for (int i = 0; i < 300; ++i) {
        const double dI = std::pow(10.0, -7.0 + U(rng));
        const std::size_t p = 1 + (i % 2);
        std::vector<ArcInterval> comps;
        for (std::size_t c = 0; c < p; ++c) comps.emplace_back(Angle(U(rng)), dI);
        ArcSet I(comps);
        const std::int64_t N = static_cast<std::int64_t>(std::sqrt(gamma / (3.0 * dI))) / 2;
        const std::int64_t Z = std::max<std::int64_t>(0, N / (40 * static_cast<std::int64_t>(p * p)) - 1);
        ArcSet J({ArcInterval(Angle(U(rng)), 0.5 * dI)});
        auto r = find_clear_translate(J, {TranslateObstacle{I, N, Z}}, kGolden, N);
        if (!r.hypotheses_ok) continue;
        ++instances;
        short_count += 2 * r.admissible_count < N;
    }
    report(11, g_ok && lemma71_bad == 0 && short_count == 0 && instances >= 100,
           "diophantine: gamma_Q " + num(prof.gamma_Q, "%.7f") + " at q=" + std::to_string(prof.attaining_q) +
               "; return-gap violations " + std::to_string(lemma71_bad) + "/1000; admissible < N/2 on " +
               std::to_string(short_count) + "/" + std::to_string(instances) + " instances");
}

void c12_substitutes(const char* unit_tests, bool c6, bool c8) {
    bool suites = false;
    std::string how = "unit suites not run (no path given)";
    if (unit_tests) {
        std::string cmd = std::string("\"") + unit_tests + "\" --gtest_brief=1 > /dev/null 2>&1";
        suites = std::system(cmd.c_str()) == 0;
        how = suites ? "unit suites pass" : "unit suites FAIL";
    }
    report(12, suites && c6 && c8,
           "desk-scale substitutes: the infinite construction, the epsilon thresholds and exact minimality are "
           "not checked; criteria 6 and 8 " + std::string(c6 && c8 ? "pass" : "fail") + ", " + how);
}

}  // namespace

int main(int argc, char** argv) {
    auto T = example1();
    auto s = example1_sets();
    c1_null_exponent();
    c2_negative_exponent(T, s);
    c3_attraction(T, s);
    c4_two_graphs(T, s);
    c5_two_measures(T, s);
    int before6 = failures;
    c6_coverage(T);
    bool c6 = failures == before6;
    c7_I0(T, s);
    int before8 = failures;
    c8_probes(T, s);
    bool c8 = failures == before8;
    c9_derivative();
    c10_cocycle();
    c11_diophantine();
    c12_substitutes(argc > 1 ? argv[1] : nullptr, c6, c8);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
