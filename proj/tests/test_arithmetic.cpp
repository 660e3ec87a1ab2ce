#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "qpf/angle.hpp"
#include "qpf/arithmetic.hpp"

using namespace qpf;

namespace {

// dist(q omega, Z) computed exactly on the dyadic value of omega.
double exact_dist(std::int64_t q, double omega) {
    int e = 0;
    double m = std::frexp(omega, &e);  // omega = m 2^e, m in [0.5, 1)
    const int shift = 53 - e;
    const __int128 mant = static_cast<__int128>(std::ldexp(m, 53));
    const __int128 one = static_cast<__int128>(1) << shift;
    __int128 r = (mant * q) % one;
    __int128 d = r < one - r ? r : one - r;
    return std::ldexp(static_cast<double>(d), -shift);
}

double brute_gamma(double omega, std::int64_t Q, std::int64_t* at = nullptr) {
    double best = INFINITY;
    for (std::int64_t q = 1; q <= Q; ++q) {
        double v = static_cast<double>(q) * static_cast<double>(q) * exact_dist(q, omega);
        if (v < best) {
            best = v;
            if (at) *at = q;
        }
    }
    return best;
}

// Whether closed arcs meet, via the forward gap between starts.
bool meets(const ArcInterval& a, const ArcInterval& b) {
    double g = b.start.value() - a.start.value();
    g -= std::floor(g);
    return g <= a.length || 1.0 - g <= b.length;
}

}  // namespace

TEST(ContinuedFraction, GoldenIsAllOnes) {
    auto cf = continued_fraction(kGolden, 30);
    ASSERT_GE(cf.coefficients.size(), 30u);
    for (int i = 0; i < 30; ++i) EXPECT_EQ(cf.coefficients[i], 1) << i;
    // Convergents are ratios of consecutive Fibonacci numbers.
    std::int64_t a = 1, b = 1;
    for (int i = 0; i < 30; ++i) {
        EXPECT_EQ(cf.convergents[i].first, a);
        EXPECT_EQ(cf.convergents[i].second, b);
        std::int64_t c = a + b;
        a = b;
        b = c;
    }
    EXPECT_FALSE(cf.rational);
}

TEST(ContinuedFraction, SilverIsAllTwos) {
    auto cf = continued_fraction(kSilver, 20);
    ASSERT_GE(cf.coefficients.size(), 20u);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(cf.coefficients[i], 2) << i;
}

TEST(ContinuedFraction, RationalTerminates) {
    auto half = continued_fraction(0.5, 10);
    EXPECT_TRUE(half.rational);
    ASSERT_EQ(half.coefficients.size(), 1u);
    EXPECT_EQ(half.coefficients[0], 2);

    auto c = continued_fraction(0.375, 10);
    EXPECT_TRUE(c.rational);
    EXPECT_EQ(c.coefficients, (std::vector<std::int64_t>{2, 1, 2}));
    EXPECT_EQ(c.convergents.back(), (std::pair<std::int64_t, std::int64_t>{3, 8}));
}

TEST(ContinuedFraction, ConvergentsAreBestApproximations) {
    for (double omega : {kGolden, kSilver, kInvSqrt2, 0.1234567}) {
        auto cf = continued_fraction(omega, 40);
        for (auto [p, q] : cf.convergents) {
            if (q > 1000) break;
            double dq = exact_dist(q, omega);
            EXPECT_NEAR(std::fabs(q * omega - p), dq, 1e-12);  // naive product loses ~q ulp
            for (std::int64_t r = 1; r < q; ++r) ASSERT_GT(exact_dist(r, omega), dq) << omega << " q=" << q << " r=" << r;
        }
    }
}

TEST(DiophantineGamma, GoldenAttainedAtOne) {
    auto prof = diophantine_gamma(kGolden, 10000);
    EXPECT_NEAR(prof.gamma_Q, 1.0 - kGolden, 1e-12);
    EXPECT_NEAR(prof.gamma_Q, 0.3819660, 1e-7);
    EXPECT_EQ(prof.attaining_q, 1);
    EXPECT_NEAR(prof.gamma_Q, brute_gamma(kGolden, 10000), 1e-15);
}

TEST(DiophantineGamma, FastPathMatchesBrute) {
    for (double omega : {kGolden, kSilver, kInvSqrt2, 0.2718281828}) {
        std::int64_t at = 0;
        double g = brute_gamma(omega, 10000, &at);
        auto fast = diophantine_gamma(omega, 10000);
        auto slow = diophantine_gamma_brute(omega, 10000);
        EXPECT_NEAR(fast.gamma_Q, g, 1e-13) << omega;
        EXPECT_NEAR(slow.gamma_Q, g, 1e-13) << omega;
        EXPECT_EQ(slow.attaining_q, at) << omega;
    }
}

TEST(DiophantineGamma, TableMatchesExactValues) {
    auto prof = diophantine_gamma_brute(kInvSqrt2, 2000);
    double m = INFINITY;
    for (auto [q, v] : prof.table) {
        EXPECT_NEAR(v, static_cast<double>(q) * q * exact_dist(q, kInvSqrt2), 1e-12);
        m = std::min(m, v);
    }
    EXPECT_DOUBLE_EQ(prof.gamma_Q, m);
}

TEST(DiophantineGamma, RationalIsZero) {
    auto prof = diophantine_gamma(0.5, 100);
    EXPECT_EQ(prof.gamma_Q, 0.0);
    EXPECT_EQ(prof.attaining_q, 2);
    auto thirds = diophantine_gamma_brute(0.375, 100);
    EXPECT_EQ(thirds.gamma_Q, 0.0);
    EXPECT_EQ(thirds.attaining_q, 8);
}

TEST(EntryTime, Examples) {
    ArcSet I({ArcInterval(Angle(0.61), 0.02)});
    EXPECT_EQ(first_entry_time(Angle(0.0), I, 0.618034, 100), 1);
    EXPECT_EQ(first_entry_time(Angle(0.62), I, 0.618034, 100), 0);
    EXPECT_EQ(first_entry_time(Angle(0.0), ArcSet(), kGolden, 100), kNoEntry);
    // Rational rotation by 1/2 from 0 only visits {0, 1/2}.
    EXPECT_EQ(first_entry_time(Angle(0.0), ArcSet({ArcInterval(Angle(0.2), 0.1)}), 0.5, 1000), kNoEntry);
}

TEST(EntryTime, ShiftProperty) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        ArcSet I({ArcInterval(Angle(U(rng)), 0.001 + 0.01 * U(rng))});
        Angle x(U(rng));
        if (I.contains(x)) continue;
        auto k = first_entry_time(x, I, kGolden, 100000);
        auto k1 = first_entry_time(rotate(x, 1, kGolden), I, kGolden, 100000);
        ASSERT_NE(k, kNoEntry);
        EXPECT_EQ(k, k1 + 1);
    }
}

TEST(ReturnGap, Examples) {
    EXPECT_EQ(return_gap_bound(0.38, 0.01), 6);
    EXPECT_EQ(return_gap_bound(0.38, 0.38), 1);
    EXPECT_EQ(return_gap_bound(0.38, 1.0), 0);
    EXPECT_THROW(return_gap_bound(0.0, 0.1), std::invalid_argument);
    EXPECT_THROW(return_gap_bound(0.3, -1.0), std::invalid_argument);
}

TEST(ReturnGap, ArcsDoNotReturnBeforeBound) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (double omega : {kGolden, kSilver, kInvSqrt2}) {
        const double gamma = diophantine_gamma(omega, 1'000'000).gamma_Q;
        for (int i = 0; i < 1000; ++i) {
            double delta = std::pow(10.0, -5.0 + 4.0 * U(rng));
            ArcInterval arc(Angle(U(rng)), delta * U(rng));
            std::int64_t n = return_gap_bound(gamma, delta);
            for (std::int64_t k = 1; k <= n; ++k) {
                ASSERT_FALSE(meets(arc, arc.translated(k, omega))) << omega << " k=" << k;
                ASSERT_FALSE(meets(arc, arc.translated(-k, omega))) << omega << " k=" << -k;
            }
            EXPECT_EQ(first_self_overlap(arc, omega, n), kNoEntry);
        }
    }
}

TEST(ReturnGap, FirstSelfOverlapMatchesScan) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        ArcInterval arc(Angle(U(rng)), 0.001 + 0.05 * U(rng));
        std::int64_t want = kNoEntry;
        for (std::int64_t k = 1; k <= 5000; ++k)
            if (meets(arc, arc.translated(k, kSilver))) {
                want = k;
                break;
            }
        EXPECT_EQ(first_self_overlap(arc, kSilver, 5000), want);
    }
}

TEST(ResonantWindow, ConstructedPairPasses) {
    const double gamma = diophantine_gamma(kGolden, 100000).gamma_Q;
    const double delta = 1e-4;
    ArcInterval I1(Angle(0.1), delta);
    ArcInterval I2 = ArcInterval(Angle(0.1 + 0.5 * delta), delta).translated(3, kGolden);
    auto rep = resonant_window_check(I1, I2, 3, kGolden, gamma);
    EXPECT_EQ(rep.N, static_cast<std::int64_t>(std::floor(std::sqrt(gamma / (2 * delta)))));
    EXPECT_EQ(rep.N, 43);
    ASSERT_TRUE(rep.hypotheses_ok);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.violations.empty());
    EXPECT_TRUE(rep.J_meets_I_in_I1);
    EXPECT_TRUE(rep.J_nu_meets_I_in_I2);

    // Independent scan of the window with the gap test.
    ArcInterval J(Angle(0.1), 1.5 * delta);
    for (std::int64_t k = 3 - rep.N; k <= rep.N; ++k) {
        if (k == 0 || k == 3) continue;
        ArcInterval Jk = J.translated(k, kGolden);
        EXPECT_FALSE(meets(Jk, I1) || meets(Jk, I2)) << k;
    }
}

TEST(ResonantWindow, RejectsBadHypotheses) {
    const double gamma = diophantine_gamma(kGolden, 100000).gamma_Q;
    const double delta = 1e-4;
    ArcInterval I1(Angle(0.1), delta);
    // nu beyond N.
    ArcInterval far = ArcInterval(Angle(0.1), delta).translated(60, kGolden);
    auto rep = resonant_window_check(I1, far, 60, kGolden, gamma);
    EXPECT_FALSE(rep.hypotheses_ok);
    EXPECT_FALSE(rep.pass);
    // No overlap with the shifted arc.
    auto rep2 = resonant_window_check(I1, ArcInterval(Angle(0.5), delta), 3, kGolden, gamma);
    EXPECT_FALSE(rep2.hypotheses_ok);
}

TEST(ClearTranslate, NoObstaclesGivesOne) {
    ArcSet J({ArcInterval(Angle(0.3), 1e-4)});
    auto r = find_clear_translate(J, {}, kGolden, 50);
    ASSERT_TRUE(r.k.has_value());
    EXPECT_EQ(*r.k, 1);
    EXPECT_EQ(r.admissible_count, 50);
}

TEST(ClearTranslate, BlockedPrefixMatchesBrute) {
    ArcInterval J(Angle(0.3), 1e-4);
    std::vector<ArcInterval> blocks;
    for (std::int64_t k = 1; k <= 5; ++k) blocks.push_back(J.translated(k, kGolden).padded(1e-5));
    TranslateObstacle ob{ArcSet(blocks), 200, 0};
    auto r = find_clear_translate(ArcSet({J}), {ob}, kGolden, 200);
    std::int64_t want = -1;
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= 200; ++k) {
        bool hit = false;
        for (const auto& b : blocks) hit = hit || meets(J.translated(k, kGolden), b);
        if (!hit) {
            ++count;
            if (want < 0) want = k;
        }
    }
    ASSERT_TRUE(r.k.has_value());
    EXPECT_GE(*r.k, 6);
    EXPECT_EQ(*r.k, want);
    EXPECT_EQ(r.admissible_count, count);
}

TEST(ClearTranslate, ZWidensTheBlock) {
    ArcInterval J(Angle(0.3), 1e-4);
    // Obstacle hit at t = 10 blocks k in [10 - Z, 10 + Z].
    TranslateObstacle ob{ArcSet({J.translated(10, kGolden)}), 100, 3};
    auto r = find_clear_translate_range(ArcSet({J}), {ob}, kGolden, 1, 100);
    ASSERT_EQ(r.blocked.size(), 1u);
    EXPECT_EQ(r.blocked[0], (std::vector<std::int64_t>{7, 8, 9, 10, 11, 12, 13}));
    EXPECT_EQ(r.admissible_count, 93);
}

TEST(ClearTranslate, AdmissibleFractionUnderHypotheses) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double gamma = diophantine_gamma(kGolden, 1'000'000).gamma_Q;
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const double dI = std::pow(10.0, -7.0 + U(rng));
        const std::size_t p = 1 + (i % 2);
        std::vector<ArcInterval> comps;
        for (std::size_t c = 0; c < p; ++c) comps.emplace_back(Angle(U(rng)), dI);
        ArcSet I(comps);
        if (I.size() != p) continue;
        const std::int64_t N = static_cast<std::int64_t>(std::sqrt(gamma / (3.0 * dI))) / 2;
        const std::int64_t Z = std::max<std::int64_t>(0, N / (40 * static_cast<std::int64_t>(p * p)) - 1);
        ArcSet J({ArcInterval(Angle(U(rng)), 0.5 * dI)});
        auto r = find_clear_translate(J, {TranslateObstacle{I, N, Z}}, kGolden, N);
        if (!r.hypotheses_ok) continue;
        ++checked;
        EXPECT_GE(2 * r.admissible_count, N) << i;
        EXPECT_TRUE(r.k.has_value());
    }
    EXPECT_GE(checked, 100);
}

TEST(ClearTranslate, ReportsBrokenHypotheses) {
    ArcSet I({ArcInterval(Angle(0.2), 0.05)});
    ArcSet J({ArcInterval(Angle(0.7), 0.1)});
    auto r = find_clear_translate(J, {TranslateObstacle{I, 100, 50}}, kGolden, 100);
    EXPECT_FALSE(r.hypotheses_ok);
    EXPECT_GE(r.hypothesis_failures.size(), 3u);
}
