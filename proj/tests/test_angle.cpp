#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "qpf/angle.hpp"
#include "qpf/arithmetic.hpp"

using namespace qpf;

TEST(Wrap, Examples) {
    EXPECT_DOUBLE_EQ(wrap(1.25).value(), 0.25);
    EXPECT_DOUBLE_EQ(wrap(-0.25).value(), 0.75);
    EXPECT_EQ(wrap(0.0).value(), 0.0);
}

TEST(Wrap, RejectsNonFinite) {
    EXPECT_THROW(wrap(std::numeric_limits<double>::infinity()), std::domain_error);
    EXPECT_THROW(Angle(std::nan("")), std::domain_error);
}

TEST(Wrap, StaysInUnitInterval) {
    // -1e-18 rounds to 1.0 under naive t - floor(t).
    EXPECT_LT(wrap(-1e-18).value(), 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        double t = U(rng);
        Angle a(t);
        ASSERT_GE(a.value(), 0.0);
        ASSERT_LT(a.value(), 1.0);
        double d = t - a.value();
        ASSERT_NEAR(d, std::nearbyint(d), 1e-9);
    }
}

TEST(CircleDist, Examples) {
    EXPECT_NEAR(circle_dist(Angle(0.9), Angle(0.1)), 0.2, 1e-15);
    EXPECT_EQ(circle_dist(Angle(0.3), Angle(0.3)), 0.0);
    EXPECT_EQ(circle_dist(Angle(0.0), Angle(0.5)), 0.5);
}

TEST(CircleDist, MetricProperties) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 10000; ++i) {
        Angle a(U(rng)), b(U(rng)), c(U(rng));
        double ab = circle_dist(a, b);
        ASSERT_GE(ab, 0.0);
        ASSERT_LE(ab, 0.5);
        ASSERT_EQ(ab, circle_dist(b, a));
        ASSERT_LE(circle_dist(a, c), ab + circle_dist(b, c) + 1e-15);
    }
}

TEST(ArcBetween, Examples) {
    auto a = arc_between(Angle(0.2), Angle(0.7));
    EXPECT_DOUBLE_EQ(a.start.value(), 0.2);
    EXPECT_DOUBLE_EQ(a.length, 0.5);
    auto b = arc_between(Angle(0.9), Angle(0.1));
    EXPECT_DOUBLE_EQ(b.start.value(), 0.9);
    EXPECT_NEAR(b.length, 0.2, 1e-15);
    auto c = arc_between(Angle(0.4), Angle(0.4));
    EXPECT_DOUBLE_EQ(c.start.value(), 0.4);
    EXPECT_EQ(c.length, 0.0);
}

TEST(ArcBetween, Complementarity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 10000; ++i) {
        Angle y(U(rng)), eta(U(rng));
        if (y == eta) continue;
        ASSERT_NEAR(arc_between(y, eta).length + arc_between(eta, y).length, 1.0, 1e-15);
    }
}

TEST(ArcInterval, WrappingContainment) {
    ArcInterval a(Angle(0.9), 0.25);
    EXPECT_TRUE(a.contains(Angle(0.95)));
    EXPECT_TRUE(a.contains(Angle(0.1)));
    EXPECT_TRUE(a.contains(Angle(0.15)));
    EXPECT_FALSE(a.contains(Angle(0.2)));
    EXPECT_FALSE(a.contains_open(Angle(0.9)));
    EXPECT_NEAR(a.end().value(), 0.15, 1e-15);
}

TEST(ArcInterval, PaddingClampsToCircle) {
    ArcInterval a(Angle(0.2), 0.5);
    auto p = a.padded(0.4);
    EXPECT_EQ(p.length, 1.0);
    auto q = a.padded(0.1);
    EXPECT_NEAR(q.start.value(), 0.1, 1e-15);
    EXPECT_NEAR(q.length, 0.7, 1e-15);
}

TEST(ArcIntersect, AgreesWithGapOracle) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0, 1), L(0, 0.3);
    for (int i = 0; i < 10000; ++i) {
        double s1 = U(rng), l1 = L(rng), s2 = U(rng), l2 = L(rng);
        auto gap = [](double from, double to) { return to - from - std::floor(to - from); };
        bool expect = gap(s1, s2) <= l1 || gap(s2, s1) <= l2;
        ASSERT_EQ(arcs_intersect(ArcInterval(Angle(s1), l1), ArcInterval(Angle(s2), l2)), expect);
    }
}

TEST(ArcSet, MergesAndMeasures) {
    ArcSet s({ArcInterval(Angle(0.95), 0.1), ArcInterval(Angle(0.02), 0.1), ArcInterval(Angle(0.5), 0.1)});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s.measure(), 0.27, 1e-15);
    EXPECT_TRUE(s.contains(Angle(0.0)));
    EXPECT_TRUE(s.contains(Angle(0.55)));
    EXPECT_FALSE(s.contains(Angle(0.3)));
}

TEST(ArcSet, ComponentsDisjointAfterMerge) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0, 1), L(0, 0.2);
    for (int t = 0; t < 500; ++t) {
        std::vector<ArcInterval> v;
        for (int i = 0; i < 6; ++i) v.emplace_back(Angle(U(rng)), L(rng));
        ArcSet s(v);
        ASSERT_LE(s.measure(), 1.0 + 1e-15);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) ASSERT_FALSE(arcs_intersect(s[i], s[j]));
        for (const auto& a : v) ASSERT_TRUE(s.contains(a.start));
    }
}

TEST(Rotate, LargeStepsKeepPrecision) {
    // Reference: exact Fibonacci identity q*omega - p = (-1)^(n+1) omega^n for the golden ratio.
    double omega = kGolden;
    Angle r = rotate(Angle(0.0), 832040, omega);
    double dist = std::min(r.value(), 1.0 - r.value());
    EXPECT_NEAR(dist, std::pow(omega, 30), 1e-10);
    EXPECT_NEAR(dist_to_int(832040, omega), std::pow(omega, 30), 1e-10);
}
