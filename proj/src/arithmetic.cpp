#include "qpf/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpf {

ContinuedFraction continued_fraction(double omega, int depth) {
    if (depth < 1 || depth > 40) throw std::invalid_argument("continued_fraction: depth must lie in [1, 40]");
    ContinuedFraction cf;
    double w = Angle(omega).value();
    if (w == 0.0) {
        cf.rational = true;
        return cf;
    }
    int e = 0;
    double m = std::frexp(w, &e);  // w = m * 2^e, m in [0.5, 1)
    const int shift = 53 - e;
    if (shift > 120) throw std::invalid_argument("continued_fraction: omega too small");
    using u128 = unsigned __int128;
    u128 num = static_cast<u128>(std::ldexp(m, 53));
    u128 den = static_cast<u128>(1) << shift;
    // omega = num/den < 1, so a_0 = 0; expand den/num.
    std::swap(num, den);
    std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
    constexpr std::int64_t kResolution = std::int64_t{1} << 26;
    while (static_cast<int>(cf.coefficients.size()) < depth) {
        if (den == 0) {
            cf.rational = true;
            break;
        }
        u128 a = num / den;
        u128 r = num - a * den;
        if (a > static_cast<u128>(kResolution)) {
            cf.precision_exhausted = true;
            break;
        }
        std::int64_t ai = static_cast<std::int64_t>(a);
        std::int64_t pn = ai * p + p_prev, qn = ai * q + q_prev;
        if (qn > kResolution) {
            cf.precision_exhausted = true;
            break;
        }
        cf.coefficients.push_back(ai);
        cf.convergents.emplace_back(pn, qn);
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        num = den;
        den = r;
    }
    if (!cf.rational && den == 0) cf.rational = true;
    return cf;
}

namespace {

void push_entry(DiophantineProfile& prof, std::int64_t q) {
    double d = dist_to_int(q, prof.omega);
    double v = static_cast<double>(q) * static_cast<double>(q) * d;
    prof.table.emplace_back(q, v);
    if (v < prof.gamma_Q) {
        prof.gamma_Q = v;
        prof.attaining_q = q;
    }
}

}  // namespace

DiophantineProfile diophantine_gamma(double omega, std::int64_t Q, std::int64_t small_q) {
    if (Q < 1) throw std::invalid_argument("diophantine_gamma: Q must be at least 1");
    DiophantineProfile prof;
    prof.omega = Angle(omega).value();
    prof.Q = Q;
    prof.gamma_Q = std::numeric_limits<double>::infinity();
    std::vector<std::int64_t> qs;
    for (std::int64_t q = 1; q <= std::min(Q, small_q); ++q) qs.push_back(q);
    auto cf = continued_fraction(prof.omega, 40);
    for (const auto& pq : cf.convergents)
        if (pq.second <= Q) qs.push_back(pq.second);
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    for (std::int64_t q : qs) push_entry(prof, q);
    return prof;
}

DiophantineProfile diophantine_gamma_brute(double omega, std::int64_t Q) {
    if (Q < 1) throw std::invalid_argument("diophantine_gamma: Q must be at least 1");
    DiophantineProfile prof;
    prof.omega = Angle(omega).value();
    prof.Q = Q;
    prof.gamma_Q = std::numeric_limits<double>::infinity();
    for (std::int64_t q = 1; q <= Q; ++q) push_entry(prof, q);
    return prof;
}

std::int64_t first_entry_time(Angle x, const ArcSet& I, double omega, std::int64_t cap) {
    if (I.empty()) return kNoEntry;
    for (std::int64_t k = 0; k <= cap; ++k)
        if (I.contains(rotate(x, k, omega))) return k;
    return kNoEntry;
}

std::int64_t return_gap_bound(double gamma, double delta) {
    if (!(gamma > 0.0 && delta > 0.0)) throw std::invalid_argument("return_gap_bound: gamma and delta must be positive");
    return static_cast<std::int64_t>(std::floor(std::sqrt(gamma / delta)));
}

std::int64_t first_self_overlap(const ArcInterval& arc, double omega, std::int64_t cap) {
    for (std::int64_t k = 1; k <= cap; ++k)
        if (dist_to_int(k, omega) <= arc.length) return k;
    return kNoEntry;
}

ResonantWindowReport resonant_window_check(const ArcInterval& I1, const ArcInterval& I2, std::int64_t nu,
                                           double omega, double gamma) {
    ResonantWindowReport rep;
    double delta = std::max(I1.length, I2.length);
    rep.N = delta > 0.0 ? static_cast<std::int64_t>(std::floor(std::sqrt(gamma / (2.0 * delta)))) : 0;
    ArcInterval shifted = I2.translated(-nu, omega);
    bool overlap = arcs_intersect(I1, shifted);
    if (!overlap) rep.reasons.push_back("I1 does not meet I2 - nu omega");
    if (!(nu > 0 && nu < rep.N)) rep.reasons.push_back("nu outside (0, N)");
    if (arcs_intersect(I1, I2)) rep.reasons.push_back("I1 and I2 not disjoint");
    rep.hypotheses_ok = rep.reasons.empty();
    if (!rep.hypotheses_ok) return rep;

    ArcInterval J = *arc_hull(I1, shifted);
    ArcSet I({I1, I2});
    for (std::int64_t k = nu - rep.N; k <= rep.N; ++k) {
        if (k == 0 || k == nu) continue;
        if (I.intersects(J.translated(k, omega))) rep.violations.push_back(k);
    }
    rep.J_meets_I_in_I1 = arc_contains(J, I1, 1e-15) && !arcs_intersect(J, I2);
    ArcInterval Jnu = J.translated(nu, omega);
    rep.J_nu_meets_I_in_I2 = arc_contains(Jnu, I2, 1e-15) && !arcs_intersect(Jnu, I1);
    rep.pass = rep.violations.empty() && rep.J_meets_I_in_I1 && rep.J_nu_meets_I_in_I2;
    return rep;
}

ClearTranslateResult find_clear_translate_range(const ArcSet& J, const std::vector<TranslateObstacle>& obstacles,
                                                double omega, std::int64_t k_lo, std::int64_t k_hi,
                                                bool certificate) {
    ClearTranslateResult res;
    res.N_max = k_hi;
    if (k_hi < k_lo) return res;
    const std::int64_t span = k_hi - k_lo + 1;
    std::vector<std::int32_t> cover(static_cast<std::size_t>(span) + 1, 0);
    res.blocked.resize(obstacles.size());
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
        const auto& ob = obstacles[j];
        std::vector<std::int32_t> mine(static_cast<std::size_t>(span) + 1, 0);
        // t with (J + t omega) meeting I_j blocks k in [t - Z, t + Z].
        for (std::int64_t t = k_lo - ob.Z; t <= k_hi + ob.Z; ++t) {
            if (!ob.I.intersects(J.translated(t, omega))) continue;
            std::int64_t a = std::max(k_lo, t - ob.Z) - k_lo;
            std::int64_t b = std::min(k_hi, t + ob.Z) - k_lo;
            if (a > b) continue;
            ++mine[static_cast<std::size_t>(a)];
            --mine[static_cast<std::size_t>(b) + 1];
        }
        std::int32_t run = 0;
        for (std::int64_t i = 0; i < span; ++i) {
            run += mine[static_cast<std::size_t>(i)];
            if (run > 0) {
                ++cover[static_cast<std::size_t>(i)];
                if (certificate) res.blocked[j].push_back(k_lo + i);
            }
        }
    }
    for (std::int64_t i = 0; i < span; ++i) {
        if (cover[static_cast<std::size_t>(i)] != 0) continue;
        ++res.admissible_count;
        if (!res.k) res.k = k_lo + i;
    }
    return res;
}

ClearTranslateResult find_clear_translate(const ArcSet& J, const std::vector<TranslateObstacle>& obstacles,
                                          double omega, std::int64_t N_max) {
    auto res = find_clear_translate_range(J, obstacles, omega, 1, N_max);
    std::size_t p = J.size();
    double min_obstacle = std::numeric_limits<double>::infinity();
    for (const auto& ob : obstacles) {
        p = std::max(p, ob.I.size());
        min_obstacle = std::min(min_obstacle, ob.I.min_length());
    }
    auto fail = [&](std::string why) {
        res.hypotheses_ok = false;
        res.hypothesis_failures.push_back(std::move(why));
    };
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
        const auto& ob = obstacles[j];
        if (j > 0 && !(obstacles[j - 1].N < ob.N)) fail("N_j not increasing at j=" + std::to_string(j));
        for (const auto& c : ob.I.components()) {
            std::int64_t hit = first_self_overlap(c.scaled(3.0), omega, ob.N);
            if (hit != kNoEntry) fail("3I separation fails at j=" + std::to_string(j) + ", m=" + std::to_string(hit));
        }
        double lhs = 10.0 * static_cast<double>(p * p) * static_cast<double>(ob.Z) / static_cast<double>(ob.N);
        if (!(lhs < std::pow(3.0, -static_cast<double>(j + 1)))) fail("10 p^2 Z/N bound fails at j=" + std::to_string(j));
    }
    if (!obstacles.empty() && !(J.max_length() < min_obstacle)) fail("J components not shorter than obstacles");
    if (!obstacles.empty() && obstacles.back().N != N_max) fail("N_max differs from the last N_j");
    return res;
}

}  // namespace qpf
