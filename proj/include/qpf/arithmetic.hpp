#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpf/angle.hpp"

namespace qpf {

inline const double kGolden = 0.6180339887498949;    // (sqrt 5 - 1)/2
inline const double kSilver = 0.41421356237309515;   // sqrt 2 - 1
inline const double kInvSqrt2 = 0.7071067811865476;  // 1/sqrt 2

struct ContinuedFraction {
    std::vector<std::int64_t> coefficients;  // a_1, a_2, ... (omega in (0,1))
    std::vector<std::pair<std::int64_t, std::int64_t>> convergents;  // (p, q)
    bool rational = false;             // expansion terminated
    bool precision_exhausted = false;  // denominators beyond binary64 resolution
};

// Expansion of the binary64 value omega, computed exactly on its dyadic
// representation.
ContinuedFraction continued_fraction(double omega, int depth);

struct DiophantineProfile {
    double omega = 0.0;
    std::vector<std::pair<std::int64_t, double>> table;  // (q, q^2 dist(q omega, Z))
    double gamma_Q = 0.0;
    std::int64_t attaining_q = 1;
    std::int64_t Q = 1;
};

// Fast path: convergent denominators up to Q plus every q <= small_q.
DiophantineProfile diophantine_gamma(double omega, std::int64_t Q, std::int64_t small_q = 1000);
// Every q in [1, Q].
DiophantineProfile diophantine_gamma_brute(double omega, std::int64_t Q);

constexpr std::int64_t kNoEntry = -1;

std::int64_t first_entry_time(Angle x, const ArcSet& I, double omega, std::int64_t cap);

std::int64_t return_gap_bound(double gamma, double delta);

// Smallest k >= 1 with (arc + k omega) meeting arc, or kNoEntry past cap.
std::int64_t first_self_overlap(const ArcInterval& arc, double omega, std::int64_t cap);

struct ResonantWindowReport {
    bool hypotheses_ok = false;
    bool pass = false;
    std::int64_t N = 0;
    std::vector<std::int64_t> violations;  // k in the window where (J + k omega) meets I
    bool J_meets_I_in_I1 = false;
    bool J_nu_meets_I_in_I2 = false;
    std::vector<std::string> reasons;
};

ResonantWindowReport resonant_window_check(const ArcInterval& I1, const ArcInterval& I2, std::int64_t nu,
                                           double omega, double gamma);

struct TranslateObstacle {
    ArcSet I;
    std::int64_t N = 0;
    std::int64_t Z = 0;
};

struct ClearTranslateResult {
    std::optional<std::int64_t> k;
    std::int64_t admissible_count = 0;
    std::int64_t N_max = 0;
    bool hypotheses_ok = true;
    std::vector<std::string> hypothesis_failures;
    // Blocked k per obstacle.
    std::vector<std::vector<std::int64_t>> blocked;
};

// Scans k in [k_lo, k_hi] for (J + k omega) disjoint from every
// union_{|m| <= Z_j} (I_j + m omega).
ClearTranslateResult find_clear_translate_range(const ArcSet& J, const std::vector<TranslateObstacle>& obstacles,
                                                double omega, std::int64_t k_lo, std::int64_t k_hi,
                                                bool certificate = true);

ClearTranslateResult find_clear_translate(const ArcSet& J, const std::vector<TranslateObstacle>& obstacles,
                                          double omega, std::int64_t N_max);

}  // namespace qpf
