#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpf/angle.hpp"
#include "qpf/geometry.hpp"
#include "qpf/skew_product.hpp"

namespace qpf {

enum class ScaleMode { Paper, Practical };

ScaleMode parse_scale_mode(const std::string& s);
std::string to_string(ScaleMode m);

struct ScaleOptions {
    ScaleMode mode = ScaleMode::Practical;
    double rho = 2.0;
    double kappa = 2.5;
    std::int64_t separation_cap = 2'000'000;
    std::int64_t gamma_Q = 1'000'000;
    int max_stages = 3;
};

struct ResonanceScale {
    int n = 0;
    ArcSet J;
    ArcSet J_hat;
    std::int64_t K = 1;
    std::int64_t M = 1;
    std::optional<std::int64_t> nu;
    bool resonant = false;

    // Diagnostics.
    ArcSet I;                       // the critical set the scale was built from
    std::int64_t nu_max = 0;
    std::int64_t separation_gap = 0;  // first k at which a separation condition fails
    double pad = 0.0;
    bool separation_verified = false;
    bool placement_ok = true;
    std::vector<std::string> notes;
};

// Floor of eps^(-p) for paper-mode exponents, robust to rounding just below
// an integer. Throws std::overflow_error past int64.
std::int64_t paper_power_floor(double eps, double p);

// Smallest k >= 1 at which J, 3J^l (and in the resonant case J against I)
// stop being separated under rotation; cap + 1 if none up to cap.
std::int64_t separation_gap(const ArcSet& J, const ArcSet& I, std::optional<std::int64_t> nu, double omega,
                            std::int64_t cap);

ResonanceScale build_scale0(const SkewProductMap& T, const CriticalSets& sets, const ScaleOptions& opts);

// Stage n+1 from the critical set I_{n+1} found by the stage-n probe.
ResonanceScale next_scale(const SkewProductMap& T, const std::vector<ResonanceScale>& history,
                          const ArcSet& I_next, const CriticalSets& sets, const ScaleOptions& opts);

// phi_n on one component of J, parametrised by the offset d from its left
// end. Tracks exact lift increments against a single reference orbit.
class ProbeCurve {
public:
    ProbeCurve(const SkewProductMap& T, const ArcInterval& comp, std::int64_t M, std::int64_t K, Angle beta);
    double lift(double d) const;
    double log_derivative(double d) const;
    double length() const { return len_; }
    double start() const { return start_; }

private:
    const SkewProductMap* T_;
    double start_;
    double len_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    double y_end_;
};

enum class ProbeStatus { Ok, ComponentCount, NonMonotone, NoExpansion };
std::string to_string(ProbeStatus s);

struct ProbeSample {
    double x;
    double lift_phi;
};

struct ProbeResult {
    int stage = 0;
    ProbeStatus status = ProbeStatus::Ok;
    std::vector<std::vector<ProbeSample>> samples;  // per component of J
    ArcSet I_next;
    std::size_t component_count = 0;
    double boundary_gap = 0.0;
    double gap_bound = 0.0;  // bound from the base-case argument (0 when not applicable)
    std::pair<double, double> deriv_log_bounds{0.0, 0.0};
    std::pair<double, double> deriv_log_window{0.0, 0.0};  // (K/2, rho K) * log(1/eps)
    bool derivative_window_ok = false;
    bool covers_A1 = false;
    double cover_error = 0.0;
    bool monotone = true;
    bool precision_boundary = false;
    std::vector<std::string> notes;

    bool ok() const;
};

ProbeResult run_probe(const SkewProductMap& T, const ResonanceScale& scale, const CriticalSets& sets,
                      const ScaleOptions& opts = {});

struct StageRecord {
    ResonanceScale scale;
    ProbeResult probe;
};

struct ScaleLadder {
    std::vector<StageRecord> stages;
    std::string stop_reason;
};

ScaleLadder build_scales(const SkewProductMap& T, const CriticalSets& sets, const ScaleOptions& opts);

// Sum over stages of 2 M_j^{3/2} |J_j|.
double excluded_measure(const std::vector<ResonanceScale>& scales);

// x outside union_j union_{m=-M_j^{3/2}}^{K_j} (J_j + m omega).
bool in_good_set(Angle x, const std::vector<ResonanceScale>& scales, double omega);

// Scale integers and size bounds from the printed exponents, kept in log
// form because they outgrow binary64 after one stage.
struct PaperStage {
    double log_K = 0.0;
    double log_M = 0.0;
    double log_J_upper = 0.0;
    std::optional<std::int64_t> K;
    std::optional<std::int64_t> M;
};

struct PaperLadder {
    std::vector<PaperStage> stages;
    double excluded_bound = 0.0;
};

PaperLadder paper_scale_ladder(double eps, int stages, bool resonant);

}  // namespace qpf
