#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpf/angle.hpp"
#include "qpf/skew_product.hpp"

namespace qpf {

struct GraphEstimate {
    std::vector<Angle> grid;
    std::vector<Angle> values;
    std::int64_t depth = 0;
    std::vector<double> residuals;
    // Sum of log f' along each pullback after its first step.
    std::vector<double> contraction_log;
    bool contracting = true;  // false when the pullback shows no contraction
};

std::vector<Angle> uniform_grid(std::size_t n);

// u(x) ~ pi_2 T^depth(x - depth omega, seed)
Angle pullback_forward(const SkewProductMap& T, Angle x, std::int64_t depth, Angle seed,
                       double* contraction_log = nullptr);
// s(x) ~ pi_2 T^-depth(x + depth omega, seed)
Angle pullback_backward(const SkewProductMap& T, Angle x, std::int64_t depth, Angle seed,
                        double* contraction_log = nullptr);

GraphEstimate estimate_attractor(const SkewProductMap& T, const std::vector<Angle>& grid, std::int64_t depth,
                                 Angle seed);
GraphEstimate estimate_repeller(const SkewProductMap& T, const std::vector<Angle>& grid, std::int64_t depth,
                                Angle seed);

struct AttractionFit {
    double slope = 0.0;
    double intercept = 0.0;  // log C stand-in
    std::size_t points = 0;
    bool flagged = false;  // started on or near the repeller, or no usable window
};

// Orbits starting within 10 residuals of the repeller estimate are flagged.
AttractionFit attraction_rate(const SkewProductMap& T, TorusPoint p, std::int64_t n, std::int64_t depth,
                              Angle u_seed, Angle s_seed);

struct AttractionReport {
    std::vector<double> slopes;
    double bound = 0.0;
    double tolerance = 0.1;
    double median = 0.0;
    bool pass = false;
};

AttractionReport summarize_attraction(const std::vector<AttractionFit>& fits, double eps, double tolerance = 0.1);

enum class Observable { One, CosX, SinY, CosXPlusY, LogFPrime };

Observable parse_observable(const std::string& name);
double evaluate(Observable o, const SkewProductMap& T, TorusPoint p);
double birkhoff_average(const SkewProductMap& T, TorusPoint p, Observable o, std::int64_t n);

class EmpiricalMeasure {
public:
    EmpiricalMeasure(std::size_t nx, std::size_t ny);
    void add(TorusPoint p);
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total() const { return total_; }
    double coverage() const;

private:
    std::size_t nx_, ny_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

EmpiricalMeasure empirical_measure(const OrbitRecord& orbit, std::size_t nx, std::size_t ny);
// Forward (n > 0) or backward (n < 0) orbit histogram without storing points.
EmpiricalMeasure orbit_histogram(const SkewProductMap& T, TorusPoint p, std::int64_t n, std::size_t nx,
                                 std::size_t ny, std::int64_t burn_in = 0);
// Lebesgue measure on the base pushed to the graph of u (stratified samples).
EmpiricalMeasure graph_pushforward(const SkewProductMap& T, std::size_t samples, std::int64_t depth, Angle seed,
                                   std::size_t nx, std::size_t ny);
double measure_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

double minimality_coverage(const OrbitRecord& orbit, std::size_t nx, std::size_t ny);
// Coverage of one streamed orbit read off at increasing checkpoints.
std::vector<double> coverage_profile(const SkewProductMap& T, TorusPoint p, const std::vector<std::int64_t>& checkpoints,
                                     std::size_t nx, std::size_t ny);

}  // namespace qpf
