#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qpf/angle.hpp"

namespace qpf {

// Lift given by breakpoints b_0 < ... < b_{m-1} in [0,1), lift values at
// each breakpoint and one slope per piece [b_i, b_{i+1}).
struct PiecewiseLinearLift {
    std::vector<double> breakpoints;
    std::vector<double> lift_values;
    std::vector<double> slopes;
    std::vector<double> log_slopes;
    int degree = 1;
};

// t -> degree*t + shift + amplitude*sin(2 pi t)
struct SineLift {
    int degree = 1;
    double shift = 0.0;
    double amplitude = 0.0;
};

// Projective action of diag(K, 1/K): y -> atan(tan(pi y)/K^2)/pi.
struct ArctanLift {
    double K = 2.0;
    double K2 = 4.0;
};

class CircleMap {
public:
    using Rep = std::variant<PiecewiseLinearLift, SineLift, ArctanLift>;

    // Validates continuity, degree law and positive slopes.
    static CircleMap piecewise_linear(std::vector<double> breakpoints, std::vector<double> lift_values,
                                      std::vector<double> slopes, int degree);
    static CircleMap sine(int degree, double shift, double amplitude);
    static CircleMap projective_arctan(double K);

    double lift(double t) const;
    // lift(t + delta) - lift(t) computed without cancellation.
    double lift_increment(double t, double delta) const;
    Angle operator()(Angle y) const { return Angle(lift(y.value())); }
    // Right-hand slope at breakpoints.
    double derivative(double y) const;
    double log_derivative(double y) const;
    // The t with lift(t) = v; valid for any positive degree.
    double inverse_lift(double v) const;
    // Circle inverse; degree 1 only.
    Angle inverse(Angle y) const;

    // Index of the linear piece containing y, -1 for analytic maps.
    int piece_index(double y) const;
    int degree() const;
    double min_slope() const;
    double max_slope() const;
    bool is_piecewise_linear() const { return std::holds_alternative<PiecewiseLinearLift>(rep_); }
    const Rep& rep() const { return rep_; }
    // Breakpoints of the slope function (empty for analytic maps).
    std::vector<double> breakpoints() const;
    // Lift multiplied by an integer factor (used for 2*phi).
    CircleMap multiplied(int factor) const;
    std::string kind_name() const;

    friend bool operator==(const CircleMap& a, const CircleMap& b);

private:
    explicit CircleMap(Rep r) : rep_(std::move(r)) {}
    Rep rep_;
};

void to_json(nlohmann::json& j, const CircleMap& m);
CircleMap circle_map_from_json(const nlohmann::json& j);

struct MapParams {
    double eps = 0.01;
    double rho = 2.0;
    double kappa = 2.5;
    void validate() const;
};

struct Example1Map {
    CircleMap f;
    ArcInterval A;
    ArcInterval B;
    double a;
};

Example1Map make_example1_f(double eps);
CircleMap make_affine_g(int k, double t);
CircleMap make_identity();
// x -> c, degree 0 (base forcing only; not invertible).
CircleMap make_constant(double c);
CircleMap make_projective_arctan_f(double K);
CircleMap make_kkho_fiber(double eta);

struct A1Report {
    bool pass = false;
    bool degree_ok = false;
    bool easy_case = false;  // degree 1: allowed, no resonances
    double max_slope = 0.0;
    double min_slope = 0.0;
    std::vector<std::string> reasons;
};

A1Report verify_A1(const CircleMap& g, double kappa);

struct A2Report {
    bool pass = false;
    bool lipschitz_ok = false;
    bool witness_found = false;
    ArcInterval A;
    ArcInterval B;
    double complement_B = 1.0;   // |T \ B|
    double image_outside_A = 1.0;  // |f(T \ A)|
    double max_slope_on_B = 0.0;
    double min_slope_on_A = 0.0;
    std::vector<std::string> reasons;
};

A2Report verify_A2(const CircleMap& f, double eps, double rho);

}  // namespace qpf
