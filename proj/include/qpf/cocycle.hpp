#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "qpf/angle.hpp"
#include "qpf/circle_map.hpp"
#include "qpf/skew_product.hpp"

namespace qpf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
    double op_norm() const;
};

Mat2 rotation_matrix(double theta);
Mat2 diag_matrix(double K);

// Named cocycle generators x -> M(x).
struct ConstantCocycle {
    Mat2 m;
};
struct RotationXCocycle {};  // R_{2 pi x}
struct DiagRotationCocycle {
    double K;
    CircleMap phi;
};
struct SchrodingerCocycle {
    std::function<double(double)> q;
    double E;
};

class CocycleMap {
public:
    using Gen = std::variant<ConstantCocycle, RotationXCocycle, DiagRotationCocycle, SchrodingerCocycle>;

    CocycleMap(double omega, Gen gen, std::string preset);
    double omega() const { return omega_; }
    Mat2 operator()(double x) const;
    const Gen& generator() const { return gen_; }
    const std::string& preset() const { return preset_; }

private:
    double omega_;
    Gen gen_;
    std::string preset_;
};

CocycleMap constant_cocycle(double omega, const Mat2& m);
CocycleMap rotation_x_cocycle(double omega);
// R_{2 pi phi(x)} diag(K, 1/K); K > 1, phi of degree 1.
CocycleMap diag_rotation_cocycle(double omega, double K, const CircleMap& phi);
CocycleMap schrodinger_cocycle(double omega, std::function<double(double)> q, double E);
// phi(x) = x + 0.05 sin(2 pi x) / (2 pi)
CircleMap example2_phi();

// Matrix product M(x_{n-1})...M(x_0) kept as Q R with R upper triangular;
// log diagonal of R in S1, S2, scaled corner r12/r11 in tau.
struct CocycleProduct {
    std::int64_t n = 0;
    Mat2 Q;
    double S1 = 0.0;
    double S2 = 0.0;
    double tau = 0.0;
    double log_norm() const;
};

CocycleProduct cocycle_product(const CocycleMap& C, double x0, std::int64_t n,
                               std::vector<double>* log_norm_trace = nullptr);
double lyapunov_L(const CocycleMap& C, double x0, std::int64_t n, std::vector<double>* log_norm_trace = nullptr);

// v = (cos pi y, sin pi y)
Angle project_vector(Vec2 v);
Vec2 unproject(Angle y);
// y -> direction of M(x) v(y).
Angle projective_fiber(const CocycleMap& C, double x, Angle y);
// Circle skew product equivalent to the projective action, for the presets
// where it exists in closed form (rotation_x, diag_rotation).
SkewProductMap projectivized_skew_product(const CocycleMap& C);

struct AngleRate {
    double rate = 0.0;         // -(1/n) log sin theta_n from the area identity
    double direct_rate = 0.0;  // same from the tracked relative angle
    double drift = 0.0;        // |log sin theta_n| disagreement of the two
    double comparison = 0.0;   // 2 L along the same orbit
    std::int64_t n = 0;
};

AngleRate angle_contraction_rate(const CocycleMap& C, double x, Vec2 v, Vec2 w, std::int64_t n);

}  // namespace qpf
