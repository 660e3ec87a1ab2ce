#include "qpf/cocycle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpf {

namespace {
constexpr double kPi = std::numbers::pi;

double cross(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }
double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }
}  // namespace

double Mat2::op_norm() const {
    const double s = a * a + b * b + c * c + d * d;
    const double dt = std::fabs(det());
    const double disc = std::sqrt(std::max(0.0, (s - 2.0 * dt) * (s + 2.0 * dt)));
    return std::sqrt(0.5 * (s + disc));
}

Mat2 rotation_matrix(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}

Mat2 diag_matrix(double K) { return {K, 0.0, 0.0, 1.0 / K}; }

CocycleMap::CocycleMap(double omega, Gen gen, std::string preset)
    : omega_(omega), gen_(std::move(gen)), preset_(std::move(preset)) {}

Mat2 CocycleMap::operator()(double x) const {
    return std::visit(
        [x](const auto& g) -> Mat2 {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, ConstantCocycle>) return g.m;
            else if constexpr (std::is_same_v<G, RotationXCocycle>) return rotation_matrix(2.0 * kPi * x);
            else if constexpr (std::is_same_v<G, DiagRotationCocycle>)
                return rotation_matrix(2.0 * kPi * g.phi.lift(x)) * diag_matrix(g.K);
            else return Mat2{0.0, 1.0, -1.0, g.q(x) - g.E};
        },
        gen_);
}

CocycleMap constant_cocycle(double omega, const Mat2& m) { return CocycleMap(omega, ConstantCocycle{m}, "constant"); }

CocycleMap rotation_x_cocycle(double omega) { return CocycleMap(omega, RotationXCocycle{}, "rotation_x"); }

CocycleMap diag_rotation_cocycle(double omega, double K, const CircleMap& phi) {
    if (!(K > 1.0)) throw std::invalid_argument("diag_rotation_cocycle: K must exceed 1");
    if (phi.degree() != 1) throw std::invalid_argument("diag_rotation_cocycle: phi must have degree 1");
    return CocycleMap(omega, DiagRotationCocycle{K, phi}, "diag_rotation");
}

CocycleMap schrodinger_cocycle(double omega, std::function<double(double)> q, double E) {
    return CocycleMap(omega, SchrodingerCocycle{std::move(q), E}, "schrodinger");
}

CircleMap example2_phi() { return CircleMap::sine(1, 0.0, 0.05 / (2.0 * kPi)); }

double CocycleProduct::log_norm() const {
    Mat2 r{1.0, tau, 0.0, std::exp(S2 - S1)};
    return S1 + std::log(r.op_norm());
}

CocycleProduct cocycle_product(const CocycleMap& C, double x0, std::int64_t n, std::vector<double>* trace) {
    if (n < 1) throw std::invalid_argument("cocycle_product: n must be positive");
    CocycleProduct P;
    for (std::int64_t k = 0; k < n; ++k) {
        const Mat2 B = C(rotate(Angle(x0), k, C.omega()).value()) * P.Q;
        Vec2 c1{B.a, B.c}, c2{B.b, B.d};
        const double p = std::hypot(c1.x, c1.y);
        Vec2 e1{c1.x / p, c1.y / p};
        const double q = dot(e1, c2);
        const double s = cross(e1, c2);
        if (!(s > 0.0)) throw std::domain_error("cocycle_product: matrix not orientation preserving");
        P.Q = Mat2{e1.x, -e1.y, e1.y, e1.x};
        P.tau += (q / p) * std::exp(P.S2 - P.S1);
        P.S1 += std::log(p);
        P.S2 += std::log(s);
        ++P.n;
        if (trace) trace->push_back(P.log_norm());
    }
    return P;
}

double lyapunov_L(const CocycleMap& C, double x0, std::int64_t n, std::vector<double>* trace) {
    return cocycle_product(C, x0, n, trace).log_norm() / static_cast<double>(n);
}

Angle project_vector(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) throw std::invalid_argument("project_vector: zero vector");
    return Angle(std::atan2(v.y, v.x) / kPi);
}

Vec2 unproject(Angle y) { return {std::cos(kPi * y.value()), std::sin(kPi * y.value())}; }

Angle projective_fiber(const CocycleMap& C, double x, Angle y) { return project_vector(C(x) * unproject(y)); }

SkewProductMap projectivized_skew_product(const CocycleMap& C) {
    if (std::holds_alternative<RotationXCocycle>(C.generator()))
        return SkewProductMap(C.omega(), make_affine_g(2, 0.0), make_identity());
    if (const auto* d = std::get_if<DiagRotationCocycle>(&C.generator()))
        return SkewProductMap(C.omega(), d->phi.multiplied(2), make_projective_arctan_f(d->K));
    throw std::invalid_argument("projectivized_skew_product: no closed form for preset " + C.preset());
}

AngleRate angle_contraction_rate(const CocycleMap& C, double x, Vec2 v, Vec2 w, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("angle_contraction_rate: n must be positive");
    const double nv = std::hypot(v.x, v.y), nw = std::hypot(w.x, w.y);
    if (nv == 0.0 || nw == 0.0) throw std::invalid_argument("angle_contraction_rate: zero vector");
    Vec2 e{v.x / nv, v.y / nv};
    const double p0 = dot(e, w), q0 = cross(e, w);
    if (q0 == 0.0) throw std::invalid_argument("angle_contraction_rate: v and w are parallel");
    const double log_area0 = std::log(nv) + std::log(std::fabs(q0));

    // w's line relative to e as t = tan(theta), stored as log|t| and sign.
    double lt = p0 == 0.0 ? INFINITY : std::log(std::fabs(q0)) - std::log(std::fabs(p0));
    double sg = (p0 == 0.0 || (q0 > 0) == (p0 > 0)) ? 1.0 : -1.0;
    double Lv = std::log(nv), Lw = std::log(nw);

    for (std::int64_t k = 0; k < n; ++k) {
        const Mat2 M = C(rotate(Angle(x), k, C.omega()).value());
        const Vec2 me = M * e;
        const Vec2 mp = M * Vec2{-e.y, e.x};
        const double a = std::hypot(me.x, me.y);
        const Vec2 e2{me.x / a, me.y / a};
        const double b = dot(e2, mp), c = cross(e2, mp);
        if (lt <= 0.0) {
            const double t = sg * std::exp(lt);
            const double den = a + b * t;
            Lw += std::log(std::hypot(den, c * t)) - 0.5 * std::log1p(t * t);
            lt = std::log(c) + lt - std::log(std::fabs(den));
            sg = den < 0 ? -sg : sg;
        } else {
            const double u = sg * std::exp(-lt);
            const double den = a * u + b;
            Lw += std::log(std::hypot(den, c)) - 0.5 * std::log1p(u * u);
            lt = std::log(c) - std::log(std::fabs(den));
            sg = den < 0 ? -1.0 : 1.0;
        }
        Lv += std::log(a);
        e = e2;
    }
    const double log_sin_direct = lt <= 0.0 ? lt - 0.5 * std::log1p(std::exp(2.0 * lt))
                                            : -0.5 * std::log1p(std::exp(-2.0 * lt));
    const double log_sin_area = log_area0 - Lv - Lw;
    AngleRate r;
    r.n = n;
    r.rate = -log_sin_area / static_cast<double>(n);
    r.direct_rate = -log_sin_direct / static_cast<double>(n);
    r.drift = std::fabs(log_sin_area - log_sin_direct);
    r.comparison = 2.0 * lyapunov_L(C, x, n);
    return r;
}

}  // namespace qpf
