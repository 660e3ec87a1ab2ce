#include "qpf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qpf/arithmetic.hpp"
#include "qpf/cocycle.hpp"

namespace qpf {

void ExperimentConfig::validate() const {
    const auto& sys = system_presets();
    if (std::find(sys.begin(), sys.end(), map) == sys.end()) throw std::invalid_argument("unknown map preset '" + map + "'");
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    if (grid < 1 || hist < 1) throw std::invalid_argument("grid sizes must be positive");
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(rho > 0.0) || !(kappa > 1.0)) throw std::invalid_argument("rho must be positive and kappa above 1");
    if (mode != "paper" && mode != "practical") throw std::invalid_argument("mode must be paper or practical");
    parse_omega(omega);
    make_g_preset(g.empty() ? default_g(map) : g);
    make_f_preset(f.empty() ? default_f(map) : f, *this);
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = {{"map", c.map},     {"g", c.g},         {"f", c.f},         {"eps", c.eps},     {"rho", c.rho},
         {"kappa", c.kappa}, {"K", c.K},         {"eta", c.eta},     {"omega", c.omega}, {"x0", c.x0},
         {"y0", c.y0},       {"steps", c.steps}, {"grid", c.grid},   {"hist", c.hist},   {"depth", c.depth},
         {"seed", c.seed},   {"mode", c.mode},   {"out", c.out},     {"csv", c.csv}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    ExperimentConfig d;
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::vector<std::string> known = {"map",   "g",  "f",     "eps",  "rho",  "kappa", "K",
                                                       "eta",   "omega", "x0", "y0",  "steps", "grid", "hist",
                                                       "depth", "seed", "mode", "out", "csv"};
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("unknown config key '" + it.key() + "'");
    }
    c.map = j.value("map", d.map);
    c.g = j.value("g", d.g);
    c.f = j.value("f", d.f);
    c.eps = j.value("eps", d.eps);
    c.rho = j.value("rho", d.rho);
    c.kappa = j.value("kappa", d.kappa);
    c.K = j.value("K", d.K);
    c.eta = j.value("eta", d.eta);
    if (j.contains("omega") && j["omega"].is_number()) c.omega = fmt(j["omega"].get<double>());
    else c.omega = j.value("omega", d.omega);
    c.x0 = j.value("x0", d.x0);
    c.y0 = j.value("y0", d.y0);
    c.steps = j.value("steps", d.steps);
    c.grid = j.value("grid", d.grid);
    c.hist = j.value("hist", d.hist);
    c.depth = j.value("depth", d.depth);
    c.seed = j.value("seed", d.seed);
    c.mode = j.value("mode", d.mode);
    c.out = j.value("out", d.out);
    c.csv = j.value("csv", d.csv);
}

double parse_omega(const std::string& s) {
    if (s == "golden") return kGolden;
    if (s == "silver") return kSilver;
    if (s == "invsqrt2") return kInvSqrt2;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw std::invalid_argument("bad omega '" + s + "'");
    return v;
}

const std::vector<std::string>& system_presets() {
    static const std::vector<std::string> names = {"example1", "skew_shift", "kkho", "arctanK", "rotation"};
    return names;
}

std::string default_g(const std::string& system) {
    if (system == "arctanK") return "phi2";
    if (system == "rotation") return "zero";
    return "affine2";
}

std::string default_f(const std::string& system) {
    if (system == "skew_shift" || system == "rotation") return "identity";
    return system;
}

CircleMap make_g_preset(const std::string& name) {
    if (name == "affine2") return make_affine_g(2, 0.0);
    if (name == "affine1") return make_affine_g(1, 0.0);
    if (name == "phi2") return example2_phi().multiplied(2);
    if (name == "zero") return make_constant(0.0);
    throw std::invalid_argument("unknown g preset '" + name + "'");
}

CircleMap make_f_preset(const std::string& name, const ExperimentConfig& c) {
    if (name == "example1") return make_example1_f(c.eps).f;
    if (name == "identity") return make_identity();
    if (name == "arctanK") return make_projective_arctan_f(c.K);
    if (name == "kkho") return make_kkho_fiber(c.eta);
    throw std::invalid_argument("unknown f preset '" + name + "'");
}

SkewProductMap make_system(const ExperimentConfig& c) {
    return SkewProductMap(parse_omega(c.omega), make_g_preset(c.g.empty() ? default_g(c.map) : c.g),
                          make_f_preset(c.f.empty() ? default_f(c.map) : c.f, c));
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) *os_ << (i ? "," : "") << cols[i];
    *os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) *os_ << (i ? "," : "") << fmt(vals[i]);
    *os_ << '\n';
}

void CsvWriter::row_n(std::int64_t n, const std::vector<double>& vals) {
    *os_ << n;
    for (double v : vals) *os_ << ',' << fmt(v);
    *os_ << '\n';
}

}  // namespace qpf
