#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpf/circle_map.hpp"
#include "qpf/skew_product.hpp"

namespace qpf {

struct ExperimentConfig {
    std::string map = "example1";  // system preset
    std::string g;                 // optional override of the base forcing preset
    std::string f;                 // optional override of the fiber preset
    double eps = 0.01;
    double rho = 2.0;
    double kappa = 2.5;
    double K = 10.0;    // arctanK
    double eta = 0.1;   // kkho
    std::string omega = "golden";
    double x0 = 0.0;
    double y0 = 0.0;
    std::int64_t steps = 100000;
    std::int64_t grid = 1000;
    std::int64_t hist = 50;
    std::int64_t depth = 200;
    std::uint64_t seed = 1;
    std::string mode = "practical";
    std::string out;
    std::string csv;

    void validate() const;
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

// golden, silver, invsqrt2 or a decimal literal.
double parse_omega(const std::string& s);

const std::vector<std::string>& system_presets();
CircleMap make_g_preset(const std::string& name);
CircleMap make_f_preset(const std::string& name, const ExperimentConfig& c);
std::string default_g(const std::string& system);
std::string default_f(const std::string& system);
SkewProductMap make_system(const ExperimentConfig& c);

// 17 significant digits, enough to round-trip binary64.
std::string fmt(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(&os) {}
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void row_n(std::int64_t n, const std::vector<double>& vals);

private:
    std::ostream* os_;
};

}  // namespace qpf
