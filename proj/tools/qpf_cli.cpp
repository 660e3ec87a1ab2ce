// qpf: batch front end for the forced circle map experiments.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpf/arithmetic.hpp"
#include "qpf/cocycle.hpp"
#include "qpf/config.hpp"
#include "qpf/geometry.hpp"
#include "qpf/graphs.hpp"
#include "qpf/scales.hpp"

using namespace qpf;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values; only the ones given on the command line override the config.
struct Flags {
    std::string config;
    ExperimentConfig v;
    std::vector<CLI::Option*> opts;
};

void add_common(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "JSON config file; flags override its values");
    auto& v = f.v;
    std::vector<CLI::Option*> added = {
        app.add_option("--map", v.map, "system preset: example1, skew_shift, kkho, arctanK, rotation"),
        app.add_option("--g", v.g, "base forcing preset: affine2, affine1, phi2, zero"),
        app.add_option("--f", v.f, "fiber preset: example1, identity, arctanK, kkho"),
        app.add_option("--eps", v.eps),
        app.add_option("--rho", v.rho),
        app.add_option("--kappa", v.kappa),
        app.add_option("--K", v.K, "arctanK / cocycle stretching"),
        app.add_option("--eta", v.eta, "kkho parameter"),
        app.add_option("--omega", v.omega, "golden, silver, invsqrt2 or a number"),
        app.add_option("--x0", v.x0),
        app.add_option("--y0", v.y0),
        app.add_option("--steps", v.steps),
        app.add_option("--grid", v.grid),
        app.add_option("--hist", v.hist, "histogram bins per axis"),
        app.add_option("--depth", v.depth, "pullback depth"),
        app.add_option("--seed", v.seed),
        app.add_option("--out", v.out, "JSON summary path (stdout if empty)"),
        app.add_option("--csv", v.csv, "CSV output path"),
        app.add_option("--mode", v.mode, "paper|practical"),
    };
    f.opts.insert(f.opts.end(), added.begin(), added.end());
}

ExperimentConfig resolve(const Flags& f) {
    ExperimentConfig c;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot read config '" + f.config + "'");
        try {
            c = json::parse(in).get<ExperimentConfig>();
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad config: ") + e.what());
        }
    }
    for (auto* o : f.opts) {
        if (o->count() == 0) continue;
        const std::string n = o->get_name();
        const auto& v = f.v;
        if (n == "--map") c.map = v.map;
        else if (n == "--g") c.g = v.g;
        else if (n == "--f") c.f = v.f;
        else if (n == "--eps") c.eps = v.eps;
        else if (n == "--rho") c.rho = v.rho;
        else if (n == "--kappa") c.kappa = v.kappa;
        else if (n == "--K") c.K = v.K;
        else if (n == "--eta") c.eta = v.eta;
        else if (n == "--omega") c.omega = v.omega;
        else if (n == "--x0") c.x0 = v.x0;
        else if (n == "--y0") c.y0 = v.y0;
        else if (n == "--steps") c.steps = v.steps;
        else if (n == "--grid") c.grid = v.grid;
        else if (n == "--hist") c.hist = v.hist;
        else if (n == "--depth") c.depth = v.depth;
        else if (n == "--seed") c.seed = v.seed;
        else if (n == "--out") c.out = v.out;
        else if (n == "--csv") c.csv = v.csv;
        else if (n == "--mode") c.mode = v.mode;
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    return os;
}

void emit(const ExperimentConfig& c, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    auto os = open_out(c.out);
    os << text;
}

json arc_json(const ArcInterval& a) { return json::array({a.start.value(), a.length}); }

json arcs_json(const ArcSet& s) {
    json j = json::array();
    for (const auto& c : s.components()) j.push_back(arc_json(c));
    return j;
}

std::optional<CriticalSets> try_sets(const SkewProductMap& T, const ExperimentConfig& c, std::string* why) {
    auto rep = verify_A2(T.f(), c.eps, c.rho);
    if (!rep.pass) {
        if (why) {
            *why = "(A2) fails";
            for (const auto& r : rep.reasons) *why += "; " + r;
        }
        return std::nullopt;
    }
    return build_critical_sets(T.f(), c.eps, rep.A, rep.B);
}

int cmd_verify(const ExperimentConfig& c) {
    auto T = make_system(c);
    json reasons = json::array();
    auto a1 = verify_A1(T.g(), c.kappa);
    for (const auto& r : a1.reasons) reasons.push_back("A1: " + r);
    auto a2 = verify_A2(T.f(), c.eps, c.rho);
    for (const auto& r : a2.reasons) reasons.push_back("A2: " + r);
    auto dio = diophantine_gamma(T.omega(), 10000);
    if (!(dio.gamma_Q > 0.0))
        reasons.push_back("omega: gamma=0 (rational at q=" + std::to_string(dio.attaining_q) + ")");
    const bool pass = a1.pass && a2.pass && dio.gamma_Q > 0.0;
    json j = {{"pass", pass},
              {"map_preset", c.map},
              {"omega", T.omega()},
              {"A1", {{"pass", a1.pass}, {"degree_ok", a1.degree_ok}, {"min_slope", a1.min_slope},
                      {"max_slope", a1.max_slope}, {"easy_case", a1.easy_case}}},
              {"A2", {{"pass", a2.pass}, {"A", arc_json(a2.A)}, {"B", arc_json(a2.B)},
                      {"complement_B", a2.complement_B}, {"image_outside_A", a2.image_outside_A},
                      {"max_slope_on_B", a2.max_slope_on_B}, {"min_slope_on_A", a2.min_slope_on_A}}},
              {"diophantine", {{"gamma_Q", dio.gamma_Q}, {"attaining_q", dio.attaining_q}, {"Q", dio.Q}}},
              {"reasons", reasons},
              {"seed", c.seed}};
    emit(c, j);
    return pass ? kExitPass : kExitCheck;
}

int cmd_orbit(const ExperimentConfig& c, const std::string& resume, const std::string& checkpoint) {
    auto T = make_system(c);
    std::int64_t n0 = 0;
    TorusPoint p{Angle(c.x0), Angle(c.y0)};
    if (!resume.empty()) {
        std::ifstream in(resume);
        if (!in) throw UsageError("cannot read checkpoint '" + resume + "'");
        json ck = json::parse(in);
        n0 = ck.at("n").get<std::int64_t>();
        p = {Angle(ck.at("x").get<double>()), Angle(ck.at("y").get<double>())};
    }
    std::ofstream file;
    if (!c.csv.empty()) file = open_out(c.csv);
    std::ostream& os = c.csv.empty() ? std::cout : file;
    CsvWriter w(os);
    w.header({"n", "x", "y", "logfp"});
    // A resumed run starts after the checkpointed state, which is already written.
    if (resume.empty()) w.row_n(0, {p.x.value(), p.y.value(), T.f().log_derivative(p.y.value())});
    for (std::int64_t k = 1; k <= c.steps; ++k) {
        p = T.step(p);
        w.row_n(n0 + k, {p.x.value(), p.y.value(), T.f().log_derivative(p.y.value())});
    }
    if (!os) throw std::runtime_error("write failed");
    const std::int64_t n_end = n0 + c.steps;
    if (!checkpoint.empty()) {
        auto ck = open_out(checkpoint);
        ck << json{{"n", n_end}, {"x", p.x.value()}, {"y", p.y.value()}, {"map_preset", c.map}, {"omega", c.omega}}
                  .dump(2)
           << "\n";
    }
    if (!c.out.empty())
        emit(c, {{"n", n_end}, {"rows", c.steps + (resume.empty() ? 1 : 0)}, {"map_preset", c.map},
                 {"omega", T.omega()}, {"seed", c.seed}});
    return kExitPass;
}

int cmd_lyapunov(const ExperimentConfig& c, int starts) {
    auto T = make_system(c);
    json j = {{"n", c.steps}, {"map_preset", c.map}, {"omega", T.omega()}, {"seed", c.seed}};
    if (starts <= 1) {
        auto prof = lyapunov_profile(T, {Angle(c.x0), Angle(c.y0)}, c.steps);
        j["lyapunov"] = prof.mean;
        j["tail_max"] = prof.tail_max;
        j["x0"] = c.x0;
        j["y0"] = c.y0;
    } else {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        json runs = json::array();
        double sum = 0.0;
        for (int i = 0; i < starts; ++i) {
            double x = U(rng), y = U(rng);
            double L = lyapunov_estimate(T, {Angle(x), Angle(y)}, c.steps);
            sum += L;
            runs.push_back({{"x0", x}, {"y0", y}, {"lyapunov", L}});
        }
        j["lyapunov"] = sum / starts;
        j["starts"] = runs;
    }
    emit(c, j);
    return kExitPass;
}

int cmd_graphs(const ExperimentConfig& c) {
    auto T = make_system(c);
    std::string why;
    auto sets = try_sets(T, c, &why);
    // Without (A2) there is no hole to seed from; any seed shows the lack of contraction.
    const Angle u_seed = sets ? sets->beta : Angle(0.0);
    const Angle s_seed = sets ? Angle(sets->A.mid()) : Angle(0.5);
    auto grid = uniform_grid(static_cast<std::size_t>(c.grid));
    auto u = estimate_attractor(T, grid, c.depth, u_seed);
    auto s = estimate_repeller(T, grid, c.depth, s_seed);
    double ru = 0.0, rs = 0.0, gap = INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ru = std::max(ru, u.residuals[i]);
        rs = std::max(rs, s.residuals[i]);
        gap = std::min(gap, circle_dist(u.values[i], s.values[i]));
    }
    if (!c.csv.empty()) {
        auto os = open_out(c.csv);
        CsvWriter w(os);
        w.header({"x", "u", "s", "residual_u", "residual_s"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            w.row({grid[i].value(), u.values[i].value(), s.values[i].value(), u.residuals[i], s.residuals[i]});
    }
    json j = {{"grid", c.grid},
              {"depth", c.depth},
              {"max_residual_u", ru},
              {"max_residual_s", rs},
              {"min_distance", gap},
              {"contracting_u", u.contracting},
              {"contracting_s", s.contracting},
              {"map_preset", c.map},
              {"omega", T.omega()},
              {"seed", c.seed}};
    if (!sets) j["note"] = why;
    emit(c, j);
    return kExitPass;
}

ScaleLadder ladder_for(const ExperimentConfig& c, const SkewProductMap& T, CriticalSets& sets) {
    std::string why;
    auto s = try_sets(T, c, &why);
    if (!s) throw CheckFailure(why);
    sets = *s;
    ScaleOptions opts;
    opts.mode = parse_scale_mode(c.mode);
    opts.rho = c.rho;
    opts.kappa = c.kappa;
    try {
        return build_scales(T, sets, opts);
    } catch (const AssumptionFailure& e) {
        throw CheckFailure(e.what());
    }
}

int cmd_scales(const ExperimentConfig& c) {
    auto T = make_system(c);
    CriticalSets sets;
    auto lad = ladder_for(c, T, sets);
    json stages = json::array();
    bool two = false;
    for (const auto& st : lad.stages) {
        const auto& s = st.scale;
        const auto& p = st.probe;
        two = two || (p.ok() && p.component_count == 2);
        stages.push_back({{"n", s.n},
                          {"J", arcs_json(s.J)},
                          {"J_hat", arcs_json(s.J_hat)},
                          {"K", s.K},
                          {"M", s.M},
                          {"nu", s.nu ? json(*s.nu) : json(nullptr)},
                          {"resonant", s.resonant},
                          {"separation_gap", s.separation_gap},
                          {"I_next", arcs_json(p.I_next)},
                          {"component_count", p.component_count},
                          {"probe_status", to_string(p.status)},
                          {"boundary_gap", p.boundary_gap},
                          {"cover_error", p.cover_error},
                          {"deriv_log_bounds", {p.deriv_log_bounds.first, p.deriv_log_bounds.second}},
                          {"deriv_log_window", {p.deriv_log_window.first, p.deriv_log_window.second}},
                          {"precision_boundary", p.precision_boundary},
                          {"notes", s.notes}});
    }
    std::vector<ResonanceScale> scales;
    for (const auto& st : lad.stages) scales.push_back(st.scale);
    emit(c, {{"mode", c.mode},
             {"stages", stages},
             {"stop_reason", lad.stop_reason},
             {"excluded_measure", excluded_measure(scales)},
             {"map_preset", c.map},
             {"omega", T.omega()},
             {"seed", c.seed}});
    return two ? kExitPass : kExitCheck;
}

int cmd_probe(const ExperimentConfig& c, int stage) {
    auto T = make_system(c);
    CriticalSets sets;
    auto lad = ladder_for(c, T, sets);
    if (stage < 0 || static_cast<std::size_t>(stage) >= lad.stages.size())
        throw CheckFailure("stage " + std::to_string(stage) + " not reached (" + lad.stop_reason + ")");
    const auto& p = lad.stages[static_cast<std::size_t>(stage)].probe;
    std::ofstream file;
    if (!c.csv.empty()) file = open_out(c.csv);
    std::ostream& os = c.csv.empty() ? std::cout : file;
    CsvWriter w(os);
    w.header({"component", "x", "lift_phi"});
    for (std::size_t i = 0; i < p.samples.size(); ++i)
        for (const auto& s : p.samples[i]) w.row_n(static_cast<std::int64_t>(i), {s.x, s.lift_phi});
    if (!c.out.empty())
        emit(c, {{"stage", stage}, {"status", to_string(p.status)}, {"I_next", arcs_json(p.I_next)},
                 {"ok", p.ok()}, {"seed", c.seed}});
    return p.ok() ? kExitPass : kExitCheck;
}

CocycleMap cocycle_preset(const std::string& name, double omega, double K, double E) {
    if (name == "constant_D") return constant_cocycle(omega, diag_matrix(K));
    if (name == "rotation_x") return rotation_x_cocycle(omega);
    if (name == "example2") return diag_rotation_cocycle(omega, K, example2_phi());
    if (name == "schrodinger")
        return schrodinger_cocycle(omega, [](double x) { return 2.0 * std::cos(2.0 * M_PI * x); }, E);
    throw UsageError("unknown cocycle preset '" + name + "'");
}

int cmd_cocycle(const ExperimentConfig& c, const std::string& preset, double E) {
    const double omega = parse_omega(c.omega);
    auto C = cocycle_preset(preset, omega, c.K, E);
    std::vector<double> trace;
    double L = lyapunov_L(C, c.x0, c.steps, c.csv.empty() ? nullptr : &trace);
    auto ar = angle_contraction_rate(C, c.x0, {1.0, 0.2}, {0.3, 1.0}, c.steps);
    if (!c.csv.empty()) {
        auto os = open_out(c.csv);
        CsvWriter w(os);
        w.header({"n", "log_norm"});
        for (std::size_t k = 0; k < trace.size(); ++k) w.row_n(static_cast<std::int64_t>(k + 1), {trace[k]});
    }
    emit(c, {{"L", L},
             {"angle_rate", ar.rate},
             {"two_L", ar.comparison},
             {"n", c.steps},
             {"K", c.K},
             {"preset", preset},
             {"omega", omega},
             {"seed", c.seed}});
    return kExitPass;
}

int cmd_dioph(const ExperimentConfig& c, std::int64_t Q, int depth) {
    const double omega = parse_omega(c.omega);
    auto prof = diophantine_gamma(omega, Q);
    auto cf = continued_fraction(omega, depth);
    json conv = json::array();
    for (auto [p, q] : cf.convergents) conv.push_back({p, q});
    emit(c, {{"omega", omega},
             {"gamma_Q", prof.gamma_Q},
             {"attaining_q", prof.attaining_q},
             {"Q", prof.Q},
             {"coefficients", cf.coefficients},
             {"convergents", conv},
             {"rational", cf.rational},
             {"seed", c.seed}});
    return prof.gamma_Q > 0.0 ? kExitPass : kExitCheck;
}

int cmd_measures(const ExperimentConfig& c, std::int64_t samples) {
    auto T = make_system(c);
    std::string why;
    auto sets = try_sets(T, c, &why);
    if (!sets) throw CheckFailure(why);
    const auto nb = static_cast<std::size_t>(c.hist);
    auto push = graph_pushforward(T, static_cast<std::size_t>(samples), c.depth, sets->beta, nb, nb);
    TorusPoint p{Angle(c.x0), Angle(c.y0)};
    auto fwd = orbit_histogram(T, p, c.steps, nb, nb);
    auto bwd = orbit_histogram(T, p, -c.steps, nb, nb);
    emit(c, {{"tv_forward_vs_pushforward", measure_distance(fwd, push)},
             {"tv_forward_vs_backward", measure_distance(fwd, bwd)},
             {"coverage_forward", fwd.coverage()},
             {"n", c.steps},
             {"hist", c.hist},
             {"map_preset", c.map},
             {"omega", T.omega()},
             {"seed", c.seed}});
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-periodically forced circle maps: orbits, exponents, invariant graphs, scales"};
    app.require_subcommand(1);
    Flags flags;

    auto* verify = app.add_subcommand("verify", "check (A1), (A2) and the Diophantine constant");
    auto* orbit = app.add_subcommand("orbit", "stream an orbit as CSV n,x,y,logfp");
    auto* lyap = app.add_subcommand("lyapunov", "fibered Lyapunov exponent");
    auto* graphs = app.add_subcommand("graphs", "pullback estimates of the attracting and repelling graphs");
    auto* scales = app.add_subcommand("scales", "inductive resonance scales");
    auto* probe = app.add_subcommand("probe", "sampled probe curve of one stage as CSV");
    auto* cocycle = app.add_subcommand("cocycle", "SL(2,R) cocycle exponent and angle rate");
    auto* dioph = app.add_subcommand("dioph", "continued fraction and Diophantine constant of omega");
    auto* measures = app.add_subcommand("measures", "distances between orbit histograms");
    for (auto* sc : {verify, orbit, lyap, graphs, scales, probe, cocycle, dioph, measures}) add_common(*sc, flags);

    std::string resume, checkpoint;
    orbit->add_option("--resume", resume, "continue from a checkpoint file");
    orbit->add_option("--checkpoint", checkpoint, "write the final state here");
    int starts = 1;
    lyap->add_option("--starts", starts, "random starts drawn from --seed (1 uses x0, y0)");
    int stage = 0;
    probe->add_option("--stage", stage);
    std::string preset = "example2";
    double E = 0.0;
    cocycle->add_option("--preset", preset, "constant_D, rotation_x, example2, schrodinger");
    cocycle->add_option("--E", E, "energy for the schrodinger preset");
    std::int64_t Q = 10000;
    int cf_depth = 30;
    dioph->add_option("--Q", Q);
    dioph->add_option("--depth-cf", cf_depth);
    std::int64_t samples = 100000;
    measures->add_option("--samples", samples, "pushforward samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        ExperimentConfig c = resolve(flags);
        if (verify->parsed()) return cmd_verify(c);
        if (orbit->parsed()) return cmd_orbit(c, resume, checkpoint);
        if (lyap->parsed()) return cmd_lyapunov(c, starts);
        if (graphs->parsed()) return cmd_graphs(c);
        if (scales->parsed()) return cmd_scales(c);
        if (probe->parsed()) return cmd_probe(c, stage);
        if (cocycle->parsed()) return cmd_cocycle(c, preset, E);
        if (dioph->parsed()) return cmd_dioph(c, Q, cf_depth);
        if (measures->parsed()) return cmd_measures(c, samples);
    } catch (const UsageError& e) {
        std::cerr << "qpf: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CheckFailure& e) {
        std::cerr << "qpf: check failed: " << e.what() << "\n";
        return kExitCheck;
    } catch (const std::exception& e) {
        std::cerr << "qpf: " << e.what() << "\n";
        return kExitCheck;
    }
    return kExitUsage;
}
