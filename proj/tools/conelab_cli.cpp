#include "conelab/competitor.hpp"
#include "conelab/cone.hpp"
#include "conelab/diagnostics.hpp"
#include "conelab/energy.hpp"
#include "conelab/errors.hpp"
#include "conelab/examples.hpp"
#include "conelab/fourier.hpp"
#include "conelab/io.hpp"
#include "conelab/minimize.hpp"
#include "conelab/monotonicity.hpp"
#include "conelab/polar_grid.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace {

using conelab::atomic_write;
using conelab::ConeParams;
using conelab::ConePoint;
using conelab::config_error;
using conelab::format_double;
using conelab::HeaderBlock;
using conelab::PolarGrid;
using conelab::ProblemSpec;
using conelab::ScalarField;
using conelab::usage_error;
using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception&) {
        throw usage_error(what + ": cannot parse number '" + tok + "'");
    }
}

long long parse_int(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(tok, &used);
        if (used != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception&) {
        throw usage_error(what + ": cannot parse integer '" + tok + "'");
    }
}

std::vector<double> parse_doubles(const std::string& text, std::size_t n,
                                  const std::string& what) {
    const auto parts = split_on(text, ',');
    if (parts.size() != n) {
        throw usage_error(what + ": expected " + std::to_string(n) +
                          " comma-separated values, got '" + text + "'");
    }
    std::vector<double> out;
    out.reserve(n);
    for (const auto& p : parts) {
        out.push_back(parse_double(p, what));
    }
    return out;
}

/// Boundary presets: "cos<m>" = cos(m theta), "sin<m>" = sin(m theta),
/// "const" = 1.
std::function<double(double)> make_boundary(const std::string& name) {
    if (name == "const" || name == "one") {
        return [](double) { return 1.0; };
    }
    if (name.size() > 3 &&
        (name.rfind("cos", 0) == 0 || name.rfind("sin", 0) == 0)) {
        const std::string digits = name.substr(3);
        if (std::all_of(digits.begin(), digits.end(),
                        [](unsigned char c) { return std::isdigit(c); })) {
            const double m =
                static_cast<double>(parse_int(digits, "--boundary"));
            if (name[0] == 'c') {
                return [m](double theta) { return std::cos(m * theta); };
            }
            return [m](double theta) { return std::sin(m * theta); };
        }
    }
    throw usage_error("unknown boundary preset '" + name +
                      "' (expected cos<m>, sin<m>, or const)");
}

int worker_count() {
    const char* env = std::getenv("CONELAB_WORKERS");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    const long long n = parse_int(env, "CONELAB_WORKERS");
    if (n < 1 || n > 256) {
        throw config_error("CONELAB_WORKERS must be in [1, 256]");
    }
    return static_cast<int>(n);
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) {
        throw usage_error("a sweep or scan needs at least one sample");
    }
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) {
        out[i] = a + (b - a) * i / (n - 1);
    }
    return out;
}

void print_json(const ordered_json& doc) {
    std::cout << doc.dump(2) << "\n";
}

/// Outer-ring linear interpolation of u, the boundary data that reproduces
/// the field's own trace.
std::function<double(double)> ring_boundary(const ScalarField& u) {
    const int nt = u.grid.n_theta;
    const double l = u.grid.cone.length;
    std::vector<double> ring(nt);
    for (int j = 0; j < nt; ++j) {
        ring[j] = u.at(u.grid.n_r, j);
    }
    return [ring, nt, l](double theta) {
        double s = theta / l * nt;
        double fl = std::floor(s);
        const double w = s - fl;
        int j0 = static_cast<int>(fl) % nt;
        if (j0 < 0) {
            j0 += nt;
        }
        const int j1 = (j0 + 1) % nt;
        return ring[j0] * (1.0 - w) + ring[j1] * w;
    };
}

// ---------------------------------------------------------------- geodesic

struct GeodesicCfg {
    double l = 0.0;
    std::string p;
    std::string q;
    std::string out;
};

int run_geodesic(const GeodesicCfg& cfg) {
    const ConeParams cone(cfg.l);
    const auto pv = parse_doubles(cfg.p, 2, "--p");
    const auto qv = parse_doubles(cfg.q, 2, "--q");
    const ConePoint p = conelab::make_cone_point(pv[0], pv[1], cone);
    const ConePoint q = conelab::make_cone_point(qv[0], qv[1], cone);
    const auto res = conelab::geodesic_distance(p, q, cone);

    HeaderBlock header;
    header.set("command", "geodesic");
    header.set("l", cfg.l);
    header.set("p", cfg.p);
    header.set("q", cfg.q);

    ordered_json doc = ordered_json::object();
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : header.entries()) {
        config[k] = v;
    }
    doc["config"] = std::move(config);
    doc["distance"] = res.distance;
    doc["through_vertex"] = res.through_vertex;
    print_json(doc);
    if (!cfg.out.empty()) {
        atomic_write(cfg.out, doc.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------- harmonic

struct HarmonicCfg {
    double l = 0.0;
    std::string coeffs;
    std::string scan;
    std::string out = "harmonic_scan.csv";
    std::string svg;
};

int run_harmonic(const HarmonicCfg& cfg) {
    const ConeParams cone(cfg.l);
    const auto scan_spec = parse_doubles(cfg.scan, 4, "--scan");
    const double alpha = scan_spec[0];
    const int n = static_cast<int>(scan_spec[3]);
    if (scan_spec[1] <= 0.0 || scan_spec[2] <= scan_spec[1]) {
        throw usage_error("--scan needs 0 < r0 < r1");
    }
    conelab::FourierHarmonic h{cone,
                               conelab::read_coefficients_csv(cfg.coeffs)};
    const auto radii = linspace(scan_spec[1], scan_spec[2], n);
    const auto scan = conelab::scaled_energy_scan(h, alpha, radii);

    HeaderBlock header;
    header.set("command", "harmonic");
    header.set("l", cfg.l);
    header.set("coeffs", cfg.coeffs);
    header.set("alpha", alpha);
    header.set("r0", scan_spec[1]);
    header.set("r1", scan_spec[2]);
    header.set("n", static_cast<long long>(n));
    conelab::write_scan_csv(cfg.out, scan, header);
    if (!cfg.svg.empty()) {
        conelab::write_scan_svg(cfg.svg, scan, "scaled Dirichlet average");
    }

    ordered_json doc = ordered_json::object();
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : header.entries()) {
        config[k] = v;
    }
    doc["config"] = std::move(config);
    doc["out"] = cfg.out;
    doc["monotone"] = scan.monotone();
    doc["violations"] = scan.violations.size();
    doc["first"] = scan.values.front();
    doc["last"] = scan.values.back();
    print_json(doc);
    return 0;
}

// ---------------------------------------------------------------- minimize

struct MinimizeCfg {
    double l = 0.0;
    double lambda_plus = 1.0;
    double lambda_minus = 0.0;
    std::string boundary;
    std::string grid;
    double radius = 1.0;
    int starts = 4;
    int max_sweeps = 400;
    std::string out = "minimize_out";
    std::string sweep;
};

HeaderBlock minimize_header(const MinimizeCfg& cfg, int nr, int nt) {
    HeaderBlock header;
    header.set("command", "minimize");
    header.set("l", cfg.l);
    header.set("lambda_plus", cfg.lambda_plus);
    header.set("lambda_minus", cfg.lambda_minus);
    header.set("boundary", cfg.boundary);
    header.set("n_r", static_cast<long long>(nr));
    header.set("n_theta", static_cast<long long>(nt));
    header.set("radius", cfg.radius);
    header.set("n_starts", static_cast<long long>(cfg.starts));
    header.set("max_sweeps", static_cast<long long>(cfg.max_sweeps));
    return header;
}

ordered_json run_minimize_single(const MinimizeCfg& cfg, bool* certified) {
    const auto gv = parse_doubles(cfg.grid, 2, "--grid");
    const int nr = static_cast<int>(gv[0]);
    const int nt = static_cast<int>(gv[1]);
    const ConeParams cone(cfg.l);
    const PolarGrid grid(cone, nr, nt, cfg.radius);
    const ProblemSpec spec(cone, cfg.lambda_plus, cfg.lambda_minus,
                           make_boundary(cfg.boundary));
    conelab::MinimizerOptions opts;
    opts.n_starts = cfg.starts;
    opts.max_sweeps = cfg.max_sweeps;
    const auto result = conelab::minimize_J(spec, grid, opts);

    const HeaderBlock header = minimize_header(cfg, nr, nt);
    conelab::write_minimizer_result(cfg.out, result, spec, header);

    ordered_json doc = ordered_json::object();
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : header.entries()) {
        config[k] = v;
    }
    doc["config"] = std::move(config);
    doc["out"] = cfg.out;
    doc["energy"] = result.energy;
    doc["vertex_distance"] = std::isfinite(result.vertex_distance)
                                 ? ordered_json(result.vertex_distance)
                                 : ordered_json("inf");
    doc["certified"] = result.certified;
    doc["sweeps"] = result.sweeps;
    doc["winner"] = result.starts.empty()
                        ? std::string("unknown")
                        : result.starts[result.winner].name;
    *certified = result.certified;
    return doc;
}

int run_minimize(const MinimizeCfg& cfg) {
    if (cfg.sweep.empty()) {
        bool certified = false;
        print_json(run_minimize_single(cfg, &certified));
        if (!certified) {
            std::cerr << "certificate failed: the descent found an improving "
                         "move at termination\n";
            return 4;
        }
        return 0;
    }

    // --sweep name=a:b:n fans out independent runs, one output directory per
    // parameter value.
    const auto eq = split_on(cfg.sweep, '=');
    if (eq.size() != 2) {
        throw usage_error("--sweep expects name=a:b:n");
    }
    const std::string& name = eq[0];
    const auto parts = split_on(eq[1], ':');
    if (parts.size() != 3) {
        throw usage_error("--sweep expects name=a:b:n");
    }
    const double a = parse_double(parts[0], "--sweep");
    const double b = parse_double(parts[1], "--sweep");
    const int n = static_cast<int>(parse_int(parts[2], "--sweep"));
    if (n < 1) {
        throw usage_error("--sweep needs n >= 1");
    }
    const auto values = linspace(a, b, n);

    std::vector<MinimizeCfg> jobs;
    jobs.reserve(values.size());
    for (double v : values) {
        MinimizeCfg job = cfg;
        job.sweep.clear();
        if (name == "l") {
            job.l = v;
        } else if (name == "lambda-plus") {
            job.lambda_plus = v;
        } else if (name == "lambda-minus") {
            job.lambda_minus = v;
        } else {
            throw usage_error("--sweep parameter must be l, lambda-plus or "
                              "lambda-minus");
        }
        job.out = cfg.out + "/" + name + "_" + format_double(v);
        jobs.push_back(std::move(job));
    }

    std::vector<ordered_json> docs(jobs.size());
    std::vector<char> certified(jobs.size(), 0);
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    const int nw = std::min<int>(worker_count(),
                                 static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) {
                    return;
                }
                try {
                    bool ok = false;
                    docs[i] = run_minimize_single(jobs[i], &ok);
                    certified[i] = ok ? 1 : 0;
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }

    ordered_json doc = ordered_json::array();
    bool all_certified = true;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        doc.push_back(std::move(docs[i]));
        all_certified = all_certified && certified[i];
    }
    print_json(doc);
    if (!all_certified) {
        std::cerr << "certificate failed on at least one sweep run\n";
        return 4;
    }
    return 0;
}

// -------------------------------------------------------------- competitor

struct CompetitorCfg {
    double l = 0.0;
    std::string c = "auto";
    int kmax = 4;
    double grid_h = 1.0 / 64;
    double b_cap = 0.0;
    double slack = 0.05;
    double check_R = 0.0;
    double field_h = 0.0;
    bool no_check = false;
    std::string out = "competitor_out";
};

int run_competitor(const CompetitorCfg& cfg) {
    double c = 0.0;
    if (cfg.c == "auto") {
        // Wide enough that the triangle contains the full target region
        // outside the wedge down to depth 3/5, with a factor-2 margin.
        c = std::max(3.0 * std::abs(std::tan(0.5 * cfg.l)), 2.0);
    } else {
        c = parse_double(cfg.c, "--c");
    }

    conelab::IterationOptions opts;
    opts.h = cfg.grid_h;
    opts.recurrence_slack = cfg.slack;
    opts.b_cap = cfg.b_cap <= 0.0 ? std::numeric_limits<double>::infinity()
                                  : cfg.b_cap;

    HeaderBlock header;
    header.set("command", "competitor");
    header.set("l", cfg.l);
    header.set("c", c);
    header.set("kmax", static_cast<long long>(cfg.kmax));
    header.set("grid_h", cfg.grid_h);
    header.set("b_cap", opts.b_cap);
    header.set("recurrence_slack", cfg.slack);

    const auto trace = conelab::run_iteration(c, cfg.kmax, opts);
    std::filesystem::create_directories(cfg.out);
    conelab::write_trace_json(std::filesystem::path(cfg.out) / "trace.json",
                              trace, header);
    conelab::write_trace_csv(
        std::filesystem::path(cfg.out) / "convergence.csv", trace, header);

    ordered_json doc = ordered_json::object();
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : header.entries()) {
        config[k] = v;
    }
    doc["config"] = std::move(config);
    doc["out"] = cfg.out;
    ordered_json fs = ordered_json::array();
    for (const auto& s : trace.steps) {
        fs.push_back(s.F);
    }
    doc["F"] = std::move(fs);
    doc["all_recurrence_ok"] = trace.all_recurrence_ok;

    const bool can_check = cfg.l < 2.0 * kPi - 1e-9;
    if (cfg.no_check || !can_check) {
        doc["improvement"] = "skipped";
    } else {
        const auto& last = trace.steps.back().set;
        const double reach = std::max(
            {last.horizontal_extent(), 1.0, c});
        const double R = cfg.check_R > 0.0 ? cfg.check_R : 1.2 * reach;
        const double hf = cfg.field_h > 0.0
                              ? cfg.field_h
                              : std::max(cfg.grid_h, 1.0 / 64);
        const auto report =
            conelab::strict_improvement_check(cfg.l, c, trace, R, hf);
        ordered_json imp = ordered_json::object();
        imp["target_area"] = report.target_area;
        imp["captured_area"] = report.captured_area;
        imp["F"] = report.F;
        imp["gap"] = report.gap;
        imp["energy_difference"] = report.energy_difference;
        imp["containment"] = report.containment;
        imp["success"] = report.success;
        imp["message"] = report.message;
        doc["improvement"] = std::move(imp);
    }
    print_json(doc);
    if (!trace.all_recurrence_ok) {
        std::cerr << "recurrence bound violated beyond the slack; see " +
                         cfg.out + "/convergence.csv\n";
        return 4;
    }
    return 0;
}

// ------------------------------------------------------------ monotonicity

struct MonotonicityCfg {
    std::string input;
    std::string which;
    std::string scan;
    double alpha = 0.0;
    std::string out;
    std::string svg;
};

int run_monotonicity(const MonotonicityCfg& cfg) {
    const std::filesystem::path in(cfg.input);
    const ScalarField u = conelab::read_field_csv(in / "field.csv");
    const PolarGrid& grid = u.grid;
    const double dr = grid.dr();

    // Scan radii snap to grid rings; the Weiss energy is only defined there
    // and the other two quantities are ring-resolved anyway.
    std::vector<int> rings;
    if (cfg.scan.empty()) {
        const int step = std::max(1, grid.n_r / 64);
        for (int i = step; i <= grid.n_r; i += step) {
            rings.push_back(i);
        }
    } else {
        const auto sv = parse_doubles(cfg.scan, 3, "--scan");
        const int n = static_cast<int>(sv[2]);
        for (double r : linspace(sv[0], sv[1], n)) {
            const int i = static_cast<int>(
                std::clamp<long long>(std::llround(r / dr), 1, grid.n_r));
            if (rings.empty() || rings.back() < i) {
                rings.push_back(i);
            }
        }
    }
    if (rings.empty()) {
        throw usage_error("--scan selected no grid rings");
    }
    std::vector<double> radii;
    radii.reserve(rings.size());
    for (int i : rings) {
        radii.push_back(dr * i);
    }

    conelab::MonotoneScan scan;
    double alpha = cfg.alpha;
    if (cfg.which == "weiss") {
        const auto summary = ordered_json::parse(
            conelab::read_text_file(in / "summary.json"));
        if (!summary.contains("problem")) {
            throw config_error("summary.json carries no problem block");
        }
        const auto& problem = summary["problem"];
        const ProblemSpec spec(grid.cone,
                               problem.at("lambda_plus").get<double>(),
                               problem.at("lambda_minus").get<double>(),
                               ring_boundary(u));
        scan = conelab::weiss_scan(u, spec, radii);
    } else if (cfg.which == "acf") {
        if (alpha <= 0.0) {
            alpha = 1.0;
        }
        ScalarField up = u;
        ScalarField un = u;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            up.values[i] = std::max(u.values[i], 0.0);
            un.values[i] = std::max(-u.values[i], 0.0);
        }
        scan = conelab::acf_phi(up, un, alpha, radii);
    } else if (cfg.which == "dirichlet") {
        if (alpha <= 0.0) {
            alpha = grid.cone.holder_exponent();
        }
        std::vector<double> values;
        values.reserve(radii.size());
        for (double r : radii) {
            values.push_back(std::pow(r, -2.0 * alpha) *
                             conelab::discrete_energy_parts(u, r).dirichlet);
        }
        scan = conelab::make_scan(radii, values, 1e-9, true);
    } else {
        throw usage_error("--which must be weiss, acf or dirichlet");
    }

    HeaderBlock header;
    header.set("command", "monotonicity");
    header.set("input", cfg.input);
    header.set("which", cfg.which);
    if (cfg.which != "weiss") {
        header.set("alpha", alpha);
    }
    const std::string out_path =
        cfg.out.empty() ? (in / ("scan_" + cfg.which + ".csv")).string()
                        : cfg.out;
    conelab::write_scan_csv(out_path, scan, header);
    if (!cfg.svg.empty()) {
        conelab::write_scan_svg(cfg.svg, scan, cfg.which + " scan");
    }

    ordered_json doc = ordered_json::object();
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : header.entries()) {
        config[k] = v;
    }
    doc["config"] = std::move(config);
    doc["out"] = out_path;
    doc["monotone"] = scan.monotone();
    doc["violations"] = scan.violations.size();
    doc["first"] = scan.values.front();
    doc["last"] = scan.values.back();
    print_json(doc);
    return 0;
}

// ----------------------------------------------------------- example-vertex

struct ExampleCfg {
    double l = 0.0;
    int phases = 2;
    std::string grid = "32,128";
    int perturbations = 60;
    std::uint64_t seed = 1;
    double min_length = 0.0;
    std::string out = "example_out";
};

int run_example(const ExampleCfg& cfg) {
    const auto gv = parse_doubles(cfg.grid, 2, "--grid");
    const ConeParams cone(cfg.l);
    const PolarGrid grid(cone, static_cast<int>(gv[0]),
                         static_cast<int>(gv[1]), 1.0);
    const ScalarField u = conelab::multi_phase_paste(
        grid, cfg.phases, cfg.min_length > 0.0 ? cfg.min_length : -1.0);
    const ProblemSpec spec(cone, 1.0, 0.0, ring_boundary(u));
    const auto report = conelab::verify_local_minimality(
        u, spec, cfg.perturbations, cfg.seed);

    HeaderBlock header;
    header.set("command", "example-vertex");
    header.set("l", cfg.l);
    header.set("phases", static_cast<long long>(cfg.phases));
    header.set("n_r", static_cast<long long>(grid.n_r));
    header.set("n_theta", static_cast<long long>(grid.n_theta));
    header.set("perturbations", static_cast<long long>(cfg.perturbations));
    header.set("seed", static_cast<long long>(cfg.seed));

    std::filesystem::create_directories(cfg.out);
    conelab::write_field_csv(std::filesystem::path(cfg.out) / "field.csv", u,
                             header);

    const auto fb = conelab::extract_free_boundary(u);
    ordered_json doc = ordered_json::object();
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : header.entries()) {
        config[k] = v;
    }
    doc["config"] = std::move(config);
    doc["out"] = cfg.out;
    doc["energy"] = report.energy;
    doc["move_delta"] = report.move_delta;
    doc["replacement_delta"] = report.replacement_delta;
    doc["minimize_best"] = report.minimize_best;
    doc["min_perturbation_gap"] = report.min_perturbation_gap;
    doc["max_lattice_defect"] = report.max_lattice_defect;
    doc["vertex_distance"] = std::isfinite(fb.vertex_distance)
                                 ? ordered_json(fb.vertex_distance)
                                 : ordered_json("inf");
    doc["certified"] = report.certified;
    atomic_write(std::filesystem::path(cfg.out) / "report.json",
                 doc.dump(2) + "\n");
    print_json(doc);
    if (!report.certified) {
        std::cerr << "certificate failed: the pasted field is not a verified "
                     "local minimizer at this resolution\n";
        return 4;
    }
    return 0;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"conelab: two-phase free boundary experiments on cones"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI key = value file; command-line flags override");
    int exit_code = 0;

    GeodesicCfg geo;
    auto* geo_cmd =
        app.add_subcommand("geodesic", "analytic geodesic distance");
    geo_cmd->add_option("--l", geo.l, "cone length")->required();
    geo_cmd->add_option("--p", geo.p, "first point r,theta")->required();
    geo_cmd->add_option("--q", geo.q, "second point r,theta")->required();
    geo_cmd->add_option("--out", geo.out, "write the JSON here too");
    geo_cmd->callback([&]() { exit_code = run_geodesic(geo); });

    HarmonicCfg har;
    auto* har_cmd = app.add_subcommand(
        "harmonic", "scaled Dirichlet average of a harmonic expansion");
    har_cmd->add_option("--l", har.l, "cone length")->required();
    har_cmd->add_option("--coeffs", har.coeffs, "coefficient CSV (k,a_k,b_k)")
        ->required();
    har_cmd->add_option("--scan", har.scan, "alpha,r0,r1,n")->required();
    har_cmd->add_option("--out", har.out, "scan CSV path");
    har_cmd->add_option("--svg", har.svg, "optional SVG plot path");
    har_cmd->callback([&]() { exit_code = run_harmonic(har); });

    MinimizeCfg mini;
    auto* min_cmd =
        app.add_subcommand("minimize", "discrete two-phase minimizer");
    min_cmd->add_option("--l", mini.l, "cone length")->required();
    min_cmd->add_option("--lambda-plus", mini.lambda_plus, "positive weight");
    min_cmd->add_option("--lambda-minus", mini.lambda_minus,
                        "negative weight");
    min_cmd->add_option("--boundary", mini.boundary,
                        "boundary preset (cos<m>, sin<m>, const)")
        ->required();
    min_cmd->add_option("--grid", mini.grid, "n_r,n_theta")->required();
    min_cmd->add_option("--radius", mini.radius, "ball radius");
    min_cmd->add_option("--starts", mini.starts, "number of descent starts");
    min_cmd->add_option("--max-sweeps", mini.max_sweeps, "sweep limit");
    min_cmd->add_option("--out", mini.out, "output directory");
    min_cmd->add_option("--sweep", mini.sweep,
                        "fan out over name=a:b:n (l, lambda-plus or "
                        "lambda-minus); CONELAB_WORKERS sets the thread "
                        "count");
    min_cmd->callback([&]() { exit_code = run_minimize(mini); });

    CompetitorCfg comp;
    auto* comp_cmd = app.add_subcommand(
        "competitor", "shrink-translate-truncate iteration and the strict "
                      "improvement check");
    comp_cmd->add_option("--l", comp.l, "cone length (< 2 pi enables the "
                                        "improvement check)")
        ->required();
    comp_cmd->add_option("--c", comp.c, "half width of the seed triangle, "
                                        "or auto");
    comp_cmd->add_option("--kmax", comp.kmax, "iteration count");
    comp_cmd->add_option("--grid-h", comp.grid_h, "grid step for F");
    comp_cmd->add_option("--b-cap", comp.b_cap,
                         "cap on the truncation half width (0 = none)");
    comp_cmd->add_option("--slack", comp.slack, "recurrence slack");
    comp_cmd->add_option("--check-R", comp.check_R,
                         "ball radius for the energy comparison (0 = auto)");
    comp_cmd->add_option("--field-h", comp.field_h,
                         "grid step for the energy comparison (0 = auto)");
    comp_cmd->add_flag("--no-check", comp.no_check,
                       "skip the strict improvement check");
    comp_cmd->add_option("--out", comp.out, "output directory");
    comp_cmd->callback([&]() { exit_code = run_competitor(comp); });

    MonotonicityCfg mono;
    auto* mono_cmd = app.add_subcommand(
        "monotonicity", "monotone quantity scans over a result directory");
    mono_cmd->add_option("--input", mono.input, "minimize result directory")
        ->required();
    mono_cmd->add_option("--which", mono.which, "weiss, acf or dirichlet")
        ->required();
    mono_cmd->add_option("--scan", mono.scan, "r0,r1,n (default: all rings)");
    mono_cmd->add_option("--alpha", mono.alpha,
                         "scaling exponent (acf/dirichlet)");
    mono_cmd->add_option("--out", mono.out, "scan CSV path");
    mono_cmd->add_option("--svg", mono.svg, "optional SVG plot path");
    mono_cmd->callback([&]() { exit_code = run_monotonicity(mono); });

    ExampleCfg ex;
    auto* ex_cmd = app.add_subcommand(
        "example-vertex", "pasted k-phase field and its minimality "
                          "certificate");
    ex_cmd->add_option("--l", ex.l, "cone length (>= 2 pi k by default)")
        ->required();
    ex_cmd->add_option("--phases", ex.phases, "number of positive sectors");
    ex_cmd->add_option("--grid", ex.grid, "n_r,n_theta");
    ex_cmd->add_option("--perturbations", ex.perturbations,
                       "random perturbation count");
    ex_cmd->add_option("--seed", ex.seed, "perturbation seed");
    ex_cmd->add_option("--min-length", ex.min_length,
                       "override the admissibility threshold");
    ex_cmd->add_option("--out", ex.out, "output directory");
    ex_cmd->callback([&]() { exit_code = run_example(ex); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return exit_code;
}

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const conelab::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const conelab::certificate_error& e) {
        std::cerr << "certificate error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
