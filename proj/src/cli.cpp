#include "vdisc/cli.hpp"

#include "vdisc/config.hpp"
#include "vdisc/errors.hpp"
#include "vdisc/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

namespace vdisc {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::optional<double> lambda;
    std::string schedule;
    std::optional<int> j_max;
};

std::ofstream open_output(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot write " + path.string());
    }
    return os;
}

std::vector<double> construct_abscissae(const RunConfig& cfg, const CouplingTriple& triple) {
    const auto& spec = cfg.construct;
    std::vector<double> xs;
    for (int i = 0; i < spec.samples; ++i) {
        xs.push_back(spec.x_min + (spec.x_max - spec.x_min) * i / (spec.samples - 1));
    }
    // self-similar kinks of eta near 0 and of h near d
    std::vector<double> kinks;
    if (triple.variant() == Variant::SinLog) {
        for (int n = 1; n <= 8; ++n) {
            kinks.push_back(-std::exp(-2.0 * std::numbers::pi * n));
            kinks.push_back(-std::exp(-2.0 * std::numbers::pi * n + 0.5 * std::numbers::pi));
        }
    } else {
        for (int j = 1; j <= 40; ++j) {
            kinks.push_back(-std::ldexp(1.0, -j));
            kinks.push_back(std::ldexp(triple.geometry().x_star, -j));
            kinks.push_back(-0.75 * std::ldexp(1.0, -j));
        }
    }
    for (double k : kinks) {
        for (double x : {k, k + triple.offset()}) {
            if (spec.x_min <= x && x <= spec.x_max) {
                xs.push_back(x);
            }
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

int cmd_construct(const RunConfig& cfg, const Options& opt, std::ostream& out) {
    const CouplingTriple triple = make_triple(cfg);
    const auto write = [&](std::ostream& os) {
        os << "x,psi,eta,h,f,g\n";
        for (double x : construct_abscissae(cfg, triple)) {
            const double psi = triple.variant() == Variant::Dyadic ? triple.psi(x)
                                                                   : std::numeric_limits<double>::quiet_NaN();
            os << format_double(x) << ',' << format_double(psi) << ',' << format_double(triple.eta(x)) << ','
               << format_double(triple.h(x)) << ',' << format_double(triple.f(x)) << ','
               << format_double(triple.g(x)) << '\n';
        }
    };
    if (opt.out_dir.empty()) {
        write(out);
    } else {
        auto os = open_output(opt.out_dir, "construct.csv");
        write(os);
    }
    return kExitOk;
}

nlohmann::json solution_json(const DiscountedSolution& s) {
    return {{"u", s.u},
            {"v", s.v},
            {"z", s.z},
            {"residual_u", s.residual_u},
            {"residual_v", s.residual_v},
            {"iterations", s.iterations}};
}

int cmd_solve(const RunConfig& cfg, const Options& opt, std::ostream& out) {
    if (!opt.lambda) {
        throw ConfigError("solve needs --lambda");
    }
    const CouplingTriple triple = make_triple(cfg);
    const double lambda = *opt.lambda;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParamDomainError("discount factor must be > 0 for the coupled system, got " + format_double(lambda));
    }
    const DiscountedSolution reduced = solve_reduced(triple, lambda, cfg.solver);
    const DiscountedSolution iterative = solve_system_iterative(triple, lambda, cfg.solver);
    const double discrepancy = std::max(std::fabs(reduced.u - iterative.u), std::fabs(reduced.v - iterative.v));

    if (opt.format == "csv") {
        out << "solver,lambda,u,v,z,residual_u,residual_v,iterations\n";
        for (const auto& [name, s] : {std::pair{"reduced", reduced}, std::pair{"iterative", iterative}}) {
            out << name << ',' << format_double(lambda) << ',' << format_double(s.u) << ',' << format_double(s.v)
                << ',' << format_double(s.z) << ',' << format_double(s.residual_u) << ','
                << format_double(s.residual_v) << ',' << s.iterations << '\n';
        }
    } else {
        const nlohmann::json j = {{"lambda", lambda},
                                  {"params", params_to_json(triple.params())},
                                  {"reduced", solution_json(reduced)},
                                  {"iterative", solution_json(iterative)},
                                  {"discrepancy", discrepancy}};
        out << j.dump(2) << '\n';
    }
    return kExitOk;
}

std::vector<DiscountSchedule> schedules_for(const RunConfig& cfg, const CouplingTriple& triple,
                                            const Options& opt) {
    std::optional<ScheduleTag> tag = cfg.schedule.tag;
    if (!opt.schedule.empty()) {
        if (opt.schedule == "pair") {
            tag.reset();
        } else {
            tag = parse_schedule_tag(opt.schedule);
            if (!tag) {
                throw ConfigError("unknown schedule '" + opt.schedule + "'");
            }
        }
    }
    const int j_hi = opt.j_max.value_or(cfg.schedule.j_hi);
    try {
        if (!tag) {
            auto pair = paired_schedules(triple, std::max(j_hi, 5));
            return pair;
        }
        return {make_schedule(triple.params(), *tag, cfg.schedule.j_lo, j_hi, cfg.schedule.range)};
    } catch (const ScheduleDomainError& e) {
        throw ConfigError(e.what());
    }
}

void emit_report(const SweepReport& report, const CouplingTriple& triple, const Options& opt, bool with_constancy,
                 const std::string& stem, std::ostream& out) {
    const nlohmann::json summary = sweep_summary(report, triple);
    if (!opt.out_dir.empty()) {
        auto csv = open_output(opt.out_dir, stem + ".csv");
        write_sweep_csv(csv, report, with_constancy);
        auto js = open_output(opt.out_dir, stem + "_summary.json");
        js << summary.dump(2) << '\n';
    }
    if (opt.format == "json") {
        out << summary.dump(2) << '\n';
    } else {
        write_sweep_csv(out, report, with_constancy);
    }
}

int cmd_sweep(const RunConfig& cfg, const Options& opt, std::ostream& out) {
    const CouplingTriple triple = make_triple(cfg);
    const auto schedules = schedules_for(cfg, triple, opt);
    emit_report(run_sweep(triple, schedules, cfg.solver), triple, opt, false, "sweep", out);
    return kExitOk;
}

int cmd_limits(const RunConfig& cfg, const Options& opt, std::ostream& out) {
    const CouplingTriple triple = make_triple(cfg);
    const int j_max = opt.j_max.value_or(cfg.limits.j_max);
    if (j_max < 5) {
        throw ConfigError("--j-max must be >= 5");
    }
    const NonconvergenceCertificate cert = verify_nonconvergence(triple, j_max, cfg.solver);
    const bool certified = cert.gap > cfg.limits.gap_min && cert.bounds_ok;
    nlohmann::json j = certificate_to_json(cert, triple);
    j["j_max"] = j_max;
    j["gap_min"] = cfg.limits.gap_min;
    j["certified"] = certified;
    if (!opt.out_dir.empty()) {
        auto os = open_output(opt.out_dir, "limits.json");
        os << j.dump(2) << '\n';
        auto csv = open_output(opt.out_dir, "limits.csv");
        write_sweep_csv(csv, cert.report);
    }
    out << j.dump(2) << '\n';
    return certified ? kExitOk : kExitCertification;
}

int cmd_pde(const RunConfig& cfg, const Options& opt, std::ostream& out) {
    const CouplingTriple triple = make_triple(cfg);
    const TorusGrid grid(cfg.pde.n_points);
    if (opt.lambda) {
        const double lambda = *opt.lambda;
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw ParamDomainError("discount factor must be > 0, got " + format_double(lambda));
        }
        const GridSolution sol = solve_pde(triple, lambda, grid, cfg.pde.solver);
        const DiscountedSolution algebraic = solve_reduced(triple, lambda, cfg.solver);
        const double discrepancy = std::max(std::fabs(sol.u_values.front() - algebraic.u),
                                            std::fabs(sol.v_values.front() - algebraic.v));
        const nlohmann::json j = {{"lambda", lambda},
                                  {"n_points", grid.size()},
                                  {"u", sol.u_values.front()},
                                  {"v", sol.v_values.front()},
                                  {"constancy", sol.constancy()},
                                  {"max_residual", sol.max_residual},
                                  {"iterations", sol.iterations},
                                  {"algebraic", {{"u", algebraic.u}, {"v", algebraic.v}}},
                                  {"discrepancy", discrepancy}};
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    const auto schedules = schedules_for(cfg, triple, opt);
    emit_report(pde_sweep(triple, schedules, grid, cfg.pde.solver), triple, opt, true, "pde", out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discounted two-equation monotone system: construction, solves, and lambda -> 0 sweeps", "vdisc"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--config", opt.config_path, "key=value configuration file");
    app.add_option("--out", opt.out_dir, "directory for CSV/JSON artifacts");
    app.add_option("--format", opt.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));

    auto* construct = app.add_subcommand("construct", "sample psi, eta, h, f, g as CSV");
    auto* solve = app.add_subcommand("solve", "solve the system at one discount factor");
    auto* sweep = app.add_subcommand("sweep", "solve along a discount schedule");
    auto* limits = app.add_subcommand("limits", "certify the two distinct limits of u");
    auto* pde = app.add_subcommand("pde", "grid check of the constant solution on the torus");
    for (auto* sub : {construct, solve, sweep, limits, pde}) {
        sub->fallthrough();
    }
    solve->add_option("--lambda", opt.lambda, "discount factor (> 0)")->required();
    pde->add_option("--lambda", opt.lambda, "single discount factor instead of a sweep");
    for (auto* sub : {sweep, pde}) {
        sub->add_option("--schedule", opt.schedule, "mu | nu | loguniform | sinlog2 | sinlog3 | pair");
    }
    for (auto* sub : {sweep, limits, pde}) {
        sub->add_option("--j-max", opt.j_max, "last schedule index");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (!opt.config_path.empty() && !std::ifstream(opt.config_path)) {
            throw IoError("cannot open config file '" + opt.config_path + "'");
        }
        RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
        if (opt.out_dir.empty()) {
            opt.out_dir = cfg.output_dir;
        }
        validate_config(cfg);
        if (*construct) {
            return cmd_construct(cfg, opt, out);
        }
        if (*solve) {
            return cmd_solve(cfg, opt, out);
        }
        if (*sweep) {
            return cmd_sweep(cfg, opt, out);
        }
        if (*limits) {
            return cmd_limits(cfg, opt, out);
        }
        return cmd_pde(cfg, opt, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParamDomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ScheduleDomainError& e) {
        err << "schedule error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace vdisc
