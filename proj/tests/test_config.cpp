#include "vdisc/config.hpp"
#include "vdisc/errors.hpp"
#include "vdisc/report.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

using namespace vdisc;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is, "test.cfg");
}

std::string error_of(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("empty input gives defaults") {
    const RunConfig cfg = parse("");
    CHECK(cfg.params == CouplingParams{});
    CHECK(cfg.variant == Variant::Dyadic);
    CHECK(cfg.policy == DomainPolicy::Strict);
    CHECK_FALSE(cfg.schedule.tag.has_value());
    CHECK(cfg.pde.n_points == 64);
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("keys, comments and whitespace") {
    const RunConfig cfg = parse(
        "# header\n"
        "params.k_star = 1.9   # trailing\n"
        "\n"
        "  solver.tol_res=1e-11\n"
        "schedule.tag = nu\n"
        "schedule.j_hi = 12\n"
        "pde.n_points = 16\n"
        "output.dir = out/run1\n");
    CHECK(cfg.params.k_star == 1.9);
    CHECK(cfg.solver.tol_res == 1e-11);
    CHECK(cfg.schedule.tag == ScheduleTag::NuSeq);
    CHECK(cfg.schedule.j_hi == 12);
    CHECK(cfg.pde.n_points == 16);
    CHECK(cfg.output_dir == "out/run1");
}

TEST_CASE("errors name the line") {
    CHECK(error_of("params.k0 = 0.5\nparams.bogus = 1\n").find("test.cfg:2:") == 0);
    CHECK(error_of("params.k0 = 0.5\n\nparams.k0 = 0.4\n").find("test.cfg:3: duplicate") == 0);
    CHECK(error_of("params.k0 = abc\n").find("test.cfg:1:") == 0);
    CHECK(error_of("params.k0\n").find("test.cfg:1:") == 0);
    CHECK(error_of("params.k0 =\n").find("test.cfg:1:") == 0);
    CHECK(error_of("variant = spiral\n").find("test.cfg:1:") == 0);
    CHECK(error_of("schedule.tag = zeta\n").find("test.cfg:1:") == 0);
}

TEST_CASE("sin-log defaults k0 unless given") {
    CHECK(parse("variant = sinlog\n").params.k0 == 0.25);
    CHECK(parse("variant = sinlog\nparams.k0 = 0.1\n").params.k0 == 0.1);
    CHECK(parse("variant = dyadic\n").params.k0 == 0.5);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate_config(parse("params.k1 = 3\n")), ConfigError);
    CHECK_THROWS_AS(validate_config(parse("params.d = 0.3\n")), ConfigError);
    CHECK_NOTHROW(validate_config(parse("params.d = 0.3\nparams.relax_d = true\n")));
    CHECK_THROWS_AS(validate_config(parse("construct.x_min = 1\nconstruct.x_max = 0\n")), ConfigError);
    CHECK_THROWS_AS(validate_config(parse("solver.tol_root = 0\n")), ConfigError);
    CHECK_THROWS_AS(validate_config(parse("pde.n_points = 2\n")), ConfigError);
    CHECK_THROWS_AS(validate_config(parse("variant = sinlog\nparams.k0 = 0.7\n")), ConfigError);
}

TEST_CASE("make_triple follows the variant") {
    CHECK(make_triple(parse("")).variant() == Variant::Dyadic);
    CHECK(make_triple(parse("variant = sinlog\n")).variant() == Variant::SinLog);
}

TEST_CASE("missing file") {
    CHECK_THROWS(load_config("/nonexistent/dir/run.cfg"));
}

TEST_CASE("params round-trip through JSON") {
    const CouplingParams p{0.3, 1.1, 2.2, 1.8, 1.5};
    CHECK(params_from_json(params_to_json(p)) == p);
    CHECK(params_from_json(nlohmann::json::parse(params_to_json(p).dump())) == p);
}

TEST_CASE("doubles print with 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
