#pragma once

#include "vdisc/coupling.hpp"
#include "vdisc/experiment.hpp"
#include "vdisc/pde_verifier.hpp"
#include "vdisc/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace vdisc {

struct ScheduleSpec {
    std::optional<ScheduleTag> tag;  ///< nullopt: the variant's two paired families
    int j_lo = 1;
    int j_hi = 40;
    LambdaRange range{};
};

struct ConstructSpec {
    double x_min = -1.5;
    double x_max = 0.5;
    int samples = 2001;
};

struct LimitsSpec {
    int j_max = 40;
    double gap_min = 1e-3;
};

struct PdeSpec {
    std::size_t n_points = 64;
    PdeConfig solver{};
};

struct RunConfig {
    CouplingParams params{};
    Variant variant = Variant::Dyadic;
    DomainPolicy policy = DomainPolicy::Strict;
    SolverConfig solver{};
    ScheduleSpec schedule{};
    ConstructSpec construct{};
    LimitsSpec limits{};
    PdeSpec pde{};
    std::string output_dir;
};

/// Parses flat `section.key = value` lines; `#` starts a comment. Unknown or
/// repeated keys and malformed values raise ConfigError naming source:line.
///
/// The sin-log variant defaults k0 to 0.25 unless params.k0 is given.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Checks every module invariant; throws ConfigError.
void validate_config(const RunConfig& cfg);

CouplingTriple make_triple(const RunConfig& cfg);

}  // namespace vdisc
