#include "vdisc/config.hpp"

#include "vdisc/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <string_view>

namespace vdisc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw std::invalid_argument("expected true/false, got '" + std::string(text) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"params.k0", [](RunConfig& c, std::string_view v) { c.params.k0 = parse_number<double>(v); }},
        {"params.k1", [](RunConfig& c, std::string_view v) { c.params.k1 = parse_number<double>(v); }},
        {"params.k2", [](RunConfig& c, std::string_view v) { c.params.k2 = parse_number<double>(v); }},
        {"params.k_star", [](RunConfig& c, std::string_view v) { c.params.k_star = parse_number<double>(v); }},
        {"params.d", [](RunConfig& c, std::string_view v) { c.params.d = parse_number<double>(v); }},
        {"params.relax_d",
         [](RunConfig& c, std::string_view v) {
             c.policy = parse_bool(v) ? DomainPolicy::Relaxed : DomainPolicy::Strict;
         }},
        {"variant",
         [](RunConfig& c, std::string_view v) {
             if (v == "dyadic") {
                 c.variant = Variant::Dyadic;
             } else if (v == "sinlog") {
                 c.variant = Variant::SinLog;
             } else {
                 throw std::invalid_argument("variant must be dyadic or sinlog, got '" + std::string(v) + "'");
             }
         }},
        {"solver.tol_root", [](RunConfig& c, std::string_view v) { c.solver.tol_root = parse_number<double>(v); }},
        {"solver.tol_res", [](RunConfig& c, std::string_view v) { c.solver.tol_res = parse_number<double>(v); }},
        {"solver.max_iter", [](RunConfig& c, std::string_view v) { c.solver.max_iter = parse_number<int>(v); }},
        {"solver.bracket_expand",
         [](RunConfig& c, std::string_view v) { c.solver.bracket_expand = parse_number<double>(v); }},
        {"solver.max_fixed_point_iter",
         [](RunConfig& c, std::string_view v) { c.solver.max_fixed_point_iter = parse_number<int>(v); }},
        {"schedule.tag",
         [](RunConfig& c, std::string_view v) {
             if (v == "pair") {
                 c.schedule.tag.reset();
                 return;
             }
             const auto tag = parse_schedule_tag(v);
             if (!tag) {
                 throw std::invalid_argument("unknown schedule '" + std::string(v) + "'");
             }
             c.schedule.tag = *tag;
         }},
        {"schedule.j_lo", [](RunConfig& c, std::string_view v) { c.schedule.j_lo = parse_number<int>(v); }},
        {"schedule.j_hi", [](RunConfig& c, std::string_view v) { c.schedule.j_hi = parse_number<int>(v); }},
        {"schedule.lambda_min",
         [](RunConfig& c, std::string_view v) { c.schedule.range.min = parse_number<double>(v); }},
        {"schedule.lambda_max",
         [](RunConfig& c, std::string_view v) { c.schedule.range.max = parse_number<double>(v); }},
        {"construct.x_min", [](RunConfig& c, std::string_view v) { c.construct.x_min = parse_number<double>(v); }},
        {"construct.x_max", [](RunConfig& c, std::string_view v) { c.construct.x_max = parse_number<double>(v); }},
        {"construct.samples", [](RunConfig& c, std::string_view v) { c.construct.samples = parse_number<int>(v); }},
        {"limits.j_max", [](RunConfig& c, std::string_view v) { c.limits.j_max = parse_number<int>(v); }},
        {"limits.gap_min", [](RunConfig& c, std::string_view v) { c.limits.gap_min = parse_number<double>(v); }},
        {"pde.n_points", [](RunConfig& c, std::string_view v) { c.pde.n_points = parse_number<std::size_t>(v); }},
        {"pde.tol_res", [](RunConfig& c, std::string_view v) { c.pde.solver.tol_res = parse_number<double>(v); }},
        {"pde.tol_err", [](RunConfig& c, std::string_view v) { c.pde.solver.tol_err = parse_number<double>(v); }},
        {"pde.max_iter", [](RunConfig& c, std::string_view v) { c.pde.solver.max_iter = parse_number<int>(v); }},
        {"pde.theta_min", [](RunConfig& c, std::string_view v) { c.pde.solver.theta_min = parse_number<double>(v); }},
        {"output.dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
    };
    return table;
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& source) {
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + "expected key=value");
        }
        const std::string_view key = trim(text.substr(0, eq));
        const std::string_view value = trim(text.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(where + "unknown key '" + std::string(key) + "'");
        }
        if (!seen.insert(std::string(key)).second) {
            throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
        }
        if (value.empty()) {
            throw ConfigError(where + "empty value for '" + std::string(key) + "'");
        }
        try {
            it->second(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + std::string(key) + ": " + e.what());
        }
    }
    if (cfg.variant == Variant::SinLog && !seen.contains("params.k0")) {
        cfg.params.k0 = 0.25;
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_config(in, path);
}

void validate_config(const RunConfig& cfg) {
    try {
        (void)make_triple(cfg);
        cfg.solver.validate();
        cfg.pde.solver.validate();
        (void)TorusGrid(cfg.pde.n_points);
    } catch (const ParamDomainError& e) {
        throw ConfigError(e.what());
    }
    if (cfg.schedule.j_lo < 1 || cfg.schedule.j_hi < cfg.schedule.j_lo) {
        throw ConfigError("schedule needs 1 <= j_lo <= j_hi");
    }
    if (!(cfg.schedule.range.min > 0.0 && cfg.schedule.range.min < cfg.schedule.range.max)) {
        throw ConfigError("schedule needs 0 < lambda_min < lambda_max");
    }
    if (!(cfg.construct.x_min < cfg.construct.x_max) || cfg.construct.samples < 2) {
        throw ConfigError("construct range is empty (need x_min < x_max and samples >= 2)");
    }
    if (cfg.limits.j_max < 5) {
        throw ConfigError("limits.j_max must be >= 5");
    }
    if (!(cfg.limits.gap_min >= 0.0)) {
        throw ConfigError("limits.gap_min must be >= 0");
    }
}

CouplingTriple make_triple(const RunConfig& cfg) {
    switch (cfg.variant) {
        case Variant::SinLog: return CouplingTriple::sin_log(cfg.params, cfg.policy);
        case Variant::Dyadic:
        case Variant::Custom: break;
    }
    return CouplingTriple::dyadic(cfg.params, cfg.policy);
}

}  // namespace vdisc
