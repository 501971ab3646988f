#include "vdisc/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace vdisc {

namespace {

nlohmann::json number_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report, bool with_constancy) {
    os << "tag,j,lambda,z,u,v,residual_u,residual_v,closed_form_err";
    if (with_constancy) {
        os << ",constancy";
    }
    os << '\n';
    for (const auto& r : report.rows) {
        os << to_string(r.tag) << ',' << r.j << ',' << format_double(r.lambda) << ',' << format_double(r.z)
           << ',' << format_double(r.u) << ',' << format_double(r.v) << ',' << format_double(r.residual_u)
           << ',' << format_double(r.residual_v) << ',' << format_double(r.closed_form_err);
        if (with_constancy) {
            os << ',' << format_double(r.constancy);
        }
        os << '\n';
    }
}

nlohmann::json params_to_json(const CouplingParams& p) {
    return {{"k0", p.k0}, {"k1", p.k1}, {"k2", p.k2}, {"k_star", p.k_star}, {"d", p.d}};
}

CouplingParams params_from_json(const nlohmann::json& j) {
    CouplingParams p;
    p.k0 = j.at("k0").get<double>();
    p.k1 = j.at("k1").get<double>();
    p.k2 = j.at("k2").get<double>();
    p.k_star = j.at("k_star").get<double>();
    p.d = j.at("d").get<double>();
    return p;
}

nlohmann::json sweep_summary(const SweepReport& report, const CouplingTriple& triple) {
    return {
        {"variant", std::string(to_string(triple.variant()))},
        {"params", params_to_json(triple.params())},
        {"rows", report.rows.size()},
        {"cluster_lo", number_or_null(report.cluster_lo)},
        {"cluster_hi", number_or_null(report.cluster_hi)},
        {"gap", number_or_null(report.gap)},
        {"max_closed_form_err", number_or_null(report.max_closed_form_error())},
    };
}

nlohmann::json certificate_to_json(const NonconvergenceCertificate& cert, const CouplingTriple& triple) {
    return {
        {"variant", std::string(to_string(triple.variant()))},
        {"params", params_to_json(triple.params())},
        {"liminf_est", cert.liminf_est},
        {"limsup_est", cert.limsup_est},
        {"gap", cert.gap},
        {"bounds_ok", cert.bounds_ok},
        {"v_lo", cert.v_lo},
        {"v_hi", cert.v_hi},
        {"target_lo", cert.target_lo},
        {"target_hi", cert.target_hi},
        {"target_gap", cert.target_hi - cert.target_lo},
        {"rows", cert.report.rows.size()},
        {"max_closed_form_err", cert.report.max_closed_form_error()},
    };
}

}  // namespace vdisc
