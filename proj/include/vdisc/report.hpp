#pragma once

#include "vdisc/coupling.hpp"
#include "vdisc/experiment.hpp"

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace vdisc {

/// 17 significant digits ("%.17g").
std::string format_double(double x);

/// Columns: tag,j,lambda,z,u,v,residual_u,residual_v,closed_form_err
/// plus a trailing constancy column when `with_constancy` is set.
void write_sweep_csv(std::ostream& os, const SweepReport& report, bool with_constancy = false);

nlohmann::json params_to_json(const CouplingParams& params);
CouplingParams params_from_json(const nlohmann::json& j);

/// Clusters, gap, row count, worst closed-form error and the parameter echo.
nlohmann::json sweep_summary(const SweepReport& report, const CouplingTriple& triple);

nlohmann::json certificate_to_json(const NonconvergenceCertificate& cert, const CouplingTriple& triple);

}  // namespace vdisc
