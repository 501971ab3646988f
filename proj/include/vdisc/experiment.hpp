#pragma once

#include "vdisc/coupling.hpp"
#include "vdisc/solver.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vdisc {

enum class ScheduleTag {
    MuSeq,       ///< lambda_j = k2 2^-j / (d - 2^-j); z sits on y = k2 (x - d)
    NuSeq,       ///< lambda_j = 2^-j |y*| / (d - 2^-j |x*|); z sits on y = k_star (x - d)
    LogUniform,  ///< geometric spacing between two bounds
    SinLogSeq2,  ///< sin-log crossings of slope 2
    SinLogSeq3,  ///< sin-log crossings of slope 3
};

std::string_view to_string(ScheduleTag tag) noexcept;
std::optional<ScheduleTag> parse_schedule_tag(std::string_view name) noexcept;

struct LambdaRange {
    double min = 1e-8;
    double max = 1.0;
};

struct DiscountSchedule {
    ScheduleTag tag = ScheduleTag::MuSeq;
    int j_lo = 1;
    int j_hi = 1;
    std::vector<int> indices;
    std::vector<double> values;  ///< strictly decreasing, all > 0
};

/// Discount factors of the requested family for j = j_lo..j_hi.
///
/// LogUniform uses `range` (required) and places j_hi - j_lo + 1 points from
/// range.max down to range.min. Throws ScheduleDomainError when a closed-form
/// denominator is not positive.
DiscountSchedule make_schedule(const CouplingParams& params, ScheduleTag tag, int j_lo, int j_hi,
                               std::optional<LambdaRange> range = std::nullopt);

/// Slope k of the line y = k (x - d) on which z_lambda lies for the tagged
/// family, or nullopt for LogUniform.
std::optional<double> closed_form_slope(const CouplingParams& params, ScheduleTag tag);

struct SweepRow {
    ScheduleTag tag = ScheduleTag::MuSeq;
    int j = 0;
    double lambda = 0.0;
    double z = 0.0;
    double u = 0.0;
    double v = 0.0;
    double residual_u = 0.0;
    double residual_v = 0.0;
    double closed_form_err = 0.0;  ///< NaN when the family has no closed form
    double constancy = 0.0;        ///< grid max - min; NaN for algebraic rows
};

struct SweepReport {
    std::vector<SweepRow> rows;
    double cluster_lo = 0.0;
    double cluster_hi = 0.0;
    double gap = 0.0;

    double max_closed_form_error() const;
};

/// Fills cluster_lo/hi and gap from the rows: the last u of each member of a
/// paired family (MuSeq/NuSeq or the two sin-log families) when both are
/// present, otherwise min/max of u over the trailing quarter of the rows.
void estimate_clusters(SweepReport& report);

/// Closed-form deviation of a row: max(|z - k d/(k + lambda)|, |u - k0 d/(k + lambda)|).
double closed_form_error(const CouplingParams& params, ScheduleTag tag, double lambda, double z, double u);

SweepReport run_sweep(const CouplingTriple& triple, std::span<const DiscountSchedule> schedules,
                      const SolverConfig& cfg = {});
SweepReport run_sweep(const CouplingTriple& triple, const DiscountSchedule& schedule,
                      const SolverConfig& cfg = {});

struct NonconvergenceCertificate {
    double liminf_est = 0.0;
    double limsup_est = 0.0;
    double gap = 0.0;
    bool bounds_ok = false;
    double v_lo = 0.0;  ///< v on the subsequence carrying liminf_est
    double v_hi = 0.0;  ///< v on the subsequence carrying limsup_est
    double target_lo = 0.0;
    double target_hi = 0.0;
    SweepReport report;
};

/// The two families of the triple's variant in the smallest admissible j
/// range ending at j_max (j_max >= 5).
std::vector<DiscountSchedule> paired_schedules(const CouplingTriple& triple, int j_max);

/// Sweeps both paired families to j_max, estimates the two cluster values of
/// u and checks every solution against the box [0, d] x [-d, 0].
NonconvergenceCertificate verify_nonconvergence(const CouplingTriple& triple, int j_max,
                                                const SolverConfig& cfg = {});

/// True when 0 <= u <= d and -d <= v <= 0.
bool in_bounding_box(double d, double u, double v);

}  // namespace vdisc
