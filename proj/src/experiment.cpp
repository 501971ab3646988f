#include "vdisc/experiment.hpp"

#include "vdisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace vdisc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Abscissa offset (negative) and slope of the crossing of h with y = k (x - d)
// for index j of a tagged family.
struct Crossing {
    double offset;
    double slope;
};

Crossing crossing(const CouplingParams& p, const DerivedGeometry& geo, ScheduleTag tag, int j) {
    const double dyadic = std::ldexp(1.0, -j);
    switch (tag) {
        case ScheduleTag::MuSeq: return {-dyadic, p.k2};
        case ScheduleTag::NuSeq: return {dyadic * geo.x_star, p.k_star};
        case ScheduleTag::SinLogSeq2: return {-std::exp(-2.0 * std::numbers::pi * j), 2.0};
        case ScheduleTag::SinLogSeq3:
            return {-std::exp(-2.0 * std::numbers::pi * j + 0.5 * std::numbers::pi), 3.0};
        case ScheduleTag::LogUniform: break;
    }
    return {kNaN, kNaN};
}

bool is_pair(ScheduleTag a, ScheduleTag b) {
    const auto dyadic = [](ScheduleTag t) { return t == ScheduleTag::MuSeq || t == ScheduleTag::NuSeq; };
    const auto sinlog = [](ScheduleTag t) {
        return t == ScheduleTag::SinLogSeq2 || t == ScheduleTag::SinLogSeq3;
    };
    return a != b && ((dyadic(a) && dyadic(b)) || (sinlog(a) && sinlog(b)));
}

}  // namespace

std::string_view to_string(ScheduleTag tag) noexcept {
    switch (tag) {
        case ScheduleTag::MuSeq: return "mu";
        case ScheduleTag::NuSeq: return "nu";
        case ScheduleTag::LogUniform: return "loguniform";
        case ScheduleTag::SinLogSeq2: return "sinlog2";
        case ScheduleTag::SinLogSeq3: return "sinlog3";
    }
    return "unknown";
}

std::optional<ScheduleTag> parse_schedule_tag(std::string_view name) noexcept {
    for (auto tag : {ScheduleTag::MuSeq, ScheduleTag::NuSeq, ScheduleTag::LogUniform,
                     ScheduleTag::SinLogSeq2, ScheduleTag::SinLogSeq3}) {
        if (name == to_string(tag)) {
            return tag;
        }
    }
    return std::nullopt;
}

std::optional<double> closed_form_slope(const CouplingParams& params, ScheduleTag tag) {
    switch (tag) {
        case ScheduleTag::MuSeq: return params.k2;
        case ScheduleTag::NuSeq: return params.k_star;
        case ScheduleTag::SinLogSeq2: return 2.0;
        case ScheduleTag::SinLogSeq3: return 3.0;
        case ScheduleTag::LogUniform: break;
    }
    return std::nullopt;
}

DiscountSchedule make_schedule(const CouplingParams& params, ScheduleTag tag, int j_lo, int j_hi,
                               std::optional<LambdaRange> range) {
    if (j_lo < 1 || j_hi < j_lo) {
        throw ScheduleDomainError("schedule needs 1 <= j_lo <= j_hi, got " + std::to_string(j_lo) +
                                  ".." + std::to_string(j_hi));
    }
    DiscountSchedule schedule;
    schedule.tag = tag;
    schedule.j_lo = j_lo;
    schedule.j_hi = j_hi;

    if (tag == ScheduleTag::LogUniform) {
        if (!range) {
            throw ScheduleDomainError("log-uniform schedule needs lambda bounds");
        }
        const std::size_t n = static_cast<std::size_t>(j_hi - j_lo) + 1;
        if (!(range->min > 0.0 && std::isfinite(range->max)) ||
            !(n == 1 ? range->min <= range->max : range->min < range->max)) {
            throw ScheduleDomainError("log-uniform schedule needs 0 < lambda_min < lambda_max");
        }
        const double log_ratio = std::log(range->min / range->max);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
            schedule.indices.push_back(j_lo + static_cast<int>(i));
            schedule.values.push_back(i + 1 == n && n > 1 ? range->min : range->max * std::exp(t * log_ratio));
        }
        return schedule;
    }

    const DerivedGeometry geo = derive_geometry(params);
    for (int j = j_lo; j <= j_hi; ++j) {
        const Crossing c = crossing(params, geo, tag, j);
        // z = d + offset lies on y = slope (x - d) and on y = -lambda x
        const double denominator = params.d + c.offset;
        if (!(denominator > 0.0)) {
            throw ScheduleDomainError("schedule " + std::string(to_string(tag)) + " index " +
                                      std::to_string(j) + " needs a larger d (denominator " +
                                      std::to_string(denominator) + ")");
        }
        const double lambda = -c.slope * c.offset / denominator;
        if (!(lambda > 0.0)) {
            throw ScheduleDomainError("schedule " + std::string(to_string(tag)) + " index " +
                                      std::to_string(j) + " underflowed to lambda = 0");
        }
        schedule.indices.push_back(j);
        schedule.values.push_back(lambda);
    }
    for (std::size_t i = 1; i < schedule.values.size(); ++i) {
        if (!(schedule.values[i] < schedule.values[i - 1])) {
            throw ScheduleDomainError("schedule values are not strictly decreasing");
        }
    }
    return schedule;
}

double closed_form_error(const CouplingParams& params, ScheduleTag tag, double lambda, double z, double u) {
    const auto k = closed_form_slope(params, tag);
    if (!k) {
        return kNaN;
    }
    const double z_closed = *k * params.d / (*k + lambda);
    const double u_closed = params.k0 * params.d / (*k + lambda);
    return std::max(std::fabs(z - z_closed), std::fabs(u - u_closed));
}

double SweepReport::max_closed_form_error() const {
    double worst = 0.0;
    for (const auto& row : rows) {
        if (!std::isnan(row.closed_form_err)) {
            worst = std::max(worst, row.closed_form_err);
        }
    }
    return worst;
}

void estimate_clusters(SweepReport& report) {
    if (report.rows.empty()) {
        report.cluster_lo = report.cluster_hi = report.gap = kNaN;
        return;
    }
    // last row of each tag, in order of first appearance
    std::vector<const SweepRow*> last_of_tag;
    for (const auto& row : report.rows) {
        auto it = std::find_if(last_of_tag.begin(), last_of_tag.end(),
                               [&](const SweepRow* r) { return r->tag == row.tag; });
        if (it == last_of_tag.end()) {
            last_of_tag.push_back(&row);
        } else if (row.j >= (*it)->j) {
            *it = &row;
        }
    }
    for (std::size_t a = 0; a < last_of_tag.size(); ++a) {
        for (std::size_t b = a + 1; b < last_of_tag.size(); ++b) {
            if (is_pair(last_of_tag[a]->tag, last_of_tag[b]->tag)) {
                report.cluster_lo = std::min(last_of_tag[a]->u, last_of_tag[b]->u);
                report.cluster_hi = std::max(last_of_tag[a]->u, last_of_tag[b]->u);
                report.gap = report.cluster_hi - report.cluster_lo;
                return;
            }
        }
    }
    const std::size_t n = report.rows.size();
    const std::size_t trailing = std::max<std::size_t>(1, n / 4);
    auto first = report.rows.end() - static_cast<std::ptrdiff_t>(trailing);
    const auto [lo, hi] = std::minmax_element(first, report.rows.end(),
                                              [](const SweepRow& a, const SweepRow& b) { return a.u < b.u; });
    report.cluster_lo = lo->u;
    report.cluster_hi = hi->u;
    report.gap = report.cluster_hi - report.cluster_lo;
}

SweepReport run_sweep(const CouplingTriple& triple, std::span<const DiscountSchedule> schedules,
                      const SolverConfig& cfg) {
    SweepReport report;
    std::vector<std::size_t> failed;
    std::string first_failure;
    std::size_t index = 0;
    for (const auto& schedule : schedules) {
        if (schedule.values.empty()) {
            throw ScheduleDomainError("cannot sweep an empty schedule");
        }
        for (std::size_t i = 0; i < schedule.values.size(); ++i, ++index) {
            try {
                const DiscountedSolution sol = solve_reduced(triple, schedule.values[i], cfg);
                SweepRow row;
                row.tag = schedule.tag;
                row.j = schedule.indices[i];
                row.lambda = sol.lambda;
                row.z = sol.z;
                row.u = sol.u;
                row.v = sol.v;
                row.residual_u = sol.residual_u;
                row.residual_v = sol.residual_v;
                row.closed_form_err = closed_form_error(triple.params(), schedule.tag, sol.lambda, sol.z, sol.u);
                row.constancy = kNaN;
                report.rows.push_back(row);
            } catch (const Error& e) {
                if (failed.empty()) {
                    first_failure = e.what();
                }
                failed.push_back(index);
            }
        }
    }
    if (!failed.empty()) {
        std::string list;
        for (auto f : failed) {
            list += (list.empty() ? "" : ",") + std::to_string(f);
        }
        throw PartialReportError("sweep rows failed [" + list + "]: " + first_failure, std::move(failed));
    }
    estimate_clusters(report);
    return report;
}

SweepReport run_sweep(const CouplingTriple& triple, const DiscountSchedule& schedule, const SolverConfig& cfg) {
    return run_sweep(triple, std::span<const DiscountSchedule>(&schedule, 1), cfg);
}

bool in_bounding_box(double d, double u, double v) {
    return 0.0 <= u && u <= d && -d <= v && v <= 0.0;
}

std::vector<DiscountSchedule> paired_schedules(const CouplingTriple& triple, int j_max) {
    if (j_max < 5) {
        throw ScheduleDomainError("j_max must be >= 5, got " + std::to_string(j_max));
    }
    ScheduleTag first{};
    ScheduleTag second{};
    switch (triple.variant()) {
        case Variant::Dyadic:
            first = ScheduleTag::MuSeq;
            second = ScheduleTag::NuSeq;
            break;
        case Variant::SinLog:
            first = ScheduleTag::SinLogSeq2;
            second = ScheduleTag::SinLogSeq3;
            break;
        case Variant::Custom:
            throw ParamDomainError("custom couplings have no known crossing sequences");
    }
    const CouplingParams& p = triple.params();
    const DerivedGeometry& geo = triple.geometry();
    int j_lo = 1;
    while (j_lo <= j_max && !(p.d + crossing(p, geo, first, j_lo).offset > 0.0 &&
                              p.d + crossing(p, geo, second, j_lo).offset > 0.0)) {
        ++j_lo;
    }
    if (j_lo > j_max) {
        throw ScheduleDomainError("d too small for any index up to j_max");
    }
    return {make_schedule(p, first, j_lo, j_max), make_schedule(p, second, j_lo, j_max)};
}

NonconvergenceCertificate verify_nonconvergence(const CouplingTriple& triple, int j_max, const SolverConfig& cfg) {
    const std::vector<DiscountSchedule> schedules = paired_schedules(triple, j_max);
    NonconvergenceCertificate cert;
    cert.report = run_sweep(triple, schedules, cfg);

    const CouplingParams& p = triple.params();
    cert.bounds_ok = std::all_of(cert.report.rows.begin(), cert.report.rows.end(),
                                 [&](const SweepRow& r) { return in_bounding_box(p.d, r.u, r.v); });

    const SweepRow& last_first = *std::find_if(cert.report.rows.rbegin(), cert.report.rows.rend(),
                                               [&](const SweepRow& r) { return r.tag == schedules[0].tag; });
    const SweepRow& last_second = cert.report.rows.back();
    const bool first_is_low = last_first.u <= last_second.u;
    const SweepRow& low = first_is_low ? last_first : last_second;
    const SweepRow& high = first_is_low ? last_second : last_first;
    cert.liminf_est = low.u;
    cert.limsup_est = high.u;
    cert.gap = high.u - low.u;
    cert.v_lo = low.v;
    cert.v_hi = high.v;

    const double k_a = *closed_form_slope(p, schedules[0].tag);
    const double k_b = *closed_form_slope(p, schedules[1].tag);
    cert.target_lo = p.k0 * p.d / std::max(k_a, k_b);
    cert.target_hi = p.k0 * p.d / std::min(k_a, k_b);
    return cert;
}

}  // namespace vdisc
