#include "vdisc/pde_verifier.hpp"

#include "vdisc/errors.hpp"
#include "vdisc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vdisc {

namespace {

double spread(const std::vector<double>& values) {
    if (values.empty()) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double x : values) {
        m = std::max(m, std::fabs(x));
    }
    return m;
}

}  // namespace

TorusGrid::TorusGrid(std::size_t n_points) : n_(n_points) {
    if (n_points < 4) {
        throw ParamDomainError("torus grid needs at least 4 points, got " + std::to_string(n_points));
    }
}

void PdeConfig::validate() const {
    if (!(tol_res > 0.0) || !(tol_err > 0.0) || max_iter < 1 || !(theta_min > 0.0)) {
        throw ParamDomainError("invalid PDE solver configuration");
    }
}

double GridSolution::constancy() const { return std::max(spread(u_values), spread(v_values)); }

LaxFriedrichsScheme::LaxFriedrichsScheme(const CouplingTriple& triple, double lambda, TorusGrid grid)
    : triple_(triple), lambda_(lambda), grid_(grid) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParamDomainError("discount factor must be finite and > 0, got " + std::to_string(lambda));
    }
}

double LaxFriedrichsScheme::viscosity(const GridState& state, double theta_min) const {
    const double inv_h = 1.0 / grid_.spacing();
    double p_max = 0.0;
    for (const auto* w : {&state.u, &state.v}) {
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            p_max = std::max(p_max, std::fabs(((*w)[grid_.next(i)] - (*w)[i]) * inv_h));
        }
    }
    return std::max(theta_min, 2.0 * p_max);
}

double LaxFriedrichsScheme::relaxation(double theta) const {
    return 1.0 / (lambda_ + triple_.lipschitz() + theta / grid_.spacing());
}

double LaxFriedrichsScheme::numerical_hamiltonian(std::span<const double> w, std::size_t i, double theta) const {
    const double inv_h = 1.0 / grid_.spacing();
    const double p_minus = (w[i] - w[grid_.prev(i)]) * inv_h;
    const double p_plus = (w[grid_.next(i)] - w[i]) * inv_h;
    const double p_mean = 0.5 * (p_minus + p_plus);
    return p_mean * p_mean - 0.5 * theta * (p_plus - p_minus);
}

void LaxFriedrichsScheme::residual(const GridState& state, double theta, std::span<double> out) const {
    const std::size_t n = grid_.size();
    if (state.u.size() != n || state.v.size() != n || out.size() != 2 * n) {
        throw ParamDomainError("grid state does not match the grid size");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Residuals r = system_residuals(triple_, lambda_, state.u[i], state.v[i]);
        out[i] = r.u + numerical_hamiltonian(state.u, i, theta);
        out[n + i] = r.v + numerical_hamiltonian(state.v, i, theta);
    }
}

GridState LaxFriedrichsScheme::relax(const GridState& state, double theta, double alpha) const {
    const std::size_t n = grid_.size();
    std::vector<double> r(2 * n);
    residual(state, theta, r);
    GridState next = state;
    for (std::size_t i = 0; i < n; ++i) {
        next.u[i] -= alpha * r[i];
        next.v[i] -= alpha * r[n + i];
    }
    return next;
}

GridSolution solve_pde(const CouplingTriple& triple, double lambda, const TorusGrid& grid,
                       const PdeConfig& cfg, const GridState& initial) {
    cfg.validate();
    const LaxFriedrichsScheme scheme(triple, lambda, grid);
    const std::size_t n = grid.size();
    GridState state = initial;
    if (state.u.empty() && state.v.empty()) {
        state.u.assign(n, 0.0);
        state.v.assign(n, 0.0);
    }
    if (state.u.size() != n || state.v.size() != n) {
        throw ParamDomainError("initial grid state does not match the grid size");
    }

    std::vector<double> r(2 * n);
    // the discrete scheme is monotone, so max nodal error <= max|R| / lambda
    const double stop = std::min(cfg.tol_res, lambda * cfg.tol_err);
    for (int it = 0; it < cfg.max_iter; ++it) {
        const double theta = scheme.viscosity(state, cfg.theta_min);
        scheme.residual(state, theta, r);
        const double max_residual = max_abs(r);
        if (max_residual <= stop) {
            return {std::move(state.u), std::move(state.v), max_residual, it};
        }

        GridState next = scheme.relax(state, theta, scheme.relaxation(theta));
        scheme.residual(next, scheme.viscosity(next, cfg.theta_min), r);
        const auto [r_min, r_max] = std::minmax_element(r.begin(), r.end());
        double shift = 0.0;
        if (*r_max <= 0.0) {
            shift = -*r_max / lambda;
        } else if (*r_min >= 0.0) {
            shift = -*r_min / lambda;
        }

        for (std::size_t i = 0; i < n; ++i) {
            next.u[i] += shift;
            next.v[i] += shift;
        }
        if (!std::isfinite(next.u.front()) || !std::isfinite(next.v.front())) {
            throw ToleranceError("grid iteration diverged");
        }
        state = std::move(next);
    }
    throw ToleranceError("grid iteration did not converge within " + std::to_string(cfg.max_iter) +
                         " sweeps at lambda=" + std::to_string(lambda));
}

SweepReport pde_sweep(const CouplingTriple& triple, std::span<const DiscountSchedule> schedules,
                      const TorusGrid& grid, const PdeConfig& cfg) {
    SweepReport report;
    std::vector<std::size_t> failed;
    std::string first_failure;
    std::size_t index = 0;
    for (const auto& schedule : schedules) {
        if (schedule.values.empty()) {
            throw ScheduleDomainError("cannot sweep an empty schedule");
        }
        for (std::size_t i = 0; i < schedule.values.size(); ++i, ++index) {
            const double lambda = schedule.values[i];
            try {
                const GridSolution sol = solve_pde(triple, lambda, grid, cfg);
                SweepRow row;
                row.tag = schedule.tag;
                row.j = schedule.indices[i];
                row.lambda = lambda;
                row.u = sol.u_values.front();
                row.v = sol.v_values.front();
                row.z = row.u - row.v;
                const Residuals res = system_residuals(triple, lambda, row.u, row.v);
                row.residual_u = res.u;
                row.residual_v = res.v;
                row.closed_form_err = closed_form_error(triple.params(), schedule.tag, lambda, row.z, row.u);
                row.constancy = sol.constancy();
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
        throw PartialReportError("grid sweep rows failed [" + list + "]: " + first_failure, std::move(failed));
    }
    estimate_clusters(report);
    return report;
}

}  // namespace vdisc
