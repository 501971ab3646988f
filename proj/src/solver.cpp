#include "vdisc/solver.hpp"

#include "vdisc/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace vdisc {

namespace {

struct TwoSum {
    double sum;
    double err;
};

TwoSum two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// Monotone map from doubles to integers: adjacent doubles differ by one.
std::int64_t lattice_key(double x) {
    const auto bits = std::bit_cast<std::int64_t>(x);
    return bits < 0 ? -(bits & std::numeric_limits<std::int64_t>::max()) : bits;
}

double from_lattice_key(std::int64_t key) {
    if (key < 0) {
        return std::bit_cast<double>((-key) | std::numeric_limits<std::int64_t>::min());
    }
    return std::bit_cast<double>(key);
}

double lattice_midpoint(double lo, double hi) {
    const std::int64_t a = lattice_key(lo);
    const std::int64_t b = lattice_key(hi);
    return from_lattice_key(std::midpoint(a, b));
}

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ParamDomainError("discount factor must be finite and > 0, got " + std::to_string(lambda));
    }
}

double max_abs(Residuals r) { return std::max(std::fabs(r.u), std::fabs(r.v)); }

// Unevaluated sum hi + lo. The joint iteration needs u - v resolved well below
// one ulp of u: the diagonal mode of the system is conditioned like 1/lambda.
struct Compensated {
    double hi = 0.0;
    double lo = 0.0;

    void add(double x) {
        const TwoSum s = two_sum(hi, x);
        const TwoSum t = two_sum(s.sum, s.err + lo);
        hi = t.sum;
        lo = t.err;
    }
    double value() const { return hi + lo; }
};

Residuals compensated_residuals(const CouplingTriple& triple, double lambda, Compensated u, Compensated v) {
    const TwoSum diff = two_sum(u.hi, -v.hi);
    const TwoSum shifted = two_sum(diff.sum, -triple.offset());
    const double s = shifted.sum + (diff.err + shifted.err + (u.lo - v.lo));
    return {lambda * u.hi + lambda * u.lo + triple.f_offset(s),
            lambda * v.hi + lambda * v.lo + triple.g_offset(s)};
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol_root > 0.0) || !(tol_res > 0.0)) {
        throw ParamDomainError("solver tolerances must be positive");
    }
    if (max_iter < 1 || max_fixed_point_iter < 1) {
        throw ParamDomainError("solver iteration budgets must be >= 1");
    }
    if (!(bracket_expand > 1.0)) {
        throw ParamDomainError("bracket expansion factor must exceed 1");
    }
}

double coupling_offset(const CouplingTriple& triple, double u, double v) {
    const TwoSum diff = two_sum(u, -v);
    const TwoSum shifted = two_sum(diff.sum, -triple.offset());
    return shifted.sum + (diff.err + shifted.err);
}

Residuals system_residuals(const CouplingTriple& triple, double lambda, double u, double v) {
    const double s = coupling_offset(triple, u, v);
    return {lambda * u + triple.f_offset(s), lambda * v + triple.g_offset(s)};
}

OffsetRoot solve_scalar_offset(const CouplingTriple& triple, double lambda, const SolverConfig& cfg) {
    return solve_scalar_offset(triple, lambda, cfg, Bracket{0.0, 2.0 * triple.offset()});
}

OffsetRoot solve_scalar_offset(const CouplingTriple& triple, double lambda, const SolverConfig& cfg,
                               Bracket initial) {
    cfg.validate();
    if (!(initial.lo < initial.hi) || !std::isfinite(initial.lo) || !std::isfinite(initial.hi)) {
        throw ParamDomainError("initial bracket must satisfy lo < hi");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ParamDomainError("discount factor must be finite and >= 0, got " + std::to_string(lambda));
    }
    if (lambda == 0.0) {
        return {0.0, 0};
    }
    const double d = triple.offset();
    // lambda (d + s) + h(d + s); increasing in s
    const auto phi = [&](double s) { return lambda * d + lambda * s + triple.h_offset(s); };

    double lo = initial.lo - d;
    double hi = initial.hi - d;
    double phi_lo = phi(lo);
    double phi_hi = phi(hi);
    int expansions = 0;
    while (phi_lo > 0.0 || phi_hi < 0.0) {
        if (++expansions > cfg.max_iter) {
            throw BracketError("no sign change of lambda z + h(z) after " +
                               std::to_string(cfg.max_iter) + " bracket expansions");
        }
        const double grow = (hi - lo) * cfg.bracket_expand;
        if (phi_lo > 0.0) {
            hi = lo;
            phi_hi = phi_lo;
            lo -= grow;
            phi_lo = phi(lo);
        } else {
            lo = hi;
            phi_lo = phi_hi;
            hi += grow;
            phi_hi = phi(hi);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw BracketError("bracket expansion overflowed");
        }
    }
    if (phi_lo == 0.0) {
        return {lo, 0};
    }
    if (phi_hi == 0.0) {
        return {hi, 0};
    }

    int iterations = 0;
    while (std::nextafter(lo, hi) != hi) {
        if (++iterations > cfg.max_iter) {
            throw ToleranceError("bisection did not reach adjacent doubles within " +
                                 std::to_string(cfg.max_iter) + " halvings");
        }
        const double mid = lattice_midpoint(lo, hi);
        const double phi_mid = phi(mid);
        if (phi_mid == 0.0) {
            return {mid, iterations};
        }
        if (phi_mid < 0.0) {
            lo = mid;
            phi_lo = phi_mid;
        } else {
            hi = mid;
            phi_hi = phi_mid;
        }
    }
    const double root = std::fabs(phi_lo) <= std::fabs(phi_hi) ? lo : hi;
    if (std::fabs(phi(root)) > cfg.tol_res) {
        throw ToleranceError("scalar residual above tolerance at floating-point resolution");
    }
    if (hi - lo > cfg.tol_root) {
        throw ToleranceError("bracket width above tol_root");
    }
    return {root, iterations};
}

double solve_scalar(const CouplingTriple& triple, double lambda, const SolverConfig& cfg) {
    return triple.offset() + solve_scalar_offset(triple, lambda, cfg).offset;
}

double solve_scalar(const CouplingTriple& triple, double lambda, const SolverConfig& cfg, Bracket initial) {
    return triple.offset() + solve_scalar_offset(triple, lambda, cfg, initial).offset;
}

DiscountedSolution solve_reduced(const CouplingTriple& triple, double lambda, const SolverConfig& cfg) {
    require_positive_lambda(lambda);
    const OffsetRoot root = solve_scalar_offset(triple, lambda, cfg);
    const double s = root.offset;

    DiscountedSolution sol;
    sol.lambda = lambda;
    sol.u = -triple.f_offset(s) / lambda;
    sol.v = sol.u - (triple.offset() + s);
    sol.z = sol.u - sol.v;
    const Residuals r = system_residuals(triple, lambda, sol.u, sol.v);
    sol.residual_u = r.u;
    sol.residual_v = r.v;
    sol.iterations = root.iterations;
    if (max_abs(r) > cfg.tol_res) {
        throw ToleranceError("reduced solution residual " + std::to_string(max_abs(r)) +
                             " exceeds tol_res at lambda=" + std::to_string(lambda));
    }
    return sol;
}

DiscountedSolution solve_system_iterative(const CouplingTriple& triple, double lambda,
                                          const SolverConfig& cfg, std::optional<StatePair> start) {
    cfg.validate();
    require_positive_lambda(lambda);
    const double alpha = 1.0 / (lambda + triple.lipschitz());
    const StatePair x0 = start.value_or(StatePair{0.0, -triple.offset()});
    Compensated u{x0.u, 0.0};
    Compensated v{x0.v, 0.0};
    // For a monotone system |x - x_lambda| <= max|r| / lambda.
    const double stop = std::min(cfg.tol_res, lambda * cfg.tol_root);

    for (int it = 0; it < cfg.max_fixed_point_iter; ++it) {
        const Residuals r = compensated_residuals(triple, lambda, u, v);
        if (max_abs(r) <= stop) {
            DiscountedSolution sol;
            sol.lambda = lambda;
            sol.u = u.value();
            sol.v = v.value();
            sol.z = sol.u - sol.v;
            sol.residual_u = r.u;
            sol.residual_v = r.v;
            sol.iterations = it;
            return sol;
        }

        u.add(-alpha * r.u);
        v.add(-alpha * r.v);
        const Residuals rn = compensated_residuals(triple, lambda, u, v);
        double shift = 0.0;
        if (rn.u <= 0.0 && rn.v <= 0.0) {
            shift = -std::max(rn.u, rn.v) / lambda;
        } else if (rn.u >= 0.0 && rn.v >= 0.0) {
            shift = -std::min(rn.u, rn.v) / lambda;
        }
        u.add(shift);
        v.add(shift);
        if (!std::isfinite(u.hi) || !std::isfinite(v.hi)) {
            throw ToleranceError("fixed-point iteration diverged");
        }
    }
    throw ToleranceError("fixed-point iteration did not converge within " +
                         std::to_string(cfg.max_fixed_point_iter) + " sweeps at lambda=" +
                         std::to_string(lambda));
}

bool check_comparison(const CouplingTriple& triple, double lambda, StatePair sub, StatePair sup,
                      double slack) {
    require_positive_lambda(lambda);
    const Residuals rs = system_residuals(triple, lambda, sub.u, sub.v);
    if (rs.u > slack || rs.v > slack) {
        throw PreconditionError("first point is not a subsolution (residuals " +
                                std::to_string(rs.u) + ", " + std::to_string(rs.v) + ")");
    }
    const Residuals rp = system_residuals(triple, lambda, sup.u, sup.v);
    if (rp.u < -slack || rp.v < -slack) {
        throw PreconditionError("second point is not a supersolution (residuals " +
                                std::to_string(rp.u) + ", " + std::to_string(rp.v) + ")");
    }
    return sub.u <= sup.u && sub.v <= sup.v;
}

}  // namespace vdisc
