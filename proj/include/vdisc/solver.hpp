#pragma once

#include "vdisc/coupling.hpp"

#include <optional>

namespace vdisc {

struct SolverConfig {
    double tol_root = 1e-12;  ///< absolute bound on the final bracket width in z
    double tol_res = 1e-10;   ///< bound on both residuals of a returned solution
    int max_iter = 200;       ///< bracket expansions, and bisections, each
    double bracket_expand = 2.0;
    int max_fixed_point_iter = 5000;  ///< budget of the damped iteration

    /// Throws ParamDomainError on a non-positive tolerance or budget.
    void validate() const;
};

/// A point (u, v) of the plane; used for starting points and sub/supersolutions.
struct StatePair {
    double u = 0.0;
    double v = 0.0;
};

/// Residuals of lambda u + f(u - v) = 0 and lambda v + g(v - u) = 0.
struct Residuals {
    double u = 0.0;
    double v = 0.0;
};

struct DiscountedSolution {
    double lambda = 0.0;
    double u = 0.0;
    double v = 0.0;
    double z = 0.0;  ///< u - v as stored
    double residual_u = 0.0;
    double residual_v = 0.0;
    int iterations = 0;
};

/// (u - v) - d with the rounding of the two subtractions compensated, so that
/// the result keeps relative precision when u - v is close to d.
double coupling_offset(const CouplingTriple& triple, double u, double v);

Residuals system_residuals(const CouplingTriple& triple, double lambda, double u, double v);

/// Root of s -> lambda (d + s) + h(d + s), i.e. z_lambda - d, located by
/// bisection over the ordered lattice of doubles. Reaches adjacent doubles in
/// at most 64 halvings regardless of the magnitude of the root. The default
/// initial bracket is z in [0, 2d].
struct OffsetRoot {
    double offset = 0.0;
    int iterations = 0;
};
OffsetRoot solve_scalar_offset(const CouplingTriple& triple, double lambda, const SolverConfig& cfg = {});

/// Initial bracket [lo, hi] in z; expanded geometrically until it brackets the root.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};
OffsetRoot solve_scalar_offset(const CouplingTriple& triple, double lambda, const SolverConfig& cfg,
                               Bracket initial);

/// Unique z with lambda z + h(z) = 0. lambda = 0 returns d.
double solve_scalar(const CouplingTriple& triple, double lambda, const SolverConfig& cfg = {});
double solve_scalar(const CouplingTriple& triple, double lambda, const SolverConfig& cfg, Bracket initial);

/// (u, v) through the scalar reduction: u = -f(z)/lambda, v = u - z.
DiscountedSolution solve_reduced(const CouplingTriple& triple, double lambda, const SolverConfig& cfg = {});

/// Solves both equations jointly, without reducing to z.
///
/// Each sweep is a damped step (u, v) <- (u, v) - alpha (r_u, r_v) with
/// alpha = 1/(lambda + L), which is order preserving, followed by a shift of
/// both unknowns by the same constant. Shifting along (1, 1) leaves u - v
/// untouched and moves each residual by exactly lambda times the shift, so the
/// shift that zeroes the larger residual of a subsolution keeps it a
/// subsolution (and symmetrically for supersolutions). Without the shift the
/// diagonal mode would contract only by 1 - alpha lambda per sweep.
///
/// The default start is the subsolution (0, -d); the iterates then increase
/// monotonically to the solution. Iteration stops once
/// max|r| <= min(tol_res, lambda tol_root), which bounds the distance to the
/// solution by tol_root.
DiscountedSolution solve_system_iterative(const CouplingTriple& triple, double lambda,
                                          const SolverConfig& cfg = {},
                                          std::optional<StatePair> start = std::nullopt);

/// True when sub <= sup componentwise. Throws PreconditionError unless `sub`
/// satisfies both equations with <= and `sup` with >=, up to `slack`.
bool check_comparison(const CouplingTriple& triple, double lambda, StatePair sub, StatePair sup,
                      double slack = 1e-12);

}  // namespace vdisc
