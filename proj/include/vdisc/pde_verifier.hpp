#pragma once

#include "vdisc/coupling.hpp"
#include "vdisc/experiment.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace vdisc {

/// Uniform periodic grid on [0, 1).
class TorusGrid {
public:
    explicit TorusGrid(std::size_t n_points);

    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
    std::size_t next(std::size_t i) const noexcept { return i + 1 == n_ ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const noexcept { return i == 0 ? n_ - 1 : i - 1; }

private:
    std::size_t n_;
};

struct PdeConfig {
    double tol_res = 1e-12;   ///< max residual over nodes
    double tol_err = 1e-9;    ///< bound on the nodal error, enforced as max|R| <= lambda tol_err
    int max_iter = 1'000'000;
    double theta_min = 1.0;   ///< floor of the Lax-Friedrichs viscosity

    void validate() const;
};

/// Pair of grid functions (u_i), (v_i).
struct GridState {
    std::vector<double> u;
    std::vector<double> v;
};

struct GridSolution {
    std::vector<double> u_values;
    std::vector<double> v_values;
    double max_residual = 0.0;
    int iterations = 0;

    /// max - min over nodes of u and of v, whichever is larger.
    double constancy() const;
};

/// Lax-Friedrichs discretisation of
///   lambda u + |u_x|^2 + f(u - v) = 0,  lambda v + |v_x|^2 + g(v - u) = 0
/// on a periodic grid:
///   H^(p-, p+) = ((p- + p+)/2)^2 - theta/2 (p+ - p-).
/// The scheme is monotone when theta >= max |2p| over the one-sided
/// differences, and the relaxation x <- x - alpha R(x) is then order
/// preserving for alpha <= 1/(lambda + L + theta/h).
class LaxFriedrichsScheme {
public:
    LaxFriedrichsScheme(const CouplingTriple& triple, double lambda, TorusGrid grid);

    double lambda() const noexcept { return lambda_; }
    const TorusGrid& grid() const noexcept { return grid_; }

    /// Smallest admissible viscosity for the state: max(theta_min, 2 max |D+-|).
    double viscosity(const GridState& state, double theta_min) const;

    /// Largest order-preserving relaxation factor for viscosity theta.
    double relaxation(double theta) const;

    /// Nodal residuals (u block then v block) written to `out` (size 2n).
    void residual(const GridState& state, double theta, std::span<double> out) const;

    /// One relaxation x <- x - alpha R(x).
    GridState relax(const GridState& state, double theta, double alpha) const;

private:
    double numerical_hamiltonian(std::span<const double> w, std::size_t i, double theta) const;

    CouplingTriple triple_;
    double lambda_;
    TorusGrid grid_;
};

/// Solves the discretised system from `initial` (zeros when empty) by
/// relaxation plus uniform shifts of both grid functions. A uniform shift
/// leaves all differences and u - v unchanged and moves every residual by
/// lambda times the shift, which removes the slowly contracting constant mode.
GridSolution solve_pde(const CouplingTriple& triple, double lambda, const TorusGrid& grid,
                       const PdeConfig& cfg = {}, const GridState& initial = {});

/// Grid solve for each lambda of the schedules; the node-0 values populate a
/// report shaped like run_sweep's, with the spread across nodes in `constancy`.
SweepReport pde_sweep(const CouplingTriple& triple, std::span<const DiscountSchedule> schedules,
                      const TorusGrid& grid, const PdeConfig& cfg = {});

}  // namespace vdisc
