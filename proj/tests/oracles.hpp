#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// evaluation code.

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

using Rational = boost::rational<std::int64_t>;

struct ExactGeometry {
    Rational x_star;
    Rational y_star;
    Rational k_plus;
};

// S solves k_star x = -k2/2 + k1 (x + 1/2); k_plus is the slope of R S with R = (-1, -k2).
inline ExactGeometry exact_geometry(Rational k1, Rational k2, Rational k_star) {
    ExactGeometry g;
    g.x_star = (k1 - k2) / (Rational(2) * (k_star - k1));
    g.y_star = k_star * g.x_star;
    g.k_plus = (g.y_star + k2) / (g.x_star + Rational(1));
    return g;
}

inline Rational exact_psi(Rational k1, Rational k2, Rational k_plus, Rational x) {
    if (x <= Rational(-1) || x >= Rational(-1, 2)) {
        return k2 * x;
    }
    const Rational through_r = -k2 + k_plus * (x + Rational(1));
    const Rational through_q = -k2 / Rational(2) + k1 * (x + Rational(1, 2));
    return std::min(through_r, through_q);
}

/// Literal definition of the envelope: max over j = 1..max_j of 2^-j psi(2^j x).
struct BruteEta {
    double k1;
    double k2;
    double k_plus;
    int max_j = 60;

    double psi(double x) const {
        if (x <= -1.0 || x >= -0.5) {
            return k2 * x;
        }
        return std::min(-k2 + k_plus * (x + 1.0), -0.5 * k2 + k1 * (x + 0.5));
    }

    double operator()(double x) const {
        double best = -INFINITY;
        for (int j = 1; j <= max_j; ++j) {
            const double scale = std::ldexp(1.0, j);
            best = std::max(best, psi(x * scale) / scale);
        }
        return best;
    }
};

/// Log-uniform sample in [lo, hi] (lo > 0).
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> t(std::log(lo), std::log(hi));
    return std::exp(t(rng));
}

inline double to_double(Rational r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace oracle
