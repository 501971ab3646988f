#pragma once

#include <functional>
#include <string_view>

namespace vdisc {

/// Slopes and offset that parametrise the monotone coupling.
///
/// Required ordering: 0 < k0 < k1 < k2, (k1 + k2)/2 < k_star < k2, and d >= 1
/// (or d > 0 when the relaxed domain policy is used).
struct CouplingParams {
    double k0 = 0.5;
    double k1 = 1.0;
    double k2 = 2.0;
    double k_star = 1.6;
    double d = 1.0;

    bool operator==(const CouplingParams&) const = default;
};

/// Intersection S = (x_star, y_star) of y = k_star x with the slope-k1 line
/// through Q = (-1/2, -k2/2), and the slope k_plus of the segment R S.
struct DerivedGeometry {
    double x_star = 0.0;
    double y_star = 0.0;
    double k_plus = 0.0;
};

enum class Variant { Dyadic, SinLog, Custom };

enum class DomainPolicy {
    Strict,   ///< d >= 1
    Relaxed,  ///< any d > 0
};

std::string_view to_string(Variant v) noexcept;

/// Throws ParamDomainError unless the slope ordering and the offset
/// constraint hold.
void validate_params(const CouplingParams& params, DomainPolicy policy = DomainPolicy::Strict);

/// Solves the two-line intersection in closed form and checks that
/// S lies strictly inside (-1, -1/2) and that k_plus > k2.
DerivedGeometry derive_geometry(const CouplingParams& params);

/// Piecewise-linear block: k2 x outside (-1, -1/2), inside it the lower of
/// the line through R = (-1, -k2) with slope k_plus and the slope-k1 line
/// through Q.
double psi_eval(const CouplingParams& params, const DerivedGeometry& geometry, double x);

/// Upper envelope of the dyadic rescalings 2^-j psi(2^j x), j >= 1.
///
/// The maximising index is read off the binary exponent of -x, so the
/// evaluation is O(1) and involves no truncated series. Dyadic endpoints and
/// |x| below 2^-1060 return k2 x.
double eta_eval(const CouplingParams& params, const DerivedGeometry& geometry, double x);

/// x (sin(log|x|) + 2), continuously extended by 0 at the origin.
double sin_log_eta(double x);

/// Slope bounds of the sin-log envelope: 2 -/+ sqrt(2).
inline constexpr double kSinLogSlopeMin = 0.58578643762690495;  // 2 - sqrt(2)
inline constexpr double kSinLogSlopeMax = 3.4142135623730951;   // 2 + sqrt(2)

/// The triple (f, g, h) with f(x) = k0 (x - d), h(x) = eta(x - d) and
/// g(x) = f(-x) - h(-x), so that h(r) = f(r) - g(-r) and f(d) = h(d) = g(-d) = 0.
///
/// Immutable after construction; safe to share across threads.
///
/// Besides plain evaluation the triple exposes the functions relative to
/// their common zero: f_offset(s) = f(d + s), h_offset(s) = h(d + s) and
/// g_offset(s) = g(-d - s). For the built-in variants these avoid forming
/// d + s, which keeps full relative precision when s is tiny. The solvers rely
/// on that to resolve u = -f(z)/lambda as lambda -> 0.
class CouplingTriple {
public:
    using Function = std::function<double(double)>;

    static CouplingTriple dyadic(const CouplingParams& params,
                                 DomainPolicy policy = DomainPolicy::Strict);

    /// Variant with eta(x) = x (sin(log|x|) + 2). Requires k0 < 2 - sqrt(2)
    /// so that g stays increasing; the other slopes are validated but unused.
    static CouplingTriple sin_log(const CouplingParams& params,
                                  DomainPolicy policy = DomainPolicy::Strict);

    /// Raw callbacks for exercising the solvers. `d` must be the common zero
    /// f(d) = g(-d) = 0, and `lipschitz` bounds the slopes of f and g.
    static CouplingTriple from_callbacks(Function f, Function g, double d, double lipschitz);

    double f(double x) const;
    double g(double x) const;
    double h(double x) const;

    double f_offset(double s) const;
    double g_offset(double s) const;
    double h_offset(double s) const;

    /// eta of the variant (h shifted back to the origin).
    double eta(double x) const { return h_offset(x); }

    /// psi of the dyadic construction. Only meaningful for Variant::Dyadic.
    double psi(double x) const;

    Variant variant() const noexcept { return variant_; }
    const CouplingParams& params() const noexcept { return params_; }
    const DerivedGeometry& geometry() const noexcept { return geometry_; }
    double offset() const noexcept { return params_.d; }

    /// Upper bound on the slopes of both f and g.
    double lipschitz() const noexcept { return lipschitz_; }

    /// Positive lower bound on the slope of h (k1, 2 - sqrt(2), or 0 if unknown).
    double h_slope_min() const noexcept { return h_slope_min_; }

private:
    CouplingTriple() = default;

    Variant variant_ = Variant::Dyadic;
    CouplingParams params_{};
    DerivedGeometry geometry_{};
    double lipschitz_ = 0.0;
    double h_slope_min_ = 0.0;
    Function f_custom_;
    Function g_custom_;
};

double h_eval(const CouplingTriple& triple, double x);
double f_eval(const CouplingTriple& triple, double x);
double g_eval(const CouplingTriple& triple, double x);

}  // namespace vdisc
