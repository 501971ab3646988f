#include "vdisc/coupling.hpp"

#include "vdisc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace vdisc {

namespace {

// Below this magnitude the dyadic correction is not representable.
constexpr int kUnderflowExponent = -1060;

std::string describe(const CouplingParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(k0=" << p.k0 << ", k1=" << p.k1 << ", k2=" << p.k2 << ", k_star=" << p.k_star
       << ", d=" << p.d << ")";
    return os.str();
}

bool all_finite(const CouplingParams& p) {
    return std::isfinite(p.k0) && std::isfinite(p.k1) && std::isfinite(p.k2) &&
           std::isfinite(p.k_star) && std::isfinite(p.d);
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::Dyadic: return "dyadic";
        case Variant::SinLog: return "sinlog";
        case Variant::Custom: return "custom";
    }
    return "unknown";
}

void validate_params(const CouplingParams& p, DomainPolicy policy) {
    if (!all_finite(p)) {
        throw ParamDomainError("non-finite coupling parameter " + describe(p));
    }
    if (!(0.0 < p.k0 && p.k0 < p.k1 && p.k1 < p.k2)) {
        throw ParamDomainError("slopes must satisfy 0 < k0 < k1 < k2, got " + describe(p));
    }
    if (!(0.5 * (p.k1 + p.k2) < p.k_star && p.k_star < p.k2)) {
        throw ParamDomainError("k_star must lie in ((k1+k2)/2, k2), got " + describe(p));
    }
    if (policy == DomainPolicy::Strict && !(p.d >= 1.0)) {
        throw ParamDomainError("offset d must be >= 1 (use the relaxed policy for d > 0), got " +
                               describe(p));
    }
    if (!(p.d > 0.0)) {
        throw ParamDomainError("offset d must be positive, got " + describe(p));
    }
}

DerivedGeometry derive_geometry(const CouplingParams& p) {
    validate_params(p, DomainPolicy::Relaxed);
    DerivedGeometry geo;
    // k_star x = -k2/2 + k1 (x + 1/2)  <=>  (k_star - k1) x = (k1 - k2)/2
    geo.x_star = (p.k1 - p.k2) / (2.0 * (p.k_star - p.k1));
    geo.y_star = p.k_star * geo.x_star;
    geo.k_plus = (geo.y_star + p.k2) / (geo.x_star + 1.0);
    if (!(-1.0 < geo.x_star && geo.x_star < -0.5)) {
        throw ParamDomainError("intersection abscissa left (-1, -1/2) for " + describe(p));
    }
    if (!(geo.k_plus > p.k2)) {
        throw ParamDomainError("k_plus does not exceed k2 for " + describe(p));
    }
    return geo;
}

double psi_eval(const CouplingParams& p, const DerivedGeometry& geo, double x) {
    if (x <= -1.0 || x >= -0.5) {
        return p.k2 * x;
    }
    const double through_r = -p.k2 + geo.k_plus * (x + 1.0);
    const double through_q = -0.5 * p.k2 + p.k1 * (x + 0.5);
    return std::min(through_r, through_q);
}

double eta_eval(const CouplingParams& p, const DerivedGeometry& geo, double x) {
    if (!(x < 0.0) || x <= -0.5) {
        return p.k2 * x;
    }
    int exponent = 0;
    const double mantissa = std::frexp(-x, &exponent);  // -x = mantissa * 2^exponent
    if (mantissa == 0.5 || exponent <= kUnderflowExponent) {
        // -x is a power of two (every psi_j agrees with k2 x there) or too small.
        return p.k2 * x;
    }
    // -x in (2^(exponent-1), 2^exponent), i.e. x in (-2^-j, -2^-j-1) with j = -exponent.
    const int j = -exponent;
    return std::ldexp(psi_eval(p, geo, std::ldexp(x, j)), -j);
}

double sin_log_eta(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return x * (std::sin(std::log(std::fabs(x))) + 2.0);
}

CouplingTriple CouplingTriple::dyadic(const CouplingParams& params, DomainPolicy policy) {
    validate_params(params, policy);
    CouplingTriple t;
    t.variant_ = Variant::Dyadic;
    t.params_ = params;
    t.geometry_ = derive_geometry(params);
    // f' = k0, g' in [k1 - k0, k_plus - k0], h' in [k1, k_plus]
    t.lipschitz_ = std::max(params.k0, t.geometry_.k_plus - params.k0);
    t.h_slope_min_ = params.k1;
    return t;
}

CouplingTriple CouplingTriple::sin_log(const CouplingParams& params, DomainPolicy policy) {
    validate_params(params, policy);
    if (!(params.k0 < kSinLogSlopeMin)) {
        throw ParamDomainError("sin-log variant needs k0 < 2 - sqrt(2), got " + describe(params));
    }
    CouplingTriple t;
    t.variant_ = Variant::SinLog;
    t.params_ = params;
    t.geometry_ = derive_geometry(params);
    t.lipschitz_ = std::max(params.k0, kSinLogSlopeMax - params.k0);
    t.h_slope_min_ = kSinLogSlopeMin;
    return t;
}

CouplingTriple CouplingTriple::from_callbacks(Function f, Function g, double d, double lipschitz) {
    if (!f || !g) {
        throw ParamDomainError("custom coupling needs both f and g");
    }
    if (!(std::isfinite(d) && std::isfinite(lipschitz) && lipschitz > 0.0)) {
        throw ParamDomainError("custom coupling needs finite d and a positive Lipschitz bound");
    }
    CouplingTriple t;
    t.variant_ = Variant::Custom;
    t.params_.d = d;
    t.lipschitz_ = lipschitz;
    t.f_custom_ = std::move(f);
    t.g_custom_ = std::move(g);
    return t;
}

double CouplingTriple::f(double x) const {
    if (variant_ == Variant::Custom) {
        return f_custom_(x);
    }
    return params_.k0 * (x - params_.d);
}

double CouplingTriple::h(double x) const {
    if (variant_ == Variant::Custom) {
        return f_custom_(x) - g_custom_(-x);
    }
    return h_offset(x - params_.d);
}

double CouplingTriple::g(double x) const {
    if (variant_ == Variant::Custom) {
        return g_custom_(x);
    }
    return f(-x) - h(-x);
}

double CouplingTriple::f_offset(double s) const {
    if (variant_ == Variant::Custom) {
        return f_custom_(params_.d + s);
    }
    return params_.k0 * s;
}

double CouplingTriple::h_offset(double s) const {
    switch (variant_) {
        case Variant::Dyadic: return eta_eval(params_, geometry_, s);
        case Variant::SinLog: return sin_log_eta(s);
        case Variant::Custom: break;
    }
    return h(params_.d + s);
}

double CouplingTriple::g_offset(double s) const {
    if (variant_ == Variant::Custom) {
        return g_custom_(-(params_.d + s));
    }
    return f_offset(s) - h_offset(s);
}

double CouplingTriple::psi(double x) const { return psi_eval(params_, geometry_, x); }

double h_eval(const CouplingTriple& triple, double x) { return triple.h(x); }
double f_eval(const CouplingTriple& triple, double x) { return triple.f(x); }
double g_eval(const CouplingTriple& triple, double x) { return triple.g(x); }

}  // namespace vdisc
