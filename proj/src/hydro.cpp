#include "doubletopt/hydro.hpp"

#include <cmath>
#include <string>

#include "doubletopt/errors.hpp"

namespace doubletopt {

namespace {

// Regression constants of the TAP limit formulas. They are part of the
// method, not tunables.
constexpr double kDrawdownFactor = 0.195;
constexpr double kUpconingExponent = 0.798;
constexpr double kUpconingGradientScale = 29.9;
const double kBreakthroughFactor = M_PI / 1.96;

double darcy(const HydroSample& s) {
    return s.darcy_velocity ? *s.darcy_velocity : s.conductivity * s.gradient;
}

}  // namespace

void validate(const HydroSample& s, const char* context) {
    auto fail = [&](const char* rule) {
        throw ValidationError(std::string(context) + ": " + rule);
    };
    if (!(s.conductivity >= 0.0) || !std::isfinite(s.conductivity)) fail("K must be >= 0 and finite");
    if (!(s.thickness >= 0.0) || !std::isfinite(s.thickness)) fail("B must be >= 0 and finite");
    if (!(s.gradient >= 0.0) || !std::isfinite(s.gradient)) fail("grad_h must be >= 0 and finite");
    if (!std::isfinite(s.level_natural) || !std::isfinite(s.level_max)) fail("groundwater levels must be finite");
    if (s.darcy_velocity && (!(*s.darcy_velocity >= 0.0) || !std::isfinite(*s.darcy_velocity)))
        fail("v_D must be >= 0 and finite");
    const double norm = std::hypot(s.flow_dir.x, s.flow_dir.y);
    if (std::abs(norm - 1.0) > 1e-9) fail("flow_dir must have norm 1 within 1e-9");
}

double drawdown_limit(const HydroSample& s) {
    return kDrawdownFactor * s.conductivity * s.thickness * s.thickness;
}

double upconing_limit(const HydroSample& s) {
    const double headroom = s.level_max - s.level_natural;
    if (headroom <= 0.0) return 0.0;
    return headroom * s.conductivity * std::pow(s.thickness, kUpconingExponent) *
           std::exp(kUpconingGradientScale * s.gradient);
}

double breakthrough_param(const HydroSample& s) {
    return kBreakthroughFactor * darcy(s) * s.thickness;
}

double breakthrough_limit(double alpha, double internal_distance) {
    return alpha * internal_distance;
}

TapLimits tap_limits(const HydroSample& s) {
    return TapLimits{drawdown_limit(s), upconing_limit(s), breakthrough_param(s)};
}

}  // namespace doubletopt
