#pragma once

#include <optional>

namespace doubletopt {

/// Unit vector in the horizontal plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Groundwater parameters at a point. Strict SI: m, s, m3/s.
///
/// v_d is optional on input; when absent it is derived from Darcy's law
/// (v_d = K * grad_h) wherever a Darcy velocity is needed.
struct HydroSample {
    double conductivity = 0.0;       ///< K [m/s]
    double thickness = 0.0;          ///< B, saturated aquifer thickness [m]
    double level_natural = 0.0;      ///< h_n [m]
    double level_max = 0.0;          ///< h_max, allowed groundwater level [m]
    double gradient = 0.0;           ///< hydraulic gradient [-]
    std::optional<double> darcy_velocity;  ///< v_D [m/s]
    Vec2 flow_dir{1.0, 0.0};         ///< unit vector of groundwater flow
};

/// Per-well pumping limits. All rates in m3/s, alpha in m2/s.
struct TapLimits {
    double q_drawdown = 0.0;   ///< q_d, pump rate at the drawdown threshold
    double q_upconing = 0.0;   ///< q_f, injection rate at the upconing threshold
    double alpha = 0.0;        ///< hydraulic breakthrough parameter
};

/// Throws ValidationError if the sample violates its invariants
/// (non-negative K, B, grad_h, v_D; unit-norm flow direction).
/// `context` is prepended to the error message.
void validate(const HydroSample& s, const char* context = "sample");

/// Pump rate of a doublet at the drawdown threshold [m3/s].
double drawdown_limit(const HydroSample& s);

/// Maximum injection rate at the upconing (flooding) threshold [m3/s].
/// Negative headroom (level_max < level_natural) clamps to zero.
double upconing_limit(const HydroSample& s);

/// Hydraulic breakthrough parameter alpha [m2/s]. Uses the explicit Darcy
/// velocity when present, otherwise K * grad_h.
double breakthrough_param(const HydroSample& s);

/// Maximum pumping rate at the hydraulic breakthrough threshold [m3/s]
/// for a doublet with the given internal well distance.
double breakthrough_limit(double alpha, double internal_distance);

/// All three TAP limits for one sample.
TapLimits tap_limits(const HydroSample& s);

/// Rate unit conversions used at I/O boundaries only; everything internal
/// is m3/s.
constexpr double lps_to_si(double lps) { return lps / 1000.0; }
constexpr double si_to_lps(double si) { return si * 1000.0; }

}  // namespace doubletopt
