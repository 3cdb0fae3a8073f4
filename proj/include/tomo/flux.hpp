#pragma once

#include <vector>

#include "tomo/geometry.hpp"

namespace tomo {

/// Analytic normalized-flux model: nested elliptical surfaces around a
/// magnetic axis, psi = 0 at the axis and exactly 1 on the last closed flux
/// surface (LCFS). A nonzero `shift` pushes inner surfaces outward while the
/// LCFS stays put:
///
///   psi0 = ((R - R0)/a)^2 + ((Z - Z0)/b)^2
///   psi  = ((R - R0 - shift * (1 - psi0))/a)^2 + ((Z - Z0)/b)^2
///
/// With shift != 0 the flux minimum sits near R0 + shift rather than exactly
/// at (R0, Z0).
struct FluxModel {
    double r0 = 1.85;   // axis major radius [m]
    double z0 = 0.0;    // axis height [m]
    double a = 0.65;    // LCFS horizontal semi-axis [m]
    double b = 1.05;    // LCFS vertical semi-axis [m]
    double shift = 0.0; // outward shift of inner surfaces (dimensionless)
};

void validate(const FluxModel& model);

/// psi at a point; continuous, >= 0 everywhere, defined on all of R^2.
double normalized_flux(const FluxModel& model, Point p);

/// Strictly inside the LCFS: psi < 1. Points exactly on the LCFS count as
/// outside, so masking and profile clamping treat the surface itself as edge.
bool inside_lcfs(const FluxModel& model, Point p);

/// psi evaluated at every grid node, in node order.
struct FluxMap {
    std::vector<double> psi;
};

FluxMap flux_map(const FluxModel& model, const Grid& grid);

} // namespace tomo
