#include "tomo/flux.hpp"

#include <string>

#include "tomo/errors.hpp"

namespace tomo {

void validate(const FluxModel& model) {
    if (!(model.a > 0.0))
        throw ConfigError("flux_model: a must be > 0 (got " + std::to_string(model.a) + ")");
    if (!(model.b > 0.0))
        throw ConfigError("flux_model: b must be > 0 (got " + std::to_string(model.b) + ")");
}

double normalized_flux(const FluxModel& model, Point p) {
    const double dz = (p.z - model.z0) / model.b;
    const double dr0 = (p.r - model.r0) / model.a;
    const double psi0 = dr0 * dr0 + dz * dz;
    if (model.shift == 0.0)
        return psi0;
    const double dr = (p.r - model.r0 - model.shift * (1.0 - psi0)) / model.a;
    return dr * dr + dz * dz;
}

bool inside_lcfs(const FluxModel& model, Point p) {
    return normalized_flux(model, p) < 1.0;
}

FluxMap flux_map(const FluxModel& model, const Grid& grid) {
    FluxMap map;
    map.psi.reserve(static_cast<std::size_t>(grid.node_count()));
    for (const Point& node : grid.nodes())
        map.psi.push_back(normalized_flux(model, node));
    return map;
}

} // namespace tomo
