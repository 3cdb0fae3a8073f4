#include <doctest.h>

#include <cmath>

#include "tomo/errors.hpp"
#include "tomo/flux.hpp"

using namespace tomo;

namespace {
// Exactly representable parameters so the LCFS checks are bit-exact.
const FluxModel kExact{2.0, 0.0, 0.5, 1.0, 0.0};
} // namespace

TEST_CASE("flux vanishes at the axis and is 1 on the LCFS") {
    CHECK(normalized_flux(kExact, {kExact.r0, kExact.z0}) == 0.0);
    CHECK(normalized_flux(kExact, {kExact.r0 + kExact.a, kExact.z0}) == 1.0);
    CHECK(normalized_flux(kExact, {kExact.r0, kExact.z0 + kExact.b}) == 1.0);
    CHECK(normalized_flux(kExact, {kExact.r0 + kExact.a / 2.0, kExact.z0 + kExact.b / 2.0}) ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("default model satisfies the axis and LCFS conventions") {
    const FluxModel model;
    CHECK(normalized_flux(model, {model.r0, model.z0}) == 0.0);
    CHECK(normalized_flux(model, {model.r0 + model.a, model.z0}) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("inside_lcfs is strict") {
    CHECK(inside_lcfs(kExact, {kExact.r0, kExact.z0}));
    CHECK_FALSE(inside_lcfs(kExact, {kExact.r0 + 2.0 * kExact.a, kExact.z0}));
    // a point exactly on the LCFS counts as outside
    CHECK_FALSE(inside_lcfs(kExact, {kExact.r0 + kExact.a, kExact.z0}));
}

TEST_CASE("shifted surfaces keep the LCFS in place") {
    FluxModel shifted = kExact;
    shifted.shift = 0.08;
    CHECK(normalized_flux(shifted, {shifted.r0 + shifted.a, shifted.z0}) == 1.0);
    // the minimum moves toward r0 + shift
    const double at_axis = normalized_flux(shifted, {shifted.r0, shifted.z0});
    const double at_shifted = normalized_flux(shifted, {shifted.r0 + shifted.shift, shifted.z0});
    CHECK(at_shifted < at_axis);
    // still nonnegative everywhere sampled
    for (double r = 0.5; r < 3.5; r += 0.1)
        for (double z = -1.5; z < 1.5; z += 0.1)
            CHECK(normalized_flux(shifted, {r, z}) >= 0.0);
}

TEST_CASE("flux model validation") {
    CHECK_THROWS_AS(validate(FluxModel{2.0, 0.0, 0.0, 1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(validate(FluxModel{2.0, 0.0, 0.5, -1.0, 0.0}), ConfigError);
    CHECK_NOTHROW(validate(kExact));
}

TEST_CASE("flux map of degenerate grids") {
    SUBCASE("single node at the axis") {
        // one cell centered exactly on the axis
        const Grid grid(GridSpec{1, 1, kExact.r0 - 0.25, kExact.r0 + 0.25, -0.5, 0.5});
        const auto map = flux_map(kExact, grid);
        REQUIRE(map.psi.size() == 1);
        CHECK(map.psi[0] == 0.0);
    }
    SUBCASE("two nodes at the axis and on the LCFS") {
        const Grid grid(GridSpec{2, 1, kExact.r0 - 0.25, kExact.r0 + 0.75, -0.5, 0.5});
        const auto map = flux_map(kExact, grid);
        REQUIRE(map.psi.size() == 2);
        CHECK(map.psi[0] == 0.0);
        CHECK(map.psi[1] == 1.0);
    }
}

TEST_CASE("flux map agrees with pointwise evaluation") {
    const FluxModel model;
    const Grid grid(GridSpec{11, 13, 1.1, 2.7, -1.5, 1.5});
    const auto map = flux_map(model, grid);
    REQUIRE(static_cast<int>(map.psi.size()) == grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i)
        CHECK(map.psi[static_cast<std::size_t>(i)] == normalized_flux(model, grid.node(i)));
}

TEST_CASE("flux is monotone along the outboard midplane") {
    const FluxModel model;
    double previous = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double r = model.r0 + 1.2 * model.a * i / 200.0;
        const double psi = normalized_flux(model, {r, model.z0});
        CHECK(psi >= previous);
        previous = psi;
    }
}

TEST_CASE("flux is symmetric under Z reflection") {
    const FluxModel model; // z0 = 0, shift = 0
    for (double r = 1.1; r < 2.7; r += 0.13)
        for (double z = 0.0; z < 1.5; z += 0.11)
            CHECK(normalized_flux(model, {r, z}) == normalized_flux(model, {r, -z}));
}

TEST_CASE("level sets are nested along rays from the axis") {
    const FluxModel model;
    for (double angle = 0.0; angle < 6.28; angle += 0.37) {
        const double ur = std::cos(angle), uz = std::sin(angle);
        double previous = -1.0;
        for (int i = 1; i <= 40; ++i) {
            const double t = 0.05 * i;
            const double psi =
                normalized_flux(model, {model.r0 + t * ur, model.z0 + t * uz});
            CHECK(psi >= previous);
            previous = psi;
        }
    }
}
