#include "tomo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    if (spec.n_r < 1)
        throw ConfigError("grid: n_r must be >= 1 (got " + std::to_string(spec.n_r) + ")");
    if (spec.n_z < 1)
        throw ConfigError("grid: n_z must be >= 1 (got " + std::to_string(spec.n_z) + ")");
    if (!(spec.r_min < spec.r_max))
        throw ConfigError("grid: r_min must be < r_max");
    if (!(spec.z_min < spec.z_max))
        throw ConfigError("grid: z_min must be < z_max");

    dr_ = (spec.r_max - spec.r_min) / spec.n_r;
    dz_ = (spec.z_max - spec.z_min) / spec.n_z;

    nodes_.reserve(static_cast<std::size_t>(node_count()));
    for (int iz = 0; iz < spec.n_z; ++iz)
        for (int ir = 0; ir < spec.n_r; ++ir)
            nodes_.push_back({spec.r_min + (ir + 0.5) * dr_, spec.z_min + (iz + 0.5) * dz_});
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

namespace {

struct Direction {
    double cr, cz; // unit vector along the chord
};

Direction chord_direction(const Chord& chord) {
    const double rad = chord.angle_deg * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

} // namespace

std::optional<ClippedChord> clip_to_box(const Chord& chord, const BoundingBox& box) {
    const auto [cr, cz] = chord_direction(chord);

    // Slab clipping of the infinite line p + t * (cr, cz).
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();

    auto clip_axis = [&](double p, double c, double lo, double hi) {
        if (c == 0.0)
            return p >= lo && p <= hi;
        double ta = (lo - p) / c;
        double tb = (hi - p) / c;
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return true;
    };

    if (!clip_axis(chord.pivot.r, cr, box.r_min, box.r_max))
        return std::nullopt;
    if (!clip_axis(chord.pivot.z, cz, box.z_min, box.z_max))
        return std::nullopt;
    if (!(t1 > t0))
        return std::nullopt;

    ClippedChord out;
    out.entry = {chord.pivot.r + t0 * cr, chord.pivot.z + t0 * cz};
    out.exit = {chord.pivot.r + t1 * cr, chord.pivot.z + t1 * cz};
    out.length = t1 - t0;
    return out;
}

std::vector<Chord> default_fir_chords() {
    constexpr double kPivotR = 1.050; // reference column shared with the oblique channels

    std::vector<Chord> chords;
    chords.reserve(13);
    for (double z : {0.765, 0.200, 0.100, 0.0, -0.100, -0.200, -0.760, -0.970})
        chords.push_back({{kPivotR, z}, 0.0, true});

    chords.push_back({{kPivotR, 0.724}, -23.0, true});
    chords.push_back({{kPivotR, 0.615}, -23.0, true});
    chords.push_back({{kPivotR, -0.518}, 21.5, true});
    chords.push_back({{kPivotR, -0.626}, 21.5, true});
    chords.push_back({{kPivotR, -0.733}, 21.5, true});
    return chords;
}

ContributionMatrix contribution_matrix(const Grid& grid, std::span<const Chord> chords) {
    const BoundingBox box = grid.box();
    const int k = static_cast<int>(chords.size());
    const int m = grid.node_count();

    ContributionMatrix out;
    out.entries = Eigen::MatrixXd::Zero(k, m);
    out.chords.assign(chords.begin(), chords.end());
    out.clipped_lengths.resize(static_cast<std::size_t>(k));

    std::vector<double> crossings;
    for (int j = 0; j < k; ++j) {
        const auto clipped = clip_to_box(chords[j], box);
        if (!clipped)
            throw ConfigError("chord " + std::to_string(j) +
                              " does not intersect the grid bounding box");
        out.clipped_lengths[static_cast<std::size_t>(j)] = clipped->length;

        const auto [cr, cz] = chord_direction(chords[j]);
        const Point origin = clipped->entry;
        const double len = clipped->length;

        // Collect the parameters of every interior cell-boundary crossing.
        crossings.clear();
        crossings.push_back(0.0);
        crossings.push_back(len);
        if (cr != 0.0) {
            for (int i = 1; i < grid.n_r(); ++i) {
                const double t = (box.r_min + i * grid.dr() - origin.r) / cr;
                if (t > 0.0 && t < len)
                    crossings.push_back(t);
            }
        }
        if (cz != 0.0) {
            for (int i = 1; i < grid.n_z(); ++i) {
                const double t = (box.z_min + i * grid.dz() - origin.z) / cz;
                if (t > 0.0 && t < len)
                    crossings.push_back(t);
            }
        }
        std::sort(crossings.begin(), crossings.end());

        // Segment midpoints identify the traversed cell; duplicated crossing
        // parameters (corner hits) produce zero-length segments and drop out.
        for (std::size_t s = 0; s + 1 < crossings.size(); ++s) {
            const double seg = crossings[s + 1] - crossings[s];
            if (seg <= 0.0)
                continue;
            const double tm = 0.5 * (crossings[s] + crossings[s + 1]);
            const double rm = origin.r + tm * cr;
            const double zm = origin.z + tm * cz;
            const int ir = std::clamp(static_cast<int>(std::floor((rm - box.r_min) / grid.dr())),
                                      0, grid.n_r() - 1);
            const int iz = std::clamp(static_cast<int>(std::floor((zm - box.z_min) / grid.dz())),
                                      0, grid.n_z() - 1);
            out.entries(j, grid.node_index(ir, iz)) += seg;
        }
    }
    return out;
}

} // namespace tomo
