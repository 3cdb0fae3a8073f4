#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tomo {

struct Point {
    double r = 0.0; // major radius [m]
    double z = 0.0; // height [m]
};

struct BoundingBox {
    double r_min, r_max, z_min, z_max;
};

struct GridSpec {
    int n_r = 28;
    int n_z = 30;
    double r_min = 1.1, r_max = 2.7; // [m]
    double z_min = -1.5, z_max = 1.5; // [m]
};

/// Rectangular reconstruction grid over the poloidal cross-section.
///
/// Nodes are cell centers, stored row-major in Z rows: node (ir, iz) has flat
/// index iz * n_r + ir. The total node count m = n_r * n_z is the dimension of
/// every field vector in the reconstruction.
class Grid {
public:
    explicit Grid(const GridSpec& spec);

    int n_r() const { return spec_.n_r; }
    int n_z() const { return spec_.n_z; }
    int node_count() const { return spec_.n_r * spec_.n_z; }
    double dr() const { return dr_; }
    double dz() const { return dz_; }
    const GridSpec& spec() const { return spec_; }
    BoundingBox box() const {
        return {spec_.r_min, spec_.r_max, spec_.z_min, spec_.z_max};
    }

    int node_index(int ir, int iz) const { return iz * spec_.n_r + ir; }
    Point node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<Point>& nodes() const { return nodes_; }

private:
    GridSpec spec_;
    double dr_ = 0.0, dz_ = 0.0;
    std::vector<Point> nodes_;
};

/// Validating constructor entry point; throws ConfigError naming the offending
/// field for malformed bounds or cell counts < 1.
Grid build_grid(const GridSpec& spec);

/// A sight line through the poloidal plane: the infinite line through `pivot`
/// at `angle_deg` counterclockwise from the +R axis, later clipped to a grid
/// bounding box. Horizontal channels have angle 0; for them the pivot R is
/// immaterial.
struct Chord {
    Point pivot;
    double angle_deg = 0.0;
    bool enabled = true;
};

struct ClippedChord {
    Point entry;
    Point exit;
    double length = 0.0; // [m], > 0 for any chord that crosses the box
};

/// Intersection of the chord's infinite line with the box; nullopt when the
/// line misses the box or only touches it tangentially (zero length).
std::optional<ClippedChord> clip_to_box(const Chord& chord, const BoundingBox& box);

/// The 13 interferometer channels: 8 horizontal chords (angle 0) at
/// Z = 0.765, 0.200, 0.100, 0, -0.100, -0.200, -0.760, -0.970 m and 5 oblique
/// chords pivoted on the R = 1.050 m column at Z = 0.724, 0.615, -0.518,
/// -0.626, -0.733 m with angles -23, -23, 21.5, 21.5, 21.5 degrees.
/// All chords start enabled.
std::vector<Chord> default_fir_chords();

/// Linear forward model d = R * F: entry (j, i) is the exact path length of
/// chord j through grid cell i (piecewise-constant basis).
struct ContributionMatrix {
    Eigen::MatrixXd entries;             // k x m, path lengths [m], all >= 0
    std::vector<Chord> chords;           // the k chords the rows correspond to
    std::vector<double> clipped_lengths; // per chord, inside the box [m]
};

/// Builds R by parametric traversal of the cell lattice: cells are visited in
/// order along each chord and segment lengths between successive boundary
/// crossings accumulate into the cell the segment midpoint falls in. Row j
/// sums to the clipped length of chord j. Throws ConfigError naming the first
/// chord that misses the bounding box entirely.
ContributionMatrix contribution_matrix(const Grid& grid, std::span<const Chord> chords);

} // namespace tomo
