#pragma once

#include <string>
#include <vector>

#include "tomo/experiments.hpp"
#include "tomo/pipeline.hpp"

namespace tomo {

/// Shortest round-trip decimal representation; keeps CSV output byte-stable
/// across reruns.
std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& content);

void write_synthetic_field_csv(const std::string& path, const Grid& grid,
                               const SyntheticField& field);
void write_flux_map_csv(const std::string& path, const Grid& grid, const FluxMap& map);
void write_line_measurements_csv(const std::string& path, const LineMeasurements& meas);
void write_point_measurements_csv(const std::string& path, const PointMeasurements& pts);
void write_posterior_csv(const std::string& path, const Grid& grid, const PosteriorResult& post);

/// Raw dump of a covariance matrix: two little-endian int64 dimensions
/// followed by row-major doubles.
void write_covariance_binary(const std::string& path, const Eigen::MatrixXd& cov);
void write_back_projection_csv(const std::string& path, const LineMeasurements& meas,
                               const PosteriorResult& post);
void write_evidence_surface_csv(const std::string& path,
                                const std::vector<EvidencePoint>& surface);
void write_grid_sweep_csv(const std::string& path, const std::vector<GridSweepRow>& rows);
void write_stddev_sweep_csv(const std::string& path, const std::vector<StdDevSweepRow>& rows);
void write_ensemble_stats_csv(const std::string& path, const std::vector<EnsembleStats>& rows);
void write_ensemble_samples_csv(const std::string& path, const EnsembleStats& stats);
void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins);

} // namespace tomo
