#include "tomo/csv.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "tomo/errors.hpp"

namespace tomo {

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc())
        throw NumericalError("format_double: conversion failed");
    return std::string(buffer, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw IoError("write failed: " + path);
}

namespace {

std::string node_table(const Grid& grid, const std::vector<double>& values,
                       const char* value_header) {
    std::ostringstream out;
    out << "node_index,r,z," << value_header << "\n";
    for (int i = 0; i < grid.node_count(); ++i) {
        const Point p = grid.node(i);
        out << i << ',' << format_double(p.r) << ',' << format_double(p.z) << ','
            << format_double(values[static_cast<std::size_t>(i)]) << "\n";
    }
    return out.str();
}

} // namespace

void write_synthetic_field_csv(const std::string& path, const Grid& grid,
                               const SyntheticField& field) {
    write_text_file(path, node_table(grid, field.values, "value"));
}

void write_flux_map_csv(const std::string& path, const Grid& grid, const FluxMap& map) {
    write_text_file(path, node_table(grid, map.psi, "psi_norm"));
}

void write_line_measurements_csv(const std::string& path, const LineMeasurements& meas) {
    std::ostringstream out;
    out << "channel,d,variance\n";
    for (Eigen::Index j = 0; j < meas.values.size(); ++j)
        out << meas.channels[static_cast<std::size_t>(j)] << ','
            << format_double(meas.values[j]) << ',' << format_double(meas.variances[j]) << "\n";
    write_text_file(path, out.str());
}

void write_point_measurements_csv(const std::string& path, const PointMeasurements& pts) {
    std::ostringstream out;
    out << "index,r,z,value,sigma_star\n";
    for (Eigen::Index i = 0; i < pts.values.size(); ++i) {
        const Point p = pts.locations[static_cast<std::size_t>(i)];
        out << i << ',' << format_double(p.r) << ',' << format_double(p.z) << ','
            << format_double(pts.values[i]) << ',' << format_double(pts.sigma_star) << "\n";
    }
    write_text_file(path, out.str());
}

void write_posterior_csv(const std::string& path, const Grid& grid, const PosteriorResult& post) {
    std::ostringstream out;
    out << "node_index,r,z,mean,std\n";
    for (int i = 0; i < grid.node_count(); ++i) {
        const Point p = grid.node(i);
        out << i << ',' << format_double(p.r) << ',' << format_double(p.z) << ','
            << format_double(post.field.mean[i]) << ',' << format_double(post.node_std[i])
            << "\n";
    }
    write_text_file(path, out.str());
}

void write_covariance_binary(const std::string& path, const Eigen::MatrixXd& cov) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    const std::int64_t rows = cov.rows();
    const std::int64_t cols = cov.cols();
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
        for (Eigen::Index j = 0; j < cov.cols(); ++j) {
            const double value = cov(i, j);
            out.write(reinterpret_cast<const char*>(&value), sizeof(value));
        }
    if (!out)
        throw IoError("write failed: " + path);
}

void write_back_projection_csv(const std::string& path, const LineMeasurements& meas,
                               const PosteriorResult& post) {
    std::ostringstream out;
    out << "channel,measured,back_projection,residual\n";
    for (Eigen::Index j = 0; j < meas.values.size(); ++j)
        out << meas.channels[static_cast<std::size_t>(j)] << ','
            << format_double(meas.values[j]) << ',' << format_double(post.back_projection[j])
            << ',' << format_double(post.back_projection[j] - meas.values[j]) << "\n";
    write_text_file(path, out.str());
}

void write_evidence_surface_csv(const std::string& path,
                                const std::vector<EvidencePoint>& surface) {
    std::ostringstream out;
    out << "sigma,length,log_evidence\n";
    for (const auto& point : surface)
        out << format_double(point.sigma) << ',' << format_double(point.length) << ','
            << format_double(point.log_ev) << "\n";
    write_text_file(path, out.str());
}

void write_grid_sweep_csv(const std::string& path, const std::vector<GridSweepRow>& rows) {
    std::ostringstream out;
    out << "n_r,n_z,m,sigma,length,xi_max,xi_bar,rrmse,row_sum_error\n";
    for (const auto& row : rows)
        out << row.grid.n_r << ',' << row.grid.n_z << ',' << row.node_count << ','
            << format_double(row.hyper.sigma) << ',' << format_double(row.hyper.length) << ','
            << format_double(row.metrics.xi_max) << ',' << format_double(row.metrics.xi_bar)
            << ',' << format_double(row.metrics.rrmse) << ','
            << format_double(row.row_sum_error) << "\n";
    write_text_file(path, out.str());
}

void write_stddev_sweep_csv(const std::string& path, const std::vector<StdDevSweepRow>& rows) {
    std::ostringstream out;
    out << "std_frac,sigma,length,xi_max,xi_bar,rrmse,mean_posterior_std,bp_relative_norm\n";
    for (const auto& row : rows)
        out << format_double(row.level) << ',' << format_double(row.hyper.sigma) << ','
            << format_double(row.hyper.length) << ',' << format_double(row.metrics.xi_max)
            << ',' << format_double(row.metrics.xi_bar) << ','
            << format_double(row.metrics.rrmse) << ',' << format_double(row.mean_posterior_std)
            << ',' << format_double(row.bp_relative_norm) << "\n";
    write_text_file(path, out.str());
}

void write_ensemble_stats_csv(const std::string& path, const std::vector<EnsembleStats>& rows) {
    std::ostringstream out;
    out << "noise_frac,samples,failures,"
           "mean_xi_max,median_xi_max,std_xi_max,"
           "mean_xi_bar,median_xi_bar,std_xi_bar,"
           "mean_rrmse,median_rrmse,std_rrmse\n";
    for (const auto& row : rows)
        out << format_double(row.noise_frac) << ',' << row.completed << ',' << row.failed << ','
            << format_double(row.xi_max_stats.mean) << ','
            << format_double(row.xi_max_stats.median) << ','
            << format_double(row.xi_max_stats.stddev) << ','
            << format_double(row.xi_bar_stats.mean) << ','
            << format_double(row.xi_bar_stats.median) << ','
            << format_double(row.xi_bar_stats.stddev) << ','
            << format_double(row.rrmse_stats.mean) << ','
            << format_double(row.rrmse_stats.median) << ','
            << format_double(row.rrmse_stats.stddev) << "\n";
    write_text_file(path, out.str());
}

void write_ensemble_samples_csv(const std::string& path, const EnsembleStats& stats) {
    std::ostringstream out;
    out << "sample_index,xi_max,xi_bar,rrmse\n";
    for (std::size_t i = 0; i < stats.rrmse.size(); ++i)
        out << i << ',' << format_double(stats.xi_max[i]) << ','
            << format_double(stats.xi_bar[i]) << ',' << format_double(stats.rrmse[i]) << "\n";
    write_text_file(path, out.str());
}

void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins) {
    std::ostringstream out;
    out << "bin_left,bin_right,count\n";
    for (const auto& bin : bins)
        out << format_double(bin.left) << ',' << format_double(bin.right) << ',' << bin.count
            << "\n";
    write_text_file(path, out.str());
}

} // namespace tomo
