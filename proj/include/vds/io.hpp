#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vds/calibration.hpp"
#include "vds/density.hpp"
#include "vds/experiment.hpp"
#include "vds/recon.hpp"
#include "vds/sampler.hpp"
#include "vds/trajectory.hpp"
#include "vds/tsp.hpp"

namespace vds::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Density file: "vds-density d=<d> r=<r>" then r^d values, row-major, last axis fastest.
std::string density_to_string(const DensityGrid& g);
DensityGrid density_from_string(std::string_view text);

/// "radial:<decay>:<plateau_radius>", "uniform", or a path to a density file.
DensityGrid density_from_spec(std::string_view spec, int dim, int resolution);

// Empirical distribution: density format with "kind=empirical"; values are mass * m^d.
std::string empirical_to_string(const PartitionMasses& e);
PartitionMasses empirical_from_string(std::string_view text);

// Points: "# seed=<u64>" then header "x,y[,z,...]" then one point per row.
std::string points_to_string(const PointSet& ps);
PointSet points_from_string(std::string_view text);

// Tour: "# length=<decimal> method=<exact|heuristic>" then header "index".
std::string tour_to_string(const Tour& t);
Tour tour_from_string(std::string_view text);

// Trajectory: "# total_length=<decimal>" then the points layout of the vertices.
std::string trajectory_to_string(const Trajectory& traj);
Trajectory trajectory_from_string(std::string_view text);

std::string beta_to_json(const BetaEstimate& b);
BetaEstimate beta_from_json(std::string_view text);

/// Binary PGM (P5) of pixel magnitudes scaled so the maximum maps to 255.
std::string image_to_pgm(const Image& img);
/// Reads a P5 PGM back as 8-bit gray levels (row-major).
std::vector<unsigned char> pgm_levels(std::string_view data, int* side);

/// Binary PBM (P4); row kx, column ky, black = sampled.
std::string mask_to_pbm(const SamplingMask& mask);
SamplingMask mask_from_pbm(std::string_view data);

/// Raw little-endian float64 pairs (re, im) row-major, plus a JSON sidecar.
void write_image_f64(const std::filesystem::path& path, const Image& img);
Image read_image_f64(const std::filesystem::path& path);

inline constexpr std::string_view kReportHeader = "scheme,seed,n,r,sampled_count,snr_db,iterations,residual";
std::string report_to_csv(const std::vector<ExperimentRun>& runs);

struct ReportRow {
  std::string scheme;
  std::uint64_t seed = 0;
  int n = 0;
  double r = 0.0;
  std::size_t sampled_count = 0;
  double snr_db = 0.0;
  int iterations = 0;
  double residual = 0.0;
};
std::vector<ReportRow> report_from_csv(std::string_view text);

}  // namespace vds::io
