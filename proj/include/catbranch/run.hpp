#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "catbranch/classical.hpp"
#include "catbranch/config.hpp"
#include "catbranch/model.hpp"
#include "catbranch/reduced_density.hpp"

namespace catbranch {

struct SeriesPoint {
  double t = 0.0;
  double i_max = 0.0;
  double norm = 0.0;
};

std::vector<SeriesPoint> series_detail(const ValidatedConfig& cfg,
                                       const std::vector<double>& times, const GridSpec& grid,
                                       int threads = 0);

// Full-state mean positions <x_i>(t), one per particle.
std::vector<double> quantum_mean_position(const ValidatedConfig& cfg, double t);

struct RunStats {
  size_t series_points = 0;
  size_t snapshot_count = 0;
  size_t crossing_count = 0;
  double norm_initial = 0.0;
  double norm_drift_rel_max = 0.0;
  double imax_initial = 0.0;
  double imax_final = 0.0;
  double imax_time_avg = 0.0;
  double imax_retention = 0.0;
  double b_time_avg = 0.0;
  double mean_imax_at_crossings = 0.0;
  double mean_b_at_crossings = 0.0;
};

// Writes snapshots.csv, imax.csv, classical.csv, branching.csv, crossings.csv
// and summary.txt under out_dir (created if missing). Deterministic output:
// identical config gives byte-identical files.
RunStats run_simulation(const RunConfig& cfg, const std::string& out_dir, int threads = 0);

// Classical-only artifacts: classical.csv, branching.csv, crossings.csv
// (without the interference column).
RunStats run_classical(const RunConfig& cfg, const std::string& out_dir, int threads = 0);

// Internal consistency checks on the given configuration; one PASS/FAIL line
// per check on log. Returns the number of failures.
int run_verify(const RunConfig& cfg, bool full, std::ostream& log, int threads = 0);

}  // namespace catbranch
