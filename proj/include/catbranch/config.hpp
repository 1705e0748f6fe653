#pragma once

#include <string>
#include <vector>

#include "catbranch/model.hpp"
#include "catbranch/reduced_density.hpp"

namespace catbranch {

// Everything a run needs. Defaults mirror the three-particle reference setup:
// grid [-12, 12] with 1201 points, snapshots at 0.505 + 0.5 k (k = 0..11),
// i_max series step 0.05 up to 6.005, classical sampling step 0.005.
struct RunConfig {
  OscillatorNetwork network;
  CatSpec cat;
  GridSpec grid;
  std::vector<double> snapshot_times;
  double series_dt = 0.05;
  double series_t_max = 6.005;
  double classical_dt = 0.005;

  // 0, dt, 2 dt, ... plus the endpoint when the steps do not land on it
  std::vector<double> series_times() const;
  std::vector<double> classical_times() const;
};

std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);  // ParseError on unknown name

// INI-style text: [network] / [cat] / [grid] / [times] sections, `key = value`
// lines, `#` comments, space-separated numeric lists, couplings as
// coupling_<i>_<j> with 1-based particle indices. An optional leading
// `preset = <name>` line seeds every field before explicit keys override.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Canonical fully-expanded text; parse_config_text returns an identical
// config (preset provenance is not recorded).
std::string config_echo(const RunConfig& cfg);

// Pulls the echo block back out of summary.txt content.
std::string extract_config_echo(const std::string& summary_text);

bool config_equal(const RunConfig& a, const RunConfig& b);

}  // namespace catbranch
