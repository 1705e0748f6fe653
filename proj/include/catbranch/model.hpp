#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catbranch/linalg.hpp"
#include "catbranch/normal_modes.hpp"

namespace catbranch {

// Network of point masses on springs: each particle i feels an on-site spring
// external_k[i] plus pairwise springs coupling_k(i,j) acting on the coordinate
// difference x_i - x_j. system_index selects the particle whose reduced density
// is observed (0-based internally, 1-based in config files).
struct OscillatorNetwork {
  int n = 0;
  std::vector<double> masses;
  std::vector<double> external_k;
  RealMatrix coupling_k;
  int system_index = 0;
};

// Initial product of one-particle cat states: particle i is an equal-weight
// superposition of unit-amplitude Gaussians of width sigma[i] centered at 0 and
// at d[i]. t0 is fixed at 0.
struct CatSpec {
  std::vector<double> d;
  std::vector<double> sigma;
  double hbar = 1.0;
  double t0 = 0.0;
};

// Branch label: a[i] = 0 means particle i starts in its origin packet,
// a[i] = 1 in the displaced packet. index() packs particle 0 into the lowest
// bit; bits() prints in particle order (particle 1 first).
struct PacketLabel {
  std::vector<uint8_t> a;

  static PacketLabel from_index(unsigned idx, int n);
  unsigned index() const;
  std::string bits() const;

  bool operator==(const PacketLabel& other) const { return a == other.a; }
};

RealMatrix potential_matrix(const OscillatorNetwork& net);

double potential_energy(const OscillatorNetwork& net, const std::vector<double>& x);

struct ValidatedConfig {
  OscillatorNetwork network;
  CatSpec cat;
  RealMatrix potential;
  NormalModeBasis basis;
};

// Checks all field constraints, builds V and the normal-mode basis. The
// max_particles cap keeps 4^n pair-term counts bounded.
ValidatedConfig validate(const OscillatorNetwork& net, const CatSpec& cat,
                         int max_particles = 8);

}  // namespace catbranch
