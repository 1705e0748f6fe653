#include "catbranch/model.hpp"

#include <cmath>
#include <string>

#include "catbranch/errors.hpp"

namespace catbranch {

PacketLabel PacketLabel::from_index(unsigned idx, int n) {
  PacketLabel lbl;
  lbl.a.resize(n);
  for (int i = 0; i < n; ++i) lbl.a[i] = static_cast<uint8_t>((idx >> i) & 1u);
  return lbl;
}

unsigned PacketLabel::index() const {
  unsigned idx = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) idx |= 1u << i;
  return idx;
}

std::string PacketLabel::bits() const {
  std::string s;
  s.reserve(a.size());
  for (uint8_t bit : a) s.push_back(bit ? '1' : '0');
  return s;
}

RealMatrix potential_matrix(const OscillatorNetwork& net) {
  int n = net.n;
  RealMatrix v(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = net.external_k[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double k = net.coupling_k(i, j);
      diag += k;
      v(i, j) = -k;
    }
    v(i, i) = diag;
  }
  return v;
}

double potential_energy(const OscillatorNetwork& net, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != net.n)
    throw SimError(ErrorCode::DimensionMismatch, "potential_energy coordinate count");
  double e = 0.0;
  for (int i = 0; i < net.n; ++i) {
    e += 0.5 * net.external_k[i] * x[i] * x[i];
    for (int j = i + 1; j < net.n; ++j) {
      double dx = x[i] - x[j];
      e += 0.5 * net.coupling_k(i, j) * dx * dx;
    }
  }
  return e;
}

ValidatedConfig validate(const OscillatorNetwork& net, const CatSpec& cat,
                         int max_particles) {
  int n = net.n;
  if (n < 1) throw SimError(ErrorCode::ValidationError, "need at least one particle");
  if (n > max_particles)
    throw SimError(ErrorCode::TooManyParticles,
                   "n = " + std::to_string(n) + " exceeds cap " + std::to_string(max_particles));
  if (static_cast<int>(net.masses.size()) != n ||
      static_cast<int>(net.external_k.size()) != n ||
      net.coupling_k.rows != n || net.coupling_k.cols != n)
    throw SimError(ErrorCode::DimensionMismatch, "network field sizes disagree with n");
  if (static_cast<int>(cat.d.size()) != n || static_cast<int>(cat.sigma.size()) != n)
    throw SimError(ErrorCode::DimensionMismatch, "cat field sizes disagree with n");

  for (int i = 0; i < n; ++i) {
    if (!(net.masses[i] > 0.0))
      throw SimError(ErrorCode::NegativeMass, "mass of particle " + std::to_string(i + 1));
    if (net.external_k[i] < 0.0)
      throw SimError(ErrorCode::ValidationError,
                     "external_k of particle " + std::to_string(i + 1) + " is negative");
    if (!(cat.sigma[i] > 0.0))
      throw SimError(ErrorCode::NonPositiveWidth, "sigma of particle " + std::to_string(i + 1));
  }
  for (int i = 0; i < n; ++i) {
    if (net.coupling_k(i, i) != 0.0)
      throw SimError(ErrorCode::ValidationError, "coupling diagonal must be zero");
    for (int j = i + 1; j < n; ++j) {
      if (net.coupling_k(i, j) != net.coupling_k(j, i))
        throw SimError(ErrorCode::AsymmetricCoupling,
                       "coupling (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (net.coupling_k(i, j) < 0.0)
        throw SimError(ErrorCode::ValidationError, "coupling constants must be >= 0");
    }
  }
  if (net.system_index < 0 || net.system_index >= n)
    throw SimError(ErrorCode::ValidationError, "system index out of range");
  if (!(cat.hbar > 0.0))
    throw SimError(ErrorCode::ValidationError, "hbar must be positive");
  if (cat.t0 != 0.0)
    throw SimError(ErrorCode::ValidationError, "t0 must be 0");

  ValidatedConfig cfg;
  cfg.network = net;
  cfg.cat = cat;
  cfg.potential = potential_matrix(net);
  try {
    cfg.basis = eigendecompose(mass_weighted(cfg.potential, net.masses), net.masses);
  } catch (const SimError& e) {
    if (e.code() == ErrorCode::NegativeEigenvalue)
      throw SimError(ErrorCode::IndefinitePotential, e.what());
    throw;
  }
  return cfg;
}

}  // namespace catbranch
