#pragma once

#include <functional>
#include <vector>

#include "catbranch/gaussian.hpp"
#include "catbranch/linalg.hpp"
#include "catbranch/model.hpp"

namespace catbranch {

// Independent checks the analytic pipeline is tested against: composite
// Simpson quadrature for Gaussian-term integrals, Strang split-operator grid
// propagation with a spectral kinetic step, and RK4 for the classical
// equations of motion.

struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;  // odd, >= 3
};

struct QuadratureSpec {
  std::vector<AxisSpec> axes;
};

// Composite Simpson rule for a scalar function; points odd, >= 3. No decay
// requirement on f (unlike quad_integrate).
double simpson_integrate(const std::function<double(double)>& f, double lo, double hi,
                         int points);

// Tensor-product composite Simpson integral of evaluate(term, x). Throws
// BoundaryMassTooLarge when the integrand magnitude on the domain boundary
// reaches 1e-12 of its maximum (the domain fails to contain the mass).
cplx quad_integrate(const ComplexGaussianTerm& term, const QuadratureSpec& spec);

// Uniform periodic grid per dimension: x_j = lo + j (hi - lo) / points,
// j = 0 .. points-1 (right endpoint excluded), row-major values.
struct GridWavefunction {
  std::vector<int> shape;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<cplx> values;

  size_t size() const;
  double dx(int d) const { return (hi[d] - lo[d]) / shape[d]; }
  double cell_volume() const;
};

// Fills psi on the grid by summing evaluate() of the given terms.
GridWavefunction sample_terms(const std::vector<int>& shape, const std::vector<double>& lo,
                              const std::vector<double>& hi,
                              const std::vector<ComplexGaussianTerm>& terms);

std::vector<double> quadratic_potential_grid(const std::vector<int>& shape,
                                             const std::vector<double>& lo,
                                             const std::vector<double>& hi,
                                             const RealMatrix& v);

// Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) for `steps` steps
// of dt = t / steps; the kinetic factor is applied in Fourier space. Supports
// 1 to 3 dimensions. Before stepping, the occupied bandwidth of psi0 must
// keep the kinetic phase per step below pi/4, else ResolutionTooCoarse.
GridWavefunction grid_evolve(const GridWavefunction& psi0, const std::vector<double>& masses,
                             const std::vector<double>& potential_values, double hbar,
                             double t, int steps);

double grid_norm(const GridWavefunction& psi);

// Classic RK4 on dx/dt = v, dv/dt = -M^{-1} V x from rest at the labeled
// packet centers. Samples every `stride` steps (and the final step).
struct Rk4Result {
  std::vector<double> times;
  std::vector<std::vector<std::vector<double>>> positions;   // [label][sample][coord]
  std::vector<std::vector<std::vector<double>>> velocities;  // [label][sample][coord]
};

Rk4Result rk4_trajectories(const ValidatedConfig& cfg, const std::vector<PacketLabel>& labels,
                           double dt, double t_end, int stride = 1);

}  // namespace catbranch
