#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catbranch/config.hpp"
#include "catbranch/errors.hpp"
#include "catbranch/model.hpp"
#include "catbranch/normal_modes.hpp"
#include "helpers.hpp"

using namespace catbranch;

namespace {

double det3(const RealMatrix& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST_CASE("mass weighting on simple examples") {
  {
    RealMatrix v(2, 2);
    v(0, 0) = 2.0;
    v(1, 1) = 8.0;
    RealMatrix w = mass_weighted(v, {2.0, 2.0});
    CHECK(w(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w(1, 1) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(w(0, 1) == 0.0);
  }
  {
    RealMatrix v(2, 2);
    v(0, 0) = 2.0;
    v(0, 1) = -1.0;
    v(1, 0) = -1.0;
    v(1, 1) = 2.0;
    RealMatrix w = mass_weighted(v, {1.0, 4.0});
    CHECK(w(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(w(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(w(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  }
  {
    RunConfig cfg = preset_config("weak");
    RealMatrix w = mass_weighted(potential_matrix(cfg.network), cfg.network.masses);
    CHECK(w(0, 0) == doctest::Approx(2.53174 / 1.5).epsilon(1e-14));
  }
}

TEST_CASE("eigendecomposition of the reference weak network") {
  RunConfig cfg = preset_config("weak");
  RealMatrix w = mass_weighted(potential_matrix(cfg.network), cfg.network.masses);
  NormalModeBasis basis = eigendecompose(w, cfg.network.masses);

  double resid = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += w(i, k) * basis.modes(k, j);
      resid = std::max(resid, std::abs(s - basis.omega2[j] * basis.modes(i, j)));
    }
  CHECK(resid <= 1e-12);

  // each eigenvalue is a root of the characteristic polynomial
  for (double w2 : basis.omega2) {
    RealMatrix shifted = w;
    for (int i = 0; i < 3; ++i) shifted(i, i) -= w2;
    CHECK(std::abs(det3(shifted)) <= 1e-10);
  }

  CHECK(basis.omega2[0] < basis.omega2[1]);
  CHECK(basis.omega2[1] < basis.omega2[2]);
  for (bool f : basis.free_mode) CHECK_FALSE(f);
}

TEST_CASE("decoupled network has exactly one free mode") {
  RunConfig cfg = preset_config("decoupled");
  ValidatedConfig vcfg = validate(cfg.network, cfg.cat);
  int free_count = 0;
  for (bool f : vcfg.basis.free_mode) free_count += f ? 1 : 0;
  CHECK(free_count == 1);
  CHECK(vcfg.basis.free_mode[0]);
  CHECK(vcfg.basis.omega2[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mode transforms round-trip and preserve energy") {
  testutil::Rng rng(4242u);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
    OscillatorNetwork net;
    net.n = n;
    net.coupling_k = RealMatrix(n, n);
    for (int i = 0; i < n; ++i) {
      net.masses.push_back(rng.uniform(0.5, 3.0));
      net.external_k.push_back(rng.uniform(0.1, 2.0));
      for (int j = i + 1; j < n; ++j) {
        double k = rng.uniform(0.0, 1.0);
        net.coupling_k(i, j) = k;
        net.coupling_k(j, i) = k;
      }
    }
    RealMatrix v = potential_matrix(net);
    NormalModeBasis basis = eigendecompose(mass_weighted(v, net.masses), net.masses);

    std::vector<double> x(n), xdot(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform(-2.0, 2.0);
      xdot[i] = rng.uniform(-2.0, 2.0);
    }
    std::vector<double> back = from_modes(to_modes(x, basis), basis);
    for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-12);

    double e_particle = potential_energy(net, x);
    for (int i = 0; i < n; ++i) e_particle += 0.5 * net.masses[i] * xdot[i] * xdot[i];

    std::vector<double> q = to_modes(x, basis);
    std::vector<double> qdot = to_modes(xdot, basis);
    double e_modes = 0.0;
    for (int k = 0; k < n; ++k)
      e_modes += 0.5 * (qdot[k] * qdot[k] + basis.omega2[k] * q[k] * q[k]);
    CHECK(std::abs(e_modes - e_particle) <= 1e-10 * std::max(1.0, e_particle));
  }
}

TEST_CASE("negative curvature is rejected") {
  RealMatrix w(1, 1);
  w(0, 0) = -1.0;
  try {
    eigendecompose(w, {1.0});
    FAIL_CHECK("expected NegativeEigenvalue");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::NegativeEigenvalue);
  }
}
