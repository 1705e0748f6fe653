// End-to-end acceptance gate. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "catbranch/classical.hpp"
#include "catbranch/config.hpp"
#include "catbranch/errors.hpp"
#include "catbranch/gaussian.hpp"
#include "catbranch/linalg.hpp"
#include "catbranch/model.hpp"
#include "catbranch/normal_modes.hpp"
#include "catbranch/oracle.hpp"
#include "catbranch/propagation.hpp"
#include "catbranch/reduced_density.hpp"
#include "catbranch/run.hpp"
#include "catbranch/util.hpp"
#include "helpers.hpp"

using namespace catbranch;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

ValidatedConfig validated(const std::string& preset) {
  RunConfig rc = preset_config(preset);
  return validate(rc.network, rc.cat);
}

// ---- criterion 1: norm conservation + runtime --------------------------------

Outcome check_unitarity() {
  GridSpec grid;
  double worst = 0.0;
  for (const char* name : {"weak", "strong"}) {
    RunConfig rc = preset_config(name);
    ValidatedConfig cfg = validate(rc.network, rc.cat);
    double ref = 0.0;
    for (size_t i = 0; i < rc.snapshot_times.size(); ++i) {
      double norm = snapshot(cfg, rc.snapshot_times[i], grid).norm;
      if (i == 0)
        ref = norm;
      else
        worst = std::max(worst, std::abs(norm - ref) / ref);
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  run_simulation(preset_config("weak"), "acceptance_out_timed");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool ok = worst <= 1e-8 && secs <= 10.0;
  return {ok, fmt("norm drift %.3g vs 1e-8, full run %.2f s vs 10 s", worst, secs)};
}

// ---- criterion 2: branch centroids vs classical trajectories -----------------

Outcome check_ehrenfest() {
  double worst = 0.0;
  for (const char* name : {"weak", "strong"}) {
    RunConfig rc = preset_config(name);
    ValidatedConfig cfg = validate(rc.network, rc.cat);
    TrajectoryEnsemble ens = evolve_ensemble(cfg, {0.0, 6.005});
    for (double t : rc.snapshot_times) {
      std::vector<LabeledTerm> wf =
          evolve_state(build_initial_terms(cfg), cfg.basis, cfg.cat.hbar, t);
      for (const LabeledTerm& the_pair : density_pair_terms(wf)) {
        if (the_pair.bra.index() != the_pair.ket.index()) continue;
        std::vector<LabeledTerm> red = reduce({the_pair}, cfg.network.system_index);
        cplx centroid = red[0].term.b[0] / red[0].term.a(0, 0);
        double classical = ens.x_sys_at(static_cast<int>(the_pair.ket.index()), t);
        worst = std::max(worst, std::abs(centroid.real() - classical));
        worst = std::max(worst, std::abs(centroid.imag()));
      }
    }
  }
  return {worst <= 1e-8, fmt("max centroid deviation %.3g vs 1e-8", worst)};
}

// ---- criterion 3: Gaussian algebra vs quadrature ------------------------------

Outcome check_gaussian_oracle() {
  testutil::Rng rng(20260814u);
  double worst = 0.0;
  int terms = 0;

  auto spec_for = [](int dim, int points) {
    QuadratureSpec spec;
    for (int d = 0; d < dim; ++d) spec.axes.push_back(AxisSpec{-12.0, 12.0, points});
    return spec;
  };

  for (int rep = 0; rep < 10; ++rep, ++terms) {
    ComplexGaussianTerm t = testutil::random_term(rng, 1);
    cplx ana = integrate_all(t);
    cplx num = quad_integrate(t, spec_for(1, 801));
    worst = std::max(worst, std::abs(num - ana) / std::abs(ana));
  }
  for (int rep = 0; rep < 8; ++rep, ++terms) {
    ComplexGaussianTerm t = testutil::random_term(rng, 2);
    cplx ana = integrate_all(t);
    cplx num = quad_integrate(t, spec_for(2, 401));
    worst = std::max(worst, std::abs(num - ana) / std::abs(ana));

    ComplexGaussianTerm m = marginalize(t, {0});
    for (double x : {-0.8, 0.3, 1.1}) {
      cplx closed = evaluate(m, {x});
      cplx direct = quad_integrate(testutil::slice_term(t, {1}, {x}), spec_for(1, 801));
      worst = std::max(worst, std::abs(direct - closed) / std::abs(closed));
    }
  }
  for (int rep = 0; rep < 2; ++rep, ++terms) {
    ComplexGaussianTerm t = testutil::random_term(rng, 3);
    cplx ana = integrate_all(t);
    cplx num = quad_integrate(t, spec_for(3, 161));
    worst = std::max(worst, std::abs(num - ana) / std::abs(ana));

    ComplexGaussianTerm m = marginalize(t, {1});
    for (double x : {-0.6, 0.9}) {
      cplx closed = evaluate(m, {x, 0.4});
      cplx direct =
          quad_integrate(testutil::slice_term(t, {0, 2}, {x, 0.4}), spec_for(1, 801));
      worst = std::max(worst, std::abs(direct - closed) / std::abs(closed));
    }
  }

  bool ok = terms >= 20 && worst <= 1e-6;
  return {ok, fmt("20 random terms, worst relative error %.3g vs 1e-6", worst)};
}

// ---- criterion 4: dynamics vs split-operator grid and RK4 ---------------------

Outcome check_dynamics_oracle() {
  // 1-D cat in a harmonic well over one full period
  OscillatorNetwork net = testutil::single_particle(1.5, 2.5);
  ValidatedConfig cfg = validate(net, testutil::single_cat(-5.0, 0.5));
  double period = 2.0 * M_PI * std::sqrt(1.5 / 2.5);

  std::vector<int> shape = {4096};
  std::vector<double> lo = {-20.0}, hi = {20.0};
  std::vector<ComplexGaussianTerm> initial;
  for (const LabeledTerm& lt : build_initial_terms(cfg)) initial.push_back(lt.term);
  GridWavefunction psi0 = sample_terms(shape, lo, hi, initial);
  std::vector<double> pot = quadratic_potential_grid(shape, lo, hi, cfg.potential);
  GridWavefunction psi = grid_evolve(psi0, net.masses, pot, 1.0, period, 32768);

  std::vector<LabeledTerm> wf =
      evolve_state(build_initial_terms(cfg), cfg.basis, 1.0, period);
  std::vector<ComplexGaussianTerm> evolved;
  for (const LabeledTerm& lt : wf) evolved.push_back(lt.term);
  GridWavefunction exact = sample_terms(shape, lo, hi, evolved);

  double grid_err = 0.0, scale = 0.0;
  for (size_t i = 0; i < psi.values.size(); ++i) {
    grid_err = std::max(grid_err, std::abs(std::norm(psi.values[i]) -
                                           std::norm(exact.values[i])));
    scale = std::max(scale, std::norm(exact.values[i]));
  }
  grid_err /= scale;

  // classical integrator vs the closed form across the full run window
  RunConfig rc = preset_config("weak");
  ValidatedConfig wcfg = validate(rc.network, rc.cat);
  std::vector<PacketLabel> labels;
  for (unsigned l = 0; l < 8; ++l) labels.push_back(PacketLabel::from_index(l, 3));
  Rk4Result rk = rk4_trajectories(wcfg, labels, 1e-4, 6.005, 601);
  double rk_err = 0.0;
  for (size_t l = 0; l < labels.size(); ++l) {
    std::vector<double> x0(3);
    for (int p = 0; p < 3; ++p) x0[p] = labels[l].a[p] ? rc.cat.d[p] : 0.0;
    for (size_t s = 0; s < rk.times.size(); ++s) {
      std::vector<double> exact_x = harmonic_solution(wcfg.basis, x0, rk.times[s]);
      rk_err = std::max(rk_err, std::abs(rk.positions[l][s][0] - exact_x[0]));
    }
  }

  bool ok = grid_err <= 1e-6 && rk_err <= 1e-6;
  return {ok, fmt("grid density error %.3g, rk4 error %.3g (bounds 1e-6)", grid_err, rk_err)};
}

// ---- criterion 5: closed-system periodicity -----------------------------------

Outcome check_closed_system() {
  ValidatedConfig cfg = validated("decoupled");
  GridSpec grid;
  double t_exact = 2.0 * M_PI * std::sqrt(1.5 / 2.5);

  std::vector<double> base_t = {0.3, 0.9, 1.2167, 2.0};
  std::vector<double> base_i;
  for (double t : base_t) base_i.push_back(snapshot(cfg, t, grid).i_max);

  auto mismatch = [&](double period) {
    double g = 0.0;
    for (size_t i = 0; i < base_t.size(); ++i) {
      double d = snapshot(cfg, base_t[i] + period, grid).i_max - base_i[i];
      g += d * d;
    }
    return g;
  };

  // ternary search for the period on a bracket that contains only one repeat
  double lo = 4.5, hi = 5.2;
  while (hi - lo > 1e-8) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (mismatch(m1) < mismatch(m2))
      hi = m2;
    else
      lo = m1;
  }
  double t_det = 0.5 * (lo + hi);
  double period_err = std::abs(t_det - t_exact);

  double damping = 0.0;
  for (size_t i = 0; i < base_t.size(); ++i)
    for (int k = 1; k <= 3; ++k)
      damping = std::max(
          damping, std::abs(snapshot(cfg, base_t[i] + k * t_exact, grid).i_max - base_i[i]));

  bool ok = period_err <= 1e-6 && damping <= 1e-8;
  return {ok, fmt("period error %.3g vs 1e-6, drift over 3 periods %.3g vs 1e-8",
                  period_err, damping)};
}

// ---- criterion 6: interference ordering ---------------------------------------

struct CrossingImax {
  std::vector<Crossing> crossings;
  std::vector<double> imax;
  double time_avg = 0.0;
};

CrossingImax survey(const std::string& preset) {
  RunConfig rc = preset_config(preset);
  ValidatedConfig cfg = validate(rc.network, rc.cat);
  GridSpec grid;

  CrossingImax out;
  out.crossings = find_crossings(evolve_ensemble(cfg, rc.classical_times()));
  for (const Crossing& cr : out.crossings)
    out.imax.push_back(snapshot(cfg, cr.t, grid).i_max);

  std::vector<std::pair<double, double>> series =
      interference_series(cfg, rc.series_times(), rc.grid);
  std::vector<double> ts, vs;
  for (const auto& p : series) {
    ts.push_back(p.first);
    vs.push_back(p.second);
  }
  out.time_avg = trapezoid(ts, vs) / (ts.back() - ts.front());
  return out;
}

Outcome check_interference_ordering() {
  CrossingImax weak = survey("weak");
  CrossingImax strong = survey("strong");

  // line up crossings of the same label pair by occurrence order
  using Key = std::pair<unsigned, unsigned>;
  std::map<Key, std::vector<size_t>> weak_by_pair, strong_by_pair;
  for (size_t i = 0; i < weak.crossings.size(); ++i)
    weak_by_pair[{weak.crossings[i].j, weak.crossings[i].k}].push_back(i);
  for (size_t i = 0; i < strong.crossings.size(); ++i)
    strong_by_pair[{strong.crossings[i].j, strong.crossings[i].k}].push_back(i);

  int matched = 0, violations = 0;
  double min_weak = 1e300, max_strong = 0.0;
  for (const auto& [key, wi] : weak_by_pair) {
    auto it = strong_by_pair.find(key);
    if (it == strong_by_pair.end()) continue;
    size_t m = std::min(wi.size(), it->second.size());
    for (size_t r = 0; r < m; ++r) {
      size_t a = wi[r], b = it->second[r];
      if (weak.crossings[a].t <= 1.0 || strong.crossings[b].t <= 1.0) continue;
      ++matched;
      min_weak = std::min(min_weak, weak.imax[a]);
      max_strong = std::max(max_strong, strong.imax[b]);
      if (!(strong.imax[b] < weak.imax[a])) ++violations;
    }
  }

  bool ok = strong.time_avg < weak.time_avg && matched > 0 && violations == 0;
  std::ostringstream detail;
  detail << "avg i_max weak " << fmt("%.3g", weak.time_avg) << " vs strong "
         << fmt("%.3g", strong.time_avg) << "; " << matched << " matched crossings, "
         << violations << " ordering violations (weak >= " << fmt("%.3g", min_weak)
         << ", strong <= " << fmt("%.3g", max_strong) << ")";
  return {ok, detail.str()};
}

// ---- criterion 7: branching ordering -------------------------------------------

Outcome check_branching_ordering() {
  auto report_for = [](const char* name) {
    RunConfig rc = preset_config(name);
    return make_branch_report(evolve_ensemble(validate(rc.network, rc.cat),
                                              rc.classical_times()));
  };
  BranchReport weak = report_for("weak");
  BranchReport strong = report_for("strong");
  BranchReport dec = report_for("decoupled");

  double dec_max = 0.0;
  for (double b : dec.b) dec_max = std::max(dec_max, std::abs(b));

  bool ok = strong.time_avg_b > weak.time_avg_b && dec_max <= 1e-12;
  return {ok, fmt("avg B strong %.3g > weak %.3g", strong.time_avg_b, weak.time_avg_b) +
                  fmt("; decoupled max |B| %.3g vs 1e-12", dec_max)};
}

// ---- criterion 8: structural invariants ----------------------------------------

Outcome check_structural() {
  double eig_resid = 0.0;
  for (const std::string& name : preset_names()) {
    RunConfig rc = preset_config(name);
    RealMatrix w = mass_weighted(potential_matrix(rc.network), rc.network.masses);
    NormalModeBasis basis = eigendecompose(w, rc.network.masses);
    int n = rc.network.n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += w(i, k) * basis.modes(k, j);
        eig_resid = std::max(eig_resid, std::abs(s - basis.omega2[j] * basis.modes(i, j)));
      }
  }

  ValidatedConfig cfg = validated("weak");
  testutil::Rng rng(424242u);
  ComplexGaussianTerm start = testutil::random_term(rng, 3);
  ComplexGaussianTerm two = propagate_term(propagate_term(start, make_kernels(cfg.basis, 1.0, 0.7)),
                                           make_kernels(cfg.basis, 1.0, 0.6));
  ComplexGaussianTerm one = propagate_term(start, make_kernels(cfg.basis, 1.0, 1.3));
  double group_err = std::abs(two.c - one.c);
  for (int i = 0; i < 3; ++i) {
    group_err = std::max(group_err, std::abs(two.b[i] - one.b[i]));
    for (int j = i; j < 3; ++j)
      group_err = std::max(group_err, std::abs(two.a(i, j) - one.a(i, j)));
  }

  GridSpec grid;
  ReducedSnapshot snap = snapshot(cfg, 1.005, grid);
  std::vector<LabeledTerm> red = reduce(
      density_pair_terms(evolve_state(build_initial_terms(cfg), cfg.basis, 1.0, 1.005)), 0);
  auto groups = split_interference(red, 0);
  std::vector<double> xs = grid.xs();
  double peak = 0.0;
  for (double r : snap.rho) peak = std::max(peak, r);
  double part_err = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    cplx diag(0.0), cross(0.0);
    for (const LabeledTerm& lt : groups.first) diag += evaluate(lt.term, {xs[i]});
    for (const LabeledTerm& lt : groups.second) cross += evaluate(lt.term, {xs[i]});
    part_err = std::max(part_err,
                        std::abs((diag + cross).real() / snap.norm - snap.rho[i]));
    part_err = std::max(part_err,
                        std::abs(cross.real() / snap.norm - snap.interference[i]));
  }
  part_err /= std::max(1.0, peak);

  run_simulation(preset_config("weak"), "acceptance_out_repeat");
  bool identical = true;
  for (const char* name : {"snapshots.csv", "imax.csv", "classical.csv", "branching.csv",
                           "crossings.csv", "summary.txt"}) {
    std::ifstream a(std::filesystem::path("acceptance_out_timed") / name, std::ios::binary);
    std::ifstream b(std::filesystem::path("acceptance_out_repeat") / name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (!a || !b || sa.str() != sb.str() || sa.str().empty()) identical = false;
  }

  bool ok = eig_resid <= 1e-12 && group_err <= 1e-10 && part_err <= 1e-12 && identical;
  return {ok, fmt("eigen residual %.3g vs 1e-12, composition %.3g vs 1e-10, ", eig_resid,
                  group_err) +
                  fmt("partition %.3g vs 1e-12, ", part_err) +
                  (identical ? "outputs byte-identical" : "OUTPUTS DIFFER")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> fn;
  };
  const Criterion criteria[] = {
      {"norm conservation and runtime", check_unitarity},
      {"branch centroids follow classical trajectories", check_ehrenfest},
      {"Gaussian algebra matches quadrature", check_gaussian_oracle},
      {"propagation matches grid and rk4 oracles", check_dynamics_oracle},
      {"decoupled interference is periodic and undamped", check_closed_system},
      {"interference ordering weak vs strong", check_interference_ordering},
      {"branching ordering strong vs weak", check_branching_ordering},
      {"structural invariants and determinism", check_structural},
  };

  int failures = 0;
  for (size_t i = 0; i < sizeof(criteria) / sizeof(criteria[0]); ++i) {
    Outcome out;
    try {
      out = criteria[i].fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.ok) ++failures;
    std::printf("[%s] criterion %zu: %s (%s)\n", out.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].label, out.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
