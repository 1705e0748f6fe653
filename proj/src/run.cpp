#include "catbranch/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "catbranch/errors.hpp"
#include "catbranch/gaussian.hpp"
#include "catbranch/oracle.hpp"
#include "catbranch/propagation.hpp"
#include "catbranch/util.hpp"

namespace catbranch {

namespace {

void check_monotone(const std::vector<double>& times, const char* what) {
  if (times.empty()) throw SimError(ErrorCode::EmptyInput, std::string(what) + " times empty");
  if (times.front() < 0.0)
    throw SimError(ErrorCode::ValidationError, std::string(what) + " times must be >= 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw SimError(ErrorCode::ValidationError,
                     std::string(what) + " times must increase strictly");
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw SimError(ErrorCode::ValidationError, "cannot write " + p.string());
  return f;
}

double state_norm(const ValidatedConfig& cfg, double t) {
  std::vector<LabeledTerm> wf =
      evolve_state(build_initial_terms(cfg), cfg.basis, cfg.cat.hbar, t);
  cplx z(0.0);
  for (const LabeledTerm& lt : density_pair_terms(wf)) z += integrate_all(lt.term);
  return z.real();
}

}  // namespace

std::vector<SeriesPoint> series_detail(const ValidatedConfig& cfg,
                                       const std::vector<double>& times, const GridSpec& grid,
                                       int threads) {
  if (times.empty()) return {};
  check_monotone(times, "series");
  std::vector<SeriesPoint> out(times.size());
  parallel_for(static_cast<int>(times.size()), threads, [&](int i) {
    ReducedSnapshot snap = snapshot(cfg, times[i], grid);
    out[i] = {times[i], snap.i_max, snap.norm};
  });
  return out;
}

std::vector<double> quantum_mean_position(const ValidatedConfig& cfg, double t) {
  std::vector<LabeledTerm> wf =
      evolve_state(build_initial_terms(cfg), cfg.basis, cfg.cat.hbar, t);
  std::vector<LabeledTerm> pairs = density_pair_terms(wf);
  int n = cfg.network.n;

  cplx norm(0.0);
  for (const LabeledTerm& lt : pairs) norm += integrate_all(lt.term);

  std::vector<double> mean(n);
  for (int i = 0; i < n; ++i) {
    cplx m1(0.0);
    std::vector<LabeledTerm> red = reduce(pairs, i);
    for (const LabeledTerm& lt : red) {
      cplx a = lt.term.a(0, 0);
      cplx b = lt.term.b[0];
      m1 += integrate_all(lt.term) * (b / a);
    }
    mean[i] = (m1 / norm).real();
  }
  return mean;
}

namespace {

struct SimData {
  ValidatedConfig vcfg;
  std::vector<SeriesPoint> series;
  std::vector<ReducedSnapshot> snaps;
  TrajectoryEnsemble ensemble;
  BranchReport report;
  CorrelationSummary corr;
};

SimData compute_all(const RunConfig& cfg, int threads, bool quantum) {
  SimData d;
  d.vcfg = validate(cfg.network, cfg.cat);
  if (quantum) {
    std::vector<double> st = cfg.series_times();
    d.series = series_detail(d.vcfg, st, cfg.grid, threads);
    check_monotone(cfg.snapshot_times, "snapshot");
    d.snaps.resize(cfg.snapshot_times.size());
    parallel_for(static_cast<int>(cfg.snapshot_times.size()), threads, [&](int i) {
      d.snaps[i] = snapshot(d.vcfg, cfg.snapshot_times[i], cfg.grid);
    });
  }
  d.ensemble = evolve_ensemble(d.vcfg, cfg.classical_times());
  d.report = make_branch_report(d.ensemble);
  if (quantum) {
    std::vector<std::pair<double, double>> is;
    is.reserve(d.series.size());
    for (const SeriesPoint& p : d.series) is.emplace_back(p.t, p.i_max);
    d.corr = correlate(d.report, is);
  }
  return d;
}

void write_classical_files(const SimData& d, const std::filesystem::path& dir,
                           bool with_imax) {
  {
    std::ofstream f = open_out(dir / "classical.csv");
    f << "t";
    for (const PacketLabel& lbl : d.ensemble.labels) f << ",x1_" << lbl.bits();
    f << "\n";
    for (size_t ti = 0; ti < d.ensemble.times.size(); ++ti) {
      f << format_double(d.ensemble.times[ti]);
      for (size_t li = 0; li < d.ensemble.labels.size(); ++li)
        f << "," << format_double(d.ensemble.x_sys[li][ti]);
      f << "\n";
    }
  }
  {
    std::ofstream f = open_out(dir / "branching.csv");
    f << "t,B,diam_g0,diam_g1,rms_g0,rms_g1,min_diam\n";
    for (size_t ti = 0; ti < d.report.times.size(); ++ti) {
      f << format_double(d.report.times[ti]) << "," << format_double(d.report.b[ti]) << ","
        << format_double(d.report.diam_g0[ti]) << "," << format_double(d.report.diam_g1[ti]) << ","
        << format_double(d.report.rms_g0[ti]) << "," << format_double(d.report.rms_g1[ti]) << ","
        << format_double(d.report.min_diam[ti]) << "\n";
    }
  }
  {
    std::ofstream f = open_out(dir / "crossings.csv");
    if (with_imax) {
      f << "t_star,label_j,label_k,i_max_at_t,B_at_t\n";
      for (size_t i = 0; i < d.corr.crossings.size(); ++i) {
        const Crossing& cr = d.corr.crossings[i];
        f << format_double(cr.t) << "," << d.ensemble.labels[cr.j].bits() << ","
          << d.ensemble.labels[cr.k].bits() << "," << format_double(d.corr.imax_at_crossings[i])
          << "," << format_double(d.corr.b_at_crossings[i]) << "\n";
      }
    } else {
      f << "t_star,label_j,label_k,B_at_t\n";
      std::vector<double> bt;
      for (const Crossing& cr : d.report.crossings) {
        double bv = 0.0;
        // piecewise-linear B at the refined crossing time
        const std::vector<double>& xs = d.report.times;
        const std::vector<double>& ys = d.report.b;
        if (cr.t <= xs.front()) {
          bv = ys.front();
        } else if (cr.t >= xs.back()) {
          bv = ys.back();
        } else {
          size_t lo = static_cast<size_t>(
              std::upper_bound(xs.begin(), xs.end(), cr.t) - xs.begin() - 1);
          double w = (cr.t - xs[lo]) / (xs[lo + 1] - xs[lo]);
          bv = ys[lo] + w * (ys[lo + 1] - ys[lo]);
        }
        f << format_double(cr.t) << "," << d.ensemble.labels[cr.j].bits() << ","
          << d.ensemble.labels[cr.k].bits() << "," << format_double(bv) << "\n";
      }
    }
  }
}

RunStats fill_stats(const SimData& d) {
  RunStats s;
  s.series_points = d.series.size();
  s.snapshot_count = d.snaps.size();
  s.crossing_count = d.report.crossings.size();
  if (!d.series.empty()) {
    s.norm_initial = d.series.front().norm;
    for (const SeriesPoint& p : d.series)
      s.norm_drift_rel_max = std::max(
          s.norm_drift_rel_max, std::abs(p.norm - s.norm_initial) / s.norm_initial);
    s.imax_initial = d.series.front().i_max;
    s.imax_final = d.series.back().i_max;
    s.imax_time_avg = d.corr.time_avg_imax;
    s.imax_retention = s.imax_initial > 0.0 ? s.imax_time_avg / s.imax_initial : 0.0;
    s.mean_imax_at_crossings = d.corr.mean_imax_at_crossings;
    s.mean_b_at_crossings = d.corr.mean_b_at_crossings;
  }
  s.b_time_avg = d.report.time_avg_b;
  return s;
}

}  // namespace

RunStats run_simulation(const RunConfig& cfg, const std::string& out_dir, int threads) {
  SimData d = compute_all(cfg, threads, true);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  {
    std::ofstream f = open_out(dir / "snapshots.csv");
    f << "t,x1,rho,interference\n";
    for (const ReducedSnapshot& snap : d.snaps) {
      std::vector<double> xs = snap.grid.xs();
      for (size_t i = 0; i < xs.size(); ++i)
        f << format_double(snap.t) << "," << format_double(xs[i]) << "," << format_double(snap.rho[i])
          << "," << format_double(snap.interference[i]) << "\n";
    }
  }
  {
    std::ofstream f = open_out(dir / "imax.csv");
    f << "t,i_max\n";
    for (const SeriesPoint& p : d.series)
      f << format_double(p.t) << "," << format_double(p.i_max) << "\n";
  }
  write_classical_files(d, dir, true);

  RunStats s = fill_stats(d);
  {
    std::ofstream f = open_out(dir / "summary.txt");
    f << "catbranch summary format v1\n";
    f << "n = " << d.vcfg.network.n << "\n";
    f << "system = " << (d.vcfg.network.system_index + 1) << "\n";
    f << "mode_omega2 =";
    for (double w2 : d.vcfg.basis.omega2) f << " " << format_double(w2);
    f << "\n";
    f << "series_points = " << s.series_points << "\n";
    f << "snapshot_count = " << s.snapshot_count << "\n";
    f << "crossing_count = " << s.crossing_count << "\n";
    f << "norm_initial = " << format_double(s.norm_initial) << "\n";
    f << "norm_drift_rel_max = " << format_double(s.norm_drift_rel_max) << "\n";
    f << "imax_initial = " << format_double(s.imax_initial) << "\n";
    f << "imax_final = " << format_double(s.imax_final) << "\n";
    f << "imax_time_avg = " << format_double(s.imax_time_avg) << "\n";
    f << "imax_retention = " << format_double(s.imax_retention) << "\n";
    f << "B_time_avg = " << format_double(s.b_time_avg) << "\n";
    f << "imax_at_crossings_mean = " << format_double(s.mean_imax_at_crossings) << "\n";
    f << "B_at_crossings_mean = " << format_double(s.mean_b_at_crossings) << "\n";
    f << "# --- begin config echo ---\n";
    f << config_echo(cfg);
    f << "# --- end config echo ---\n";
  }
  return s;
}

RunStats run_classical(const RunConfig& cfg, const std::string& out_dir, int threads) {
  SimData d = compute_all(cfg, threads, false);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_classical_files(d, dir, false);
  return fill_stats(d);
}

int run_verify(const RunConfig& cfg, bool full, std::ostream& log, int threads) {
  int failures = 0;
  auto check = [&](const char* name, bool ok, double measured, double bound) {
    log << (ok ? "[PASS] " : "[FAIL] ") << name << " (measured " << measured << ", bound "
        << bound << ")\n";
    if (!ok) ++failures;
  };

  ValidatedConfig vcfg = validate(cfg.network, cfg.cat);
  int n = vcfg.network.n;

  {
    RealMatrix w = mass_weighted(vcfg.potential, vcfg.network.masses);
    const NormalModeBasis& basis = vcfg.basis;
    double resid = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += w(i, k) * basis.modes(k, j);
        resid = std::max(resid, std::abs(s - basis.omega2[j] * basis.modes(i, j)));
      }
    check("mode residual ||W O - O diag||", resid <= 1e-12, resid, 1e-12);

    double ortho = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += basis.modes(k, i) * basis.modes(k, j);
        ortho = std::max(ortho, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    check("mode orthonormality", ortho <= 1e-12, ortho, 1e-12);
  }

  {
    double n0 = state_norm(vcfg, 0.0);
    double drift = 0.0;
    for (double t : {1.0, 2.5, cfg.series_t_max})
      drift = std::max(drift, std::abs(state_norm(vcfg, t) - n0) / n0);
    check("norm conservation", drift <= 1e-8, drift, 1e-8);
  }

  {
    // one-shot vs two-leg propagation of the all-zeros branch
    std::vector<LabeledTerm> init = build_initial_terms(vcfg);
    RealMatrix s = vcfg.basis.particle_from_mode();
    ComplexGaussianTerm mode_t = transform_term(init.front().term, s);
    double t1 = 0.7, t2 = 0.6;
    ComplexGaussianTerm two = propagate_term(
        propagate_term(mode_t, make_kernels(vcfg.basis, vcfg.cat.hbar, t1)),
        make_kernels(vcfg.basis, vcfg.cat.hbar, t2));
    ComplexGaussianTerm one =
        propagate_term(mode_t, make_kernels(vcfg.basis, vcfg.cat.hbar, t1 + t2));
    double diff = std::abs(two.c - one.c);
    for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(two.b[i] - one.b[i]));
    for (size_t i = 0; i < two.upper.size(); ++i)
      diff = std::max(diff, std::abs(two.upper[i] - one.upper[i]));
    check("propagator composition", diff <= 1e-10, diff, 1e-10);
  }

  {
    double t = 1.005;
    std::vector<LabeledTerm> wf =
        evolve_state(build_initial_terms(vcfg), vcfg.basis, vcfg.cat.hbar, t);
    std::vector<LabeledTerm> red = reduce(density_pair_terms(wf), vcfg.network.system_index);
    auto parts = split_interference(red, vcfg.network.system_index);
    std::vector<double> xs = cfg.grid.xs();
    double peak = 0.0, worst = 0.0;
    std::vector<double> pt(1);
    for (size_t i = 0; i < xs.size(); i += std::max<size_t>(1, xs.size() / 64)) {
      pt[0] = xs[i];
      cplx total(0.0), dsum(0.0), isum(0.0);
      for (const LabeledTerm& lt : red) total += evaluate(lt.term, pt);
      for (const LabeledTerm& lt : parts.first) dsum += evaluate(lt.term, pt);
      for (const LabeledTerm& lt : parts.second) isum += evaluate(lt.term, pt);
      peak = std::max(peak, std::abs(total));
      worst = std::max(worst, std::abs(dsum + isum - total));
    }
    double rel = worst / peak;
    check("interference partition identity", rel <= 1e-12, rel, 1e-12);
  }

  {
    std::vector<double> m0 = quantum_mean_position(vcfg, 0.0);
    double t = 2.005;
    std::vector<double> mq = quantum_mean_position(vcfg, t);
    std::vector<double> mc = harmonic_solution(vcfg.basis, m0, t);
    double diff = 0.0;
    for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(mq[i] - mc[i]));
    check("mean-position classical match", diff <= 1e-8, diff, 1e-8);
  }

  if (full) {
    {
      std::mt19937 rng(20240901u);
      auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (rng() / 4294967296.0);
      };
      double worst = 0.0;
      for (int rep = 0; rep < 2; ++rep) {
        ComplexGaussianTerm t(2);
        t.set_a(0, 0, cplx(uni(0.8, 1.6), uni(-0.4, 0.4)));
        t.set_a(1, 1, cplx(uni(0.8, 1.6), uni(-0.4, 0.4)));
        t.set_a(0, 1, cplx(uni(-0.2, 0.2), uni(-0.2, 0.2)));
        t.b[0] = cplx(uni(-0.5, 0.5), uni(-0.5, 0.5));
        t.b[1] = cplx(uni(-0.5, 0.5), uni(-0.5, 0.5));
        t.c = cplx(uni(-0.2, 0.2), uni(-0.2, 0.2));
        QuadratureSpec spec{{AxisSpec{-12.0, 12.0, 401}, AxisSpec{-12.0, 12.0, 401}}};
        cplx ana = integrate_all(t);
        cplx num = quad_integrate(t, spec);
        worst = std::max(worst, std::abs(num - ana) / std::abs(ana));
      }
      check("quadrature vs closed form", worst <= 1e-6, worst, 1e-6);
    }
    {
      std::vector<PacketLabel> labels = {PacketLabel::from_index(0, n),
                                         PacketLabel::from_index((1u << n) - 1, n)};
      double t_end = 2.0;
      Rk4Result rk = rk4_trajectories(vcfg, labels, 1e-4, t_end, 20000);
      double diff = 0.0;
      for (size_t li = 0; li < labels.size(); ++li) {
        std::vector<double> x0(n);
        for (int i = 0; i < n; ++i) x0[i] = labels[li].a[i] ? vcfg.cat.d[i] : 0.0;
        std::vector<double> exact = harmonic_solution(vcfg.basis, x0, t_end);
        for (int i = 0; i < n; ++i)
          diff = std::max(diff, std::abs(rk.positions[li].back()[i] - exact[i]));
      }
      check("classical vs RK4", diff <= 1e-6, diff, 1e-6);
    }
  }
  (void)threads;
  return failures;
}

}  // namespace catbranch
