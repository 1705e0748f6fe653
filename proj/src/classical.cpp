#include "catbranch/classical.hpp"

#include <algorithm>
#include <cmath>

#include "catbranch/errors.hpp"
#include "catbranch/util.hpp"

namespace catbranch {

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw SimError(ErrorCode::EmptyInput, "no sample times");
  if (times.front() < 0.0)
    throw SimError(ErrorCode::ValidationError, "sample times must be >= 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw SimError(ErrorCode::ValidationError, "sample times must increase strictly");
}

double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  size_t i = static_cast<size_t>(it - xs.begin()) - 1;
  double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + w * (ys[i + 1] - ys[i]);
}

}  // namespace

std::vector<double> harmonic_solution(const NormalModeBasis& basis,
                                      const std::vector<double>& x0, double t) {
  std::vector<double> q = to_modes(x0, basis);
  for (int k = 0; k < basis.n; ++k) {
    if (!basis.free_mode[k]) q[k] *= std::cos(std::sqrt(basis.omega2[k]) * t);
  }
  return from_modes(q, basis);
}

double TrajectoryEnsemble::x_sys_at(int label_idx, double t) const {
  const std::vector<double>& q = q0[label_idx];
  double x = 0.0;
  for (size_t m = 0; m < q.size(); ++m) {
    double amp = q[m];
    if (!free_mode[m]) amp *= std::cos(omega[m] * t);
    x += srow[m] * amp;
  }
  return x;
}

TrajectoryEnsemble evolve_ensemble(const ValidatedConfig& cfg,
                                   const std::vector<double>& times) {
  check_times(times);
  const NormalModeBasis& basis = cfg.basis;
  int n = basis.n;

  TrajectoryEnsemble ens;
  ens.n = n;
  ens.system_index = cfg.network.system_index;
  ens.times = times;
  ens.omega.resize(n);
  ens.free_mode = basis.free_mode;
  for (int k = 0; k < n; ++k)
    ens.omega[k] = basis.free_mode[k] ? 0.0 : std::sqrt(basis.omega2[k]);
  RealMatrix s = basis.particle_from_mode();
  ens.srow.resize(n);
  for (int k = 0; k < n; ++k) ens.srow[k] = s(ens.system_index, k);

  unsigned count = 1u << n;
  ens.labels.reserve(count);
  ens.q0.reserve(count);
  ens.x_sys.assign(count, std::vector<double>(times.size()));
  for (unsigned idx = 0; idx < count; ++idx) {
    PacketLabel lbl = PacketLabel::from_index(idx, n);
    std::vector<double> x0(n);
    for (int i = 0; i < n; ++i) x0[i] = lbl.a[i] ? cfg.cat.d[i] : 0.0;
    ens.labels.push_back(lbl);
    ens.q0.push_back(to_modes(x0, basis));
  }
  for (unsigned idx = 0; idx < count; ++idx)
    for (size_t ti = 0; ti < times.size(); ++ti)
      ens.x_sys[idx][ti] = ens.x_sys_at(static_cast<int>(idx), times[ti]);
  return ens;
}

BranchReport branching_metric(const TrajectoryEnsemble& ens) {
  size_t nt = ens.times.size();
  BranchReport rep;
  rep.times = ens.times;
  rep.b.resize(nt);
  rep.diam_g0.resize(nt);
  rep.diam_g1.resize(nt);
  rep.rms_g0.resize(nt);
  rep.rms_g1.resize(nt);
  rep.min_diam.resize(nt);

  size_t count = ens.labels.size();
  for (size_t ti = 0; ti < nt; ++ti) {
    double lo[2] = {0.0, 0.0}, hi[2] = {0.0, 0.0}, sum[2] = {0.0, 0.0};
    int seen[2] = {0, 0};
    for (size_t idx = 0; idx < count; ++idx) {
      int g = ens.group(static_cast<int>(idx));
      double x = ens.x_sys[idx][ti];
      if (seen[g] == 0) {
        lo[g] = hi[g] = x;
      } else {
        lo[g] = std::min(lo[g], x);
        hi[g] = std::max(hi[g], x);
      }
      sum[g] += x;
      ++seen[g];
    }
    double diam0 = seen[0] ? hi[0] - lo[0] : 0.0;
    double diam1 = seen[1] ? hi[1] - lo[1] : 0.0;
    // two-pass variance; sumsq - mean^2 loses everything below ~1e-8 here
    auto rms = [&](int g) {
      if (!seen[g]) return 0.0;
      double mean = sum[g] / seen[g];
      double acc = 0.0;
      for (size_t idx = 0; idx < count; ++idx) {
        if (ens.group(static_cast<int>(idx)) != g) continue;
        double d = ens.x_sys[idx][ti] - mean;
        acc += d * d;
      }
      return std::sqrt(acc / seen[g]);
    };
    rep.diam_g0[ti] = diam0;
    rep.diam_g1[ti] = diam1;
    rep.rms_g0[ti] = rms(0);
    rep.rms_g1[ti] = rms(1);
    rep.b[ti] = 0.5 * (diam0 + diam1);
    rep.min_diam[ti] = std::min(diam0, diam1);
  }
  if (nt >= 2) {
    double span = ens.times.back() - ens.times.front();
    rep.time_avg_b = trapezoid(ens.times, rep.b) / span;
  }
  return rep;
}

std::vector<Crossing> find_crossings(const TrajectoryEnsemble& ens) {
  std::vector<Crossing> out;
  size_t count = ens.labels.size();
  size_t nt = ens.times.size();
  if (nt < 2) return out;

  double xmax = 0.0;
  for (const std::vector<double>& row : ens.x_sys)
    for (double x : row) xmax = std::max(xmax, std::abs(x));
  double degenerate_tol = 1e-10 * std::max(1.0, xmax);

  for (unsigned j = 0; j < count; ++j) {
    if (ens.group(j) != 0) continue;
    for (unsigned k = 0; k < count; ++k) {
      if (ens.group(k) != 1) continue;
      double dmax = 0.0;
      for (size_t ti = 0; ti < nt; ++ti)
        dmax = std::max(dmax, std::abs(ens.x_sys[j][ti] - ens.x_sys[k][ti]));
      if (dmax < degenerate_tol) continue;

      auto diff = [&](double t) { return ens.x_sys_at(j, t) - ens.x_sys_at(k, t); };
      std::vector<double> roots;
      for (size_t ti = 0; ti < nt; ++ti)
        if (ens.x_sys[j][ti] - ens.x_sys[k][ti] == 0.0) roots.push_back(ens.times[ti]);
      for (size_t ti = 0; ti + 1 < nt; ++ti) {
        double d0 = ens.x_sys[j][ti] - ens.x_sys[k][ti];
        double d1 = ens.x_sys[j][ti + 1] - ens.x_sys[k][ti + 1];
        if (d0 * d1 < 0.0) {
          double a = ens.times[ti], b = ens.times[ti + 1];
          double fa = d0;
          while (b - a > 1e-9) {
            double mid = 0.5 * (a + b);
            double fm = diff(mid);
            if (fa * fm <= 0.0) {
              b = mid;
            } else {
              a = mid;
              fa = fm;
            }
          }
          roots.push_back(0.5 * (a + b));
        }
      }
      std::sort(roots.begin(), roots.end());
      double prev = -1e300;
      for (double r : roots) {
        if (r - prev < 1e-6) continue;
        prev = r;
        out.push_back({r, j, k});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  });
  return out;
}

BranchReport make_branch_report(const TrajectoryEnsemble& ens) {
  BranchReport rep = branching_metric(ens);
  rep.crossings = find_crossings(ens);
  return rep;
}

CorrelationSummary correlate(const BranchReport& report,
                             const std::vector<std::pair<double, double>>& imax_series) {
  if (imax_series.empty())
    throw SimError(ErrorCode::EmptyInput, "interference series is empty");
  CorrelationSummary cs;
  cs.crossings = report.crossings;
  std::vector<double> st, sv;
  st.reserve(imax_series.size());
  sv.reserve(imax_series.size());
  for (const auto& p : imax_series) {
    st.push_back(p.first);
    sv.push_back(p.second);
  }
  if (st.size() >= 2) {
    double span = st.back() - st.front();
    cs.time_avg_imax = trapezoid(st, sv) / span;
  } else {
    cs.time_avg_imax = sv.front();
  }
  cs.time_avg_b = report.time_avg_b;

  double sum_i = 0.0, sum_b = 0.0;
  for (const Crossing& cr : report.crossings) {
    double iv = lerp_at(st, sv, cr.t);
    double bv = lerp_at(report.times, report.b, cr.t);
    cs.imax_at_crossings.push_back(iv);
    cs.b_at_crossings.push_back(bv);
    sum_i += iv;
    sum_b += bv;
  }
  size_t nc = report.crossings.size();
  cs.mean_imax_at_crossings = nc ? sum_i / nc : 0.0;
  cs.mean_b_at_crossings = nc ? sum_b / nc : 0.0;
  return cs;
}

}  // namespace catbranch
