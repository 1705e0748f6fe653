#include "catbranch/reduced_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catbranch/errors.hpp"
#include "catbranch/util.hpp"

namespace catbranch {

std::vector<double> GridSpec::xs() const {
  if (points < 2) throw SimError(ErrorCode::ValidationError, "grid needs >= 2 points");
  if (!(x_max > x_min)) throw SimError(ErrorCode::ValidationError, "grid bounds reversed");
  std::vector<double> v(points);
  double h = (x_max - x_min) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = x_min + h * i;
  v.back() = x_max;
  return v;
}

std::vector<LabeledTerm> density_pair_terms(const std::vector<LabeledTerm>& wf_terms) {
  if (wf_terms.empty()) throw SimError(ErrorCode::EmptyInput, "no wavefunction terms");
  std::vector<LabeledTerm> pairs;
  pairs.reserve(wf_terms.size() * wf_terms.size());
  for (const LabeledTerm& bra : wf_terms)
    for (const LabeledTerm& ket : wf_terms)
      pairs.push_back({multiply(conjugate(bra.term), ket.term), bra.ket, ket.ket});
  return pairs;
}

std::vector<LabeledTerm> reduce(const std::vector<LabeledTerm>& pair_terms, int keep_index) {
  if (pair_terms.empty()) throw SimError(ErrorCode::EmptyInput, "no density terms");
  int n = pair_terms.front().term.dim;
  if (keep_index < 0 || keep_index >= n)
    throw SimError(ErrorCode::DimensionMismatch, "keep index out of range");
  if (n == 1) return pair_terms;

  std::vector<int> drop;
  drop.reserve(n - 1);
  for (int i = 0; i < n; ++i)
    if (i != keep_index) drop.push_back(i);

  std::vector<LabeledTerm> out;
  out.reserve(pair_terms.size());
  for (const LabeledTerm& lt : pair_terms) {
    try {
      out.push_back({marginalize(lt.term, drop), lt.bra, lt.ket});
    } catch (const SimError& e) {
      throw SimError(e.code(), "term <" + lt.bra.bits() + "|" + lt.ket.bits() + ">: " +
                                   e.what());
    }
  }
  return out;
}

std::pair<std::vector<LabeledTerm>, std::vector<LabeledTerm>> split_interference(
    const std::vector<LabeledTerm>& reduced, int particle_index) {
  std::pair<std::vector<LabeledTerm>, std::vector<LabeledTerm>> parts;
  for (const LabeledTerm& lt : reduced) {
    if (particle_index < 0 || particle_index >= static_cast<int>(lt.bra.a.size()))
      throw SimError(ErrorCode::DimensionMismatch, "particle index out of range");
    if (lt.bra.a[particle_index] == lt.ket.a[particle_index]) {
      parts.first.push_back(lt);
    } else {
      parts.second.push_back(lt);
    }
  }
  return parts;
}

ReducedSnapshot snapshot(const ValidatedConfig& cfg, double t, const GridSpec& grid) {
  ReducedSnapshot snap;
  snap.t = t;
  snap.grid = grid;
  std::vector<double> xs = grid.xs();

  int sys = cfg.network.system_index;
  std::vector<LabeledTerm> reduced;
  try {
    std::vector<LabeledTerm> wf =
        evolve_state(build_initial_terms(cfg), cfg.basis, cfg.cat.hbar, t);
    reduced = reduce(density_pair_terms(wf), sys);
  } catch (const SimError& e) {
    throw SimError(e.code(), "t = " + format_double(t) + ": " + e.what());
  }
  auto parts = split_interference(reduced, sys);

  std::vector<double> diag(xs.size(), 0.0), interf(xs.size(), 0.0);
  std::vector<double> point(1);
  for (const LabeledTerm& lt : parts.first)
    for (size_t i = 0; i < xs.size(); ++i) {
      point[0] = xs[i];
      diag[i] += evaluate(lt.term, point).real();
    }
  for (const LabeledTerm& lt : parts.second)
    for (size_t i = 0; i < xs.size(); ++i) {
      point[0] = xs[i];
      interf[i] += evaluate(lt.term, point).real();
    }

  std::vector<double> total(xs.size());
  double peak = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    total[i] = diag[i] + interf[i];
    peak = std::max(peak, std::abs(total[i]));
  }
  if (std::max(std::abs(total.front()), std::abs(total.back())) >= 1e-8 * peak)
    throw SimError(ErrorCode::GridTooNarrow,
                   "reduced density does not decay by the grid edge at t = " + format_double(t));

  double z = trapezoid(xs, total);
  if (!(z > 0.0) || !std::isfinite(z))
    throw SimError(ErrorCode::NotNormalizable, "non-positive reduced density norm");
  snap.norm = z;
  snap.rho.resize(xs.size());
  snap.interference.resize(xs.size());
  double imax = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    snap.rho[i] = total[i] / z;
    snap.interference[i] = interf[i] / z;
    imax = std::max(imax, std::abs(snap.interference[i]));
  }
  snap.i_max = imax;
  return snap;
}

std::vector<std::pair<double, double>> interference_series(const ValidatedConfig& cfg,
                                                           const std::vector<double>& times,
                                                           const GridSpec& grid,
                                                           int threads) {
  if (times.empty()) return {};
  if (times.front() < 0.0)
    throw SimError(ErrorCode::ValidationError, "series times must be >= 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw SimError(ErrorCode::ValidationError, "series times must increase strictly");

  std::vector<std::pair<double, double>> out(times.size());
  parallel_for(static_cast<int>(times.size()), threads, [&](int i) {
    ReducedSnapshot snap = snapshot(cfg, times[i], grid);
    out[i] = {times[i], snap.i_max};
  });
  return out;
}

}  // namespace catbranch
