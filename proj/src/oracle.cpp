#include "catbranch/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "catbranch/errors.hpp"

namespace catbranch {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

std::vector<double> simpson_weights(const AxisSpec& ax) {
  if (ax.points < 3 || ax.points % 2 == 0)
    throw SimError(ErrorCode::ValidationError, "Simpson axis needs an odd point count >= 3");
  if (!(ax.hi > ax.lo)) throw SimError(ErrorCode::ValidationError, "Simpson axis bounds");
  double h = (ax.hi - ax.lo) / (ax.points - 1);
  std::vector<double> w(ax.points, h / 3.0);
  for (int i = 1; i + 1 < ax.points; ++i) w[i] *= (i % 2 == 1) ? 4.0 : 2.0;
  return w;
}

}  // namespace

double simpson_integrate(const std::function<double(double)>& f, double lo, double hi,
                         int points) {
  AxisSpec ax{lo, hi, points};
  std::vector<double> w = simpson_weights(ax);
  double h = (hi - lo) / (points - 1);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) sum += w[i] * f(i + 1 == points ? hi : lo + h * i);
  return sum;
}

cplx quad_integrate(const ComplexGaussianTerm& term, const QuadratureSpec& spec) {
  int dim = term.dim;
  if (static_cast<int>(spec.axes.size()) != dim)
    throw SimError(ErrorCode::DimensionMismatch, "quadrature axes vs term dimension");
  std::vector<std::vector<double>> nodes(dim), weights(dim);
  for (int d = 0; d < dim; ++d) {
    const AxisSpec& ax = spec.axes[d];
    weights[d] = simpson_weights(ax);
    nodes[d].resize(ax.points);
    double h = (ax.hi - ax.lo) / (ax.points - 1);
    for (int i = 0; i < ax.points; ++i) nodes[d][i] = ax.lo + h * i;
    nodes[d].back() = ax.hi;
  }

  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  cplx sum(0.0);
  double max_abs = 0.0, boundary_abs = 0.0;
  while (true) {
    double w = 1.0;
    bool on_boundary = false;
    for (int d = 0; d < dim; ++d) {
      x[d] = nodes[d][idx[d]];
      w *= weights[d][idx[d]];
      if (idx[d] == 0 || idx[d] == spec.axes[d].points - 1) on_boundary = true;
    }
    cplx val = evaluate(term, x);
    double mag = std::abs(val);
    max_abs = std::max(max_abs, mag);
    if (on_boundary) boundary_abs = std::max(boundary_abs, mag);
    sum += w * val;

    int d = 0;
    while (d < dim && ++idx[d] == spec.axes[d].points) {
      idx[d] = 0;
      ++d;
    }
    if (d == dim) break;
  }
  if (boundary_abs >= 1e-12 * max_abs)
    throw SimError(ErrorCode::BoundaryMassTooLarge,
                   "integrand does not decay by the quadrature boundary");
  return sum;
}

size_t GridWavefunction::size() const {
  size_t n = 1;
  for (int s : shape) n *= static_cast<size_t>(s);
  return n;
}

double GridWavefunction::cell_volume() const {
  double v = 1.0;
  for (size_t d = 0; d < shape.size(); ++d) v *= dx(static_cast<int>(d));
  return v;
}

GridWavefunction sample_terms(const std::vector<int>& shape, const std::vector<double>& lo,
                              const std::vector<double>& hi,
                              const std::vector<ComplexGaussianTerm>& terms) {
  if (shape.empty() || shape.size() != lo.size() || shape.size() != hi.size())
    throw SimError(ErrorCode::DimensionMismatch, "grid spec sizes");
  GridWavefunction psi;
  psi.shape = shape;
  psi.lo = lo;
  psi.hi = hi;
  size_t total = psi.size();
  psi.values.assign(total, cplx(0.0));

  int dim = static_cast<int>(shape.size());
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  for (size_t flat = 0; flat < total; ++flat) {
    for (int d = 0; d < dim; ++d) x[d] = lo[d] + idx[d] * psi.dx(d);
    cplx v(0.0);
    for (const ComplexGaussianTerm& t : terms) v += evaluate(t, x);
    psi.values[flat] = v;
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  return psi;
}

std::vector<double> quadratic_potential_grid(const std::vector<int>& shape,
                                             const std::vector<double>& lo,
                                             const std::vector<double>& hi,
                                             const RealMatrix& v) {
  int dim = static_cast<int>(shape.size());
  if (v.rows != dim || v.cols != dim)
    throw SimError(ErrorCode::DimensionMismatch, "potential matrix vs grid rank");
  size_t total = 1;
  for (int s : shape) total *= static_cast<size_t>(s);
  std::vector<double> pot(total);
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  for (size_t flat = 0; flat < total; ++flat) {
    for (int d = 0; d < dim; ++d) x[d] = lo[d] + idx[d] * (hi[d] - lo[d]) / shape[d];
    double e = 0.0;
    for (int i = 0; i < dim; ++i) {
      e += 0.5 * v(i, i) * x[i] * x[i];
      for (int j = i + 1; j < dim; ++j) e += v(i, j) * x[i] * x[j];
    }
    pot[flat] = e;
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  return pot;
}

GridWavefunction grid_evolve(const GridWavefunction& psi0, const std::vector<double>& masses,
                             const std::vector<double>& potential_values, double hbar,
                             double t, int steps) {
  int dim = static_cast<int>(psi0.shape.size());
  if (dim < 1 || dim > 3)
    throw SimError(ErrorCode::DimensionMismatch, "grid evolution supports 1 to 3 dimensions");
  if (static_cast<int>(masses.size()) != dim)
    throw SimError(ErrorCode::DimensionMismatch, "mass count vs grid rank");
  size_t total = psi0.size();
  if (potential_values.size() != total || psi0.values.size() != total)
    throw SimError(ErrorCode::DimensionMismatch, "grid array sizes");
  if (steps < 1) throw SimError(ErrorCode::ValidationError, "steps must be >= 1");
  if (t < 0.0) throw SimError(ErrorCode::ValidationError, "t must be >= 0");

  double dt = t / steps;

  // per-dimension Fourier frequencies
  std::vector<std::vector<double>> kvals(dim);
  for (int d = 0; d < dim; ++d) {
    int n = psi0.shape[d];
    kvals[d].resize(n);
    double dk = 2.0 * kPi / (psi0.hi[d] - psi0.lo[d]);
    for (int j = 0; j < n; ++j) {
      int f = (j <= n / 2) ? j : j - n;
      kvals[d][j] = dk * f;
    }
  }

  fftw_complex* buf = fftw_alloc_complex(total);
  if (!buf) throw SimError(ErrorCode::NoConvergence, "fftw allocation failed");
  struct BufGuard {
    fftw_complex* p;
    ~BufGuard() { fftw_free(p); }
  } buf_guard{buf};

  std::vector<int> dims(psi0.shape.begin(), psi0.shape.end());
  fftw_plan fwd = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  struct PlanGuard {
    fftw_plan f, b;
    ~PlanGuard() {
      fftw_destroy_plan(f);
      fftw_destroy_plan(b);
    }
  } plan_guard{fwd, bwd};

  for (size_t i = 0; i < total; ++i) {
    buf[i][0] = psi0.values[i].real();
    buf[i][1] = psi0.values[i].imag();
  }

  // occupied-bandwidth check on psi0's spectrum
  fftw_execute(fwd);
  {
    double max_mag = 0.0;
    for (size_t i = 0; i < total; ++i)
      max_mag = std::max(max_mag, std::hypot(buf[i][0], buf[i][1]));
    double thresh = 1e-12 * max_mag;
    std::vector<double> kocc(dim, 0.0);
    std::vector<int> idx(dim, 0);
    for (size_t flat = 0; flat < total; ++flat) {
      double mag = std::hypot(buf[flat][0], buf[flat][1]);
      if (mag > thresh)
        for (int d = 0; d < dim; ++d)
          kocc[d] = std::max(kocc[d], std::abs(kvals[d][idx[d]]));
      for (int d = dim - 1; d >= 0; --d) {
        if (++idx[d] < psi0.shape[d]) break;
        idx[d] = 0;
      }
    }
    double phase = 0.0;
    for (int d = 0; d < dim; ++d) phase += hbar * kocc[d] * kocc[d] / (2.0 * masses[d]) * dt;
    if (phase >= kPi / 4.0)
      throw SimError(ErrorCode::ResolutionTooCoarse,
                     "kinetic phase per step would exceed pi/4 for the occupied bandwidth");
  }
  for (size_t i = 0; i < total; ++i) {
    buf[i][0] = psi0.values[i].real();
    buf[i][1] = psi0.values[i].imag();
  }
  double inv_total = 1.0 / static_cast<double>(total);

  // phase tables; the 1/N normalization of the inverse FFT is folded into expK
  std::vector<cplx> exp_v_half(total);
  for (size_t i = 0; i < total; ++i)
    exp_v_half[i] = std::exp(cplx(0.0, -potential_values[i] * dt / (2.0 * hbar)));
  std::vector<cplx> exp_k(total);
  {
    std::vector<int> idx(dim, 0);
    for (size_t flat = 0; flat < total; ++flat) {
      double e = 0.0;
      for (int d = 0; d < dim; ++d) {
        double k = kvals[d][idx[d]];
        e += hbar * k * k / (2.0 * masses[d]);
      }
      exp_k[flat] = std::exp(cplx(0.0, -e * dt)) * inv_total;
      for (int d = dim - 1; d >= 0; --d) {
        if (++idx[d] < psi0.shape[d]) break;
        idx[d] = 0;
      }
    }
  }

  auto apply = [&](const std::vector<cplx>& table) {
    for (size_t i = 0; i < total; ++i) {
      cplx v = cplx(buf[i][0], buf[i][1]) * table[i];
      buf[i][0] = v.real();
      buf[i][1] = v.imag();
    }
  };

  for (int s = 0; s < steps; ++s) {
    apply(exp_v_half);
    fftw_execute(fwd);
    apply(exp_k);
    fftw_execute(bwd);
    apply(exp_v_half);
  }

  GridWavefunction out;
  out.shape = psi0.shape;
  out.lo = psi0.lo;
  out.hi = psi0.hi;
  out.values.resize(total);
  for (size_t i = 0; i < total; ++i) out.values[i] = cplx(buf[i][0], buf[i][1]);
  return out;
}

double grid_norm(const GridWavefunction& psi) {
  double s = 0.0;
  for (const cplx& v : psi.values) s += std::norm(v);
  return s * psi.cell_volume();
}

Rk4Result rk4_trajectories(const ValidatedConfig& cfg, const std::vector<PacketLabel>& labels,
                           double dt, double t_end, int stride) {
  if (!(dt > 0.0) || t_end < 0.0 || stride < 1)
    throw SimError(ErrorCode::ValidationError, "rk4 stepping parameters");
  int n = cfg.network.n;
  long long nsteps = std::llround(t_end / dt);

  RealMatrix minv_v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) minv_v(i, j) = cfg.potential(i, j) / cfg.network.masses[i];

  auto accel = [&](const std::vector<double>& x, std::vector<double>& a) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s -= minv_v(i, j) * x[j];
      a[i] = s;
    }
  };

  Rk4Result res;
  res.positions.resize(labels.size());
  res.velocities.resize(labels.size());
  bool first_label = true;
  for (size_t li = 0; li < labels.size(); ++li) {
    const PacketLabel& lbl = labels[li];
    if (static_cast<int>(lbl.a.size()) != n)
      throw SimError(ErrorCode::DimensionMismatch, "label width vs particle count");
    std::vector<double> x(n), v(n, 0.0);
    for (int i = 0; i < n; ++i) x[i] = lbl.a[i] ? cfg.cat.d[i] : 0.0;

    std::vector<double> k1x(n), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n);
    std::vector<double> tmp(n);
    auto record = [&](long long step) {
      if (first_label) res.times.push_back(step * dt);
      res.positions[li].push_back(x);
      res.velocities[li].push_back(v);
    };
    record(0);
    for (long long s = 1; s <= nsteps; ++s) {
      k1x = v;
      accel(x, k1v);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1x[i];
      accel(tmp, k2v);
      for (int i = 0; i < n; ++i) k2x[i] = v[i] + 0.5 * dt * k1v[i];
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2x[i];
      accel(tmp, k3v);
      for (int i = 0; i < n; ++i) k3x[i] = v[i] + 0.5 * dt * k2v[i];
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3x[i];
      accel(tmp, k4v);
      for (int i = 0; i < n; ++i) k4x[i] = v[i] + dt * k3v[i];
      for (int i = 0; i < n; ++i) {
        x[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      }
      if (s % stride == 0 || s == nsteps) record(s);
    }
    first_label = false;
  }
  return res;
}

}  // namespace catbranch
