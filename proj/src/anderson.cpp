#include "andersonspec/anderson.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "andersonspec/errors.hpp"
#include "andersonspec/rng.hpp"

namespace andersonspec::anderson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const AndersonConfig& config) {
  const int d = config.dimension();
  if (d < 1 || d > 3) throw UnsupportedDimension("Anderson lattice dimension must be 1, 2 or 3");
  for (int len : config.dims)
    if (len < 1) throw Error("Anderson lattice lengths must be positive");
  if (config.w < 0.0) throw Error("disorder width w must be nonnegative");
  if (config.distribution == Distribution::Cauchy && !(config.delta > 0.0))
    throw Error("Cauchy disorder needs delta > 0");
}

/// Periodic transverse adjacency: for every site of the cross-section and
/// every transverse axis, couple to both neighbors. Wraps that land on the
/// same site (n_i <= 2) accumulate, matching the lattice eigenvalue equation.
Matrix transverse_adjacency(const AndersonConfig& config) {
  const int m = config.cross_section();
  Matrix adj = Matrix::Zero(m, m);
  const int d = config.dimension();
  if (d == 1) return adj;
  const std::vector<int>& dims = config.dims;
  std::vector<int> strides(static_cast<std::size_t>(d - 1), 1);
  for (int i = 1; i < d - 1; ++i) strides[static_cast<std::size_t>(i)] = strides[static_cast<std::size_t>(i - 1)] * dims[static_cast<std::size_t>(i - 1)];
  for (int p = 0; p < m; ++p) {
    for (int axis = 0; axis < d - 1; ++axis) {
      const int len = dims[static_cast<std::size_t>(axis)];
      const int coord = (p / strides[static_cast<std::size_t>(axis)]) % len;
      for (int dir : {+1, -1}) {
        const int neighbor_coord = ((coord + dir) % len + len) % len;
        const int q = p + (neighbor_coord - coord) * strides[static_cast<std::size_t>(axis)];
        adj(p, q) += 1.0;
      }
    }
  }
  return adj;
}

}  // namespace

int AndersonConfig::cross_section() const {
  int m = 1;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) m *= dims[i];
  return m;
}

double site_potential(const AndersonConfig& config, long site) {
  switch (config.distribution) {
    case Distribution::Cauchy:
      return rng::cauchy(config.seed, static_cast<std::uint64_t>(site), config.delta);
    case Distribution::Uniform:
    default:
      return rng::uniform_sym(config.seed, static_cast<std::uint64_t>(site), config.w);
  }
}

std::vector<double> disorder_values(const AndersonConfig& config) {
  validate(config);
  const long total = static_cast<long>(config.chain_length()) * config.cross_section();
  std::vector<double> v(static_cast<std::size_t>(total));
  for (long i = 0; i < total; ++i) v[static_cast<std::size_t>(i)] = site_potential(config, i);
  return v;
}

Matrix transverse_block(const AndersonConfig& config, long slice) {
  const int m = config.cross_section();
  Matrix block = transverse_adjacency(config);
  for (int p = 0; p < m; ++p) block(p, p) += site_potential(config, slice * m + p);
  return block;
}

BlockModel build_anderson(const AndersonConfig& config) {
  validate(config);
  const int n = config.chain_length(), m = config.cross_section();
  std::vector<Matrix> a, b;
  a.reserve(static_cast<std::size_t>(n));
  b.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    a.push_back(transverse_block(config, k));
    b.push_back(Matrix::Identity(m, m));
  }
  return BlockModel(std::move(a), std::move(b));
}

ExponentSpectrum lyapunov_oracle(const AndersonConfig& config, double eps, const OracleOptions& options) {
  validate(config);
  const int m = config.cross_section();
  auto blocks = [config](long k) { return transverse_block(config, k); };
  return andersonspec::lyapunov_oracle(blocks, m, eps, options);
}

std::vector<cplx> zero_disorder_spectrum(const AndersonConfig& config, const BoundaryFactor& bf) {
  validate(config);
  const int n = config.chain_length();
  const int d = config.dimension();
  // Transverse mode centers 2 sum_i cos(2 pi k_i / n_i).
  std::vector<double> centers{0.0};
  for (int axis = 0; axis < d - 1; ++axis) {
    const int len = config.dims[static_cast<std::size_t>(axis)];
    std::vector<double> next;
    next.reserve(centers.size() * static_cast<std::size_t>(len));
    for (double c : centers)
      for (int k = 1; k <= len; ++k) next.push_back(c + 2.0 * std::cos(kTwoPi * k / len));
    centers = std::move(next);
  }
  std::vector<cplx> values;
  values.reserve(centers.size() * static_cast<std::size_t>(n));
  const double ch = 2.0 * std::cosh(bf.xi), sh = 2.0 * std::sinh(bf.xi);
  for (double c : centers)
    for (int l = 1; l <= n; ++l) {
      const double theta = (bf.phi + kTwoPi * l) / n;
      values.emplace_back(ch * std::cos(theta) + c, sh * std::sin(theta));
    }
  return values;
}

double ellipse_bound_check(const AndersonConfig& config, const BoundaryFactor& bf, const DenseSpectrum& spectrum) {
  validate(config);
  const int d = config.dimension();
  const double half_width = config.w / 2.0;
  const double lo = -(2.0 * d - 2.0) - half_width;
  const double hi = (2.0 * d - 2.0) + half_width;
  const double ch = 2.0 * std::cosh(bf.xi);
  const double sh = 2.0 * std::sinh(bf.xi);
  double scale = 0.0;
  for (const cplx& e : spectrum.eigenvalues) scale = std::max(scale, std::abs(e));
  double margin = -std::numeric_limits<double>::infinity();
  for (const cplx& e : spectrum.eigenvalues) {
    const double center = std::clamp(e.real(), lo, hi);
    double form;
    if (bf.xi == 0.0) {
      // Collapsed ellipse: containment in the real segment, with the
      // imaginary part measured against eigensolver noise.
      const double re_part = (e.real() - center) / ch;
      const double im_noise = std::abs(e.imag()) / std::max(scale, 1.0) / 1e-9;
      form = re_part * re_part + (im_noise > 1.0 ? im_noise : 0.0);
    } else {
      const double x = (e.real() - center) / ch;
      const double y = e.imag() / sh;
      form = x * x + y * y;
    }
    margin = std::max(margin, form - 1.0);
  }
  return margin;
}

cplx hatano_p(cplx eps, std::span<const double> v) {
  const ScaledP p = hatano_p_scaled(eps, v);
  return std::exp(p.log_abs) * p.phase;
}

double hatano_log_abs_p(cplx eps, std::span<const double> v) { return hatano_p_scaled(eps, v).log_abs; }

ScaledP hatano_p_scaled(cplx eps, std::span<const double> v) {
  const long n = static_cast<long>(v.size());
  // Continuants of the shifted tridiagonal, jointly rescaled: p_n equals
  // D_{1..n} - D_{2..n-1} and the +-i corner products cancel.
  // full: D over sites 1..k           (d_full_prev = D_{1..k-1})
  // core: D over sites 2..k           (started one site later)
  cplx full = eps - v[0], full_prev = 1.0;
  cplx core = 1.0, core_prev = 0.0;  // becomes D_{2..k} once k >= 2
  double log_scale = 0.0;
  for (long k = 1; k < n; ++k) {
    const cplx d = eps - v[static_cast<std::size_t>(k)];
    const cplx full_next = d * full - full_prev;
    full_prev = full;
    full = full_next;
    if (k < n - 1) {  // core runs over sites 2..n-1 only
      const cplx core_next = d * core - core_prev;
      core_prev = core;
      core = core_next;
    }
    const double mag = std::max({std::abs(full), std::abs(full_prev), std::abs(core), std::abs(core_prev)});
    if (mag > 1e100) {
      full /= mag;
      full_prev /= mag;
      core /= mag;
      core_prev /= mag;
      log_scale += std::log(mag);
    }
  }
  const cplx p = full - core;
  const double mag = std::abs(p);
  if (mag == 0.0) return ScaledP{-std::numeric_limits<double>::infinity(), cplx(1.0, 0.0)};
  return ScaledP{log_scale + std::log(mag), p / mag};
}

double hatano_exponent(cplx eps, std::span<const double> v) {
  return hatano_log_abs_p(eps, v) / static_cast<double>(v.size());
}

WingsAndLoops hatano_wings_and_loops(std::span<const double> v, double xi) {
  const long n = static_cast<long>(v.size());
  std::vector<Matrix> a, b;
  for (long k = 0; k < n; ++k) {
    a.push_back(Matrix::Constant(1, 1, cplx(v[static_cast<std::size_t>(k)], 0.0)));
    b.push_back(Matrix::Identity(1, 1));
  }
  const BlockModel model(std::move(a), std::move(b));
  const BoundaryFactor bf{xi, 0.0};
  const DenseSpectrum spectrum = dense_eigenvalues(realize_h_balanced(model, bf), SpectrumSource::Balanced);

  double scale = 0.0;
  for (const cplx& e : spectrum.eigenvalues) scale = std::max(scale, std::abs(e));
  const double nxi = n * xi;
  // log(2 cosh(n xi)) without overflow.
  const double log_2cosh = nxi > 40.0 ? nxi + std::log1p(std::exp(-2.0 * nxi)) : std::log(2.0 * std::cosh(nxi));

  WingsAndLoops result;
  result.max_wing_residual = -std::numeric_limits<double>::infinity();
  for (const cplx& e : spectrum.eigenvalues) {
    const double log_p = hatano_log_abs_p(e, v);
    if (std::abs(e.imag()) < 1e-8 * scale) {
      result.wings.push_back(e);
      // Wings obey |p_n| <= 2 cosh(n xi); the signed overshoot should stay
      // below ~1e-6. Dense eigenvalues of the strongly non-normal chain can
      // land well inside the bound, never above it.
      result.max_wing_residual = std::max(result.max_wing_residual, (log_p - log_2cosh) / std::max(1.0, log_2cosh));
    } else {
      result.loops.push_back(e);
      result.max_loop_residual = std::max(result.max_loop_residual, std::abs(log_p / n - xi));
    }
  }
  if (result.wings.empty()) result.max_wing_residual = 0.0;
  return result;
}

DOSHistogram dos_histogram(const AndersonConfig& config, int bins, long realizations) {
  validate(config);
  if (realizations < 1) throw EmptyHistogram("dos_histogram: need at least one realization");
  const int d = config.dimension();
  const double lo = -2.0 * d - config.w / 2.0 - 0.5;
  const double hi = 2.0 * d + config.w / 2.0 + 0.5;
  DOSHistogram dos;
  dos.realizations = realizations;
  dos.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) dos.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  long total = 0;
  const double width = (hi - lo) / bins;
  for (long r = 0; r < realizations; ++r) {
    AndersonConfig sample = config;
    sample.seed = config.seed + static_cast<std::uint64_t>(r);
    // xi = 0, phi = 0: the realization is real symmetric.
    const BlockModel model = build_anderson(sample);
    const BoundaryFactor bf{0.0, 0.0};
    RealMatrix h = realize_h(model, bf).real();
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double e = solver.eigenvalues()(i);
      const long bin = static_cast<long>(std::floor((e - lo) / width));
      if (bin >= 0 && bin < bins) {
        ++counts[static_cast<std::size_t>(bin)];
        ++total;
      }
    }
  }
  if (total == 0) throw EmptyHistogram("dos_histogram: no eigenvalues landed in the support window");
  dos.density.resize(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i)
    dos.density[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / (static_cast<double>(total) * width);
  return dos;
}

DOSHistogram dos_histogram(const AndersonConfig& config, long realizations) {
  return dos_histogram(config, 200, realizations);
}

double thouless_exponent(const DOSHistogram& dos, double eps) {
  if (dos.density.empty()) throw EmptyHistogram("thouless_exponent: empty histogram");
  const std::size_t bins = dos.density.size();
  double gamma = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double e0 = dos.edges[i], e1 = dos.edges[i + 1];
    const double width = e1 - e0;
    const double center = (e0 + e1) / 2.0;
    const double mass = dos.density[i] * width;
    if (mass == 0.0) continue;
    if (std::abs(eps - center) < width / 2.0) {
      // Singular cell: analytic average of log|eps - e| over the bin.
      // F(t) = t log|t| - t, average = [F(eps - e0) - F(eps - e1)] / width.
      auto F = [](double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; };
      gamma += mass * (F(eps - e0) - F(eps - e1)) / width;
    } else {
      gamma += mass * std::log(std::abs(eps - center));
    }
  }
  return gamma;
}

LoopPointCloud loop_point_cloud(const AndersonConfig& config, const BoundaryFactor& bf, const SweepSpec& sweep) {
  validate(config);
  if (config.dimension() < 2 && sweep.kind == SweepKind::Phase)
    throw UnsupportedDimension("loop_point_cloud: phase-sweep loop counting expects a 2D (or 3D) lattice");
  LoopPointCloud cloud;
  const int m = config.cross_section();

  auto eigenvalues_at = [&](const BoundaryFactor& point, std::uint64_t seed) {
    AndersonConfig sample = config;
    sample.seed = seed;
    const BlockModel model = build_anderson(sample);
    return dense_eigenvalues(realize_h_balanced(model, point), SpectrumSource::Balanced).eigenvalues;
  };

  std::vector<std::vector<cplx>> frames;
  switch (sweep.kind) {
    case SweepKind::Phase: {
      for (int i = 0; i < sweep.steps; ++i) {
        const double phi = sweep.from + (sweep.to - sweep.from) * i / std::max(1, sweep.steps - 1);
        BoundaryFactor point{bf.xi, phi};
        frames.push_back(eigenvalues_at(point, config.seed));
        for (const cplx& e : frames.back()) cloud.points.push_back({e, bf.xi, phi, config.seed});
      }
      break;
    }
    case SweepKind::Radius: {
      for (int i = 0; i < sweep.steps; ++i) {
        const double xi = sweep.from + (sweep.to - sweep.from) * i / std::max(1, sweep.steps - 1);
        BoundaryFactor point{xi, bf.phi};
        for (const cplx& e : eigenvalues_at(point, config.seed)) cloud.points.push_back({e, xi, bf.phi, config.seed});
      }
      break;
    }
    case SweepKind::Seed: {
      for (int i = 0; i < sweep.seed_count; ++i) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
        for (const cplx& e : eigenvalues_at(bf, seed)) cloud.points.push_back({e, bf.xi, bf.phi, seed});
      }
      break;
    }
  }

  if (sweep.kind == SweepKind::Phase && frames.size() > 1) {
    // Median step between successive frames, matching each point to its
    // nearest successor (the arcs are traced pointwise).
    std::vector<double> steps;
    for (std::size_t f = 0; f + 1 < frames.size(); ++f) {
      for (const cplx& e : frames[f]) {
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& e2 : frames[f + 1]) best = std::min(best, std::abs(e - e2));
        steps.push_back(best);
      }
    }
    std::nth_element(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2), steps.end());
    const double link = 3.0 * steps[steps.size() / 2];

    // Union-find over all points with the link radius.
    const std::size_t count = cloud.points.size();
    std::vector<std::size_t> parent(count);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j)
        if (std::abs(cloud.points[i].eps - cloud.points[j].eps) <= link) parent[find(i)] = find(j);
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < count; ++i) roots.push_back(find(i));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    cloud.components = static_cast<int>(roots.size());
    cloud.cluster_ambiguous = cloud.components != m;
  }
  return cloud;
}

}  // namespace andersonspec::anderson
