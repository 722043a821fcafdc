#include "andersonspec/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "andersonspec/duality.hpp"
#include "andersonspec/errors.hpp"
#include "andersonspec/parallel.hpp"

namespace andersonspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct QuadratureResult {
  double value = 0.0;
  int angles = 0;
  bool stalled = false;
};

/// Adaptive mean of `integrand` over the uniform angle grid
/// phi_j = 2 pi j / N + offset, doubling N until two successive levels agree
/// within tol. Nested grids reuse every previous sample; sums are pairwise in
/// grid order, so the result does not depend on worker count.
QuadratureResult angular_mean(const std::function<double(double)>& integrand, const QuadratureSettings& settings,
                              double offset = 0.0) {
  int n = std::max(8, settings.n_angles);
  std::vector<double> samples(static_cast<std::size_t>(n));
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t j) { samples[j] = integrand(kTwoPi * static_cast<double>(j) / n + offset); },
      settings.workers);
  QuadratureResult result;
  result.value = pairwise_sum(samples) / n;
  result.angles = n;
  if (!settings.adaptive) return result;
  while (n < settings.max_angles) {
    const int doubled = 2 * n;
    std::vector<double> next(static_cast<std::size_t>(doubled));
    for (int j = 0; j < n; ++j) next[static_cast<std::size_t>(2 * j)] = samples[static_cast<std::size_t>(j)];
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t j) {
          next[2 * j + 1] = integrand(kTwoPi * (2.0 * static_cast<double>(j) + 1.0) / doubled + offset);
        },
        settings.workers);
    const double refined = pairwise_sum(next) / doubled;
    const bool converged = std::abs(refined - result.value) < settings.tol;
    samples = std::move(next);
    n = doubled;
    result.value = refined;
    result.angles = n;
    if (converged) return result;
  }
  result.stalled = true;
  return result;
}

/// One determinant sample with the singular-angle retry: zeros on the
/// integration circle are measure-zero, so a hit is sidestepped by 1e-7.
double sample_with_retry(const std::function<double(double)>& raw, double phi) {
  try {
    return raw(phi);
  } catch (const SingularShift&) {
  }
  try {
    return raw(phi + 1e-7);
  } catch (const SingularShift&) {
  }
  return raw(phi - 1e-7);
}

QuadratureResult jensen_average_impl(const BlockModel& model, cplx eps, double xi, const QuadratureSettings& settings) {
  const double nm = model.dim();
  auto raw = [&](double phi) {
    const BoundaryFactor bf{xi, phi};
    return log_abs_det_shifted(model, bf, eps);
  };
  auto integrand = [&](double phi) { return sample_with_retry(raw, phi); };
  QuadratureResult result = angular_mean(integrand, settings);
  result.value -= model.log_abs_det_b_total() / nm;
  return result;
}

QuadratureResult lyapunov_average_impl(const BlockModel& model, cplx eps, double xi, const QuadratureSettings& settings) {
  const double nm = model.dim();
  auto raw = [&](double phi) { return log_det_k_shifted(model, xi, phi, eps).real() / (2.0 * nm); };
  auto integrand = [&](double phi) { return sample_with_retry(raw, phi); };
  QuadratureResult result = angular_mean(integrand, settings);
  result.value += model.log_abs_det_b_partial() / nm;
  return result;
}

QuadratureResult curve_point(const BlockModel& model, cplx eps, double xi, CurveBasis basis,
                             const QuadratureSettings& settings) {
  return basis == CurveBasis::H ? jensen_average_impl(model, eps, xi, settings)
                                : lyapunov_average_impl(model, eps, xi, settings);
}

[[noreturn]] void throw_stall(double xi, int angles) {
  std::ostringstream msg;
  msg << "quadrature did not converge with " << angles << " angles at xi = " << xi
      << "; a transfer exponent most likely lies within ~1e-6 of this radius";
  throw QuadratureStall(msg.str(), xi);
}

CountingCurve sweep_curve(const BlockModel& model, cplx eps, const CurveSettings& settings, CurveBasis basis) {
  CurveSettings resolved = settings;
  if (resolved.xi_max < 0.0) resolved.xi_max = 1.0 + std::log(1.0 + model.norm_bound());
  const int points = static_cast<int>(std::floor(resolved.xi_max / resolved.grid_step + 1e-9)) + 1;

  CountingCurve curve;
  curve.energy = eps;
  curve.basis = basis;
  curve.quad_tol = resolved.quad.tol;
  curve.block_size = model.block_size();
  curve.xi_grid.resize(static_cast<std::size_t>(points));
  curve.g_values.resize(static_cast<std::size_t>(points));
  curve.n_angles_used.resize(static_cast<std::size_t>(points));
  curve.flagged.assign(static_cast<std::size_t>(points), 0);

  QuadratureSettings quad = resolved.quad;
  if (resolved.workers > 1) quad.workers = 1;  // outer loop owns the pool
  parallel_for(
      static_cast<std::size_t>(points),
      [&](std::size_t i) {
        const double xi = resolved.grid_step * static_cast<double>(i);
        const QuadratureResult r = curve_point(model, eps, xi, basis, quad);
        curve.xi_grid[i] = xi;
        curve.g_values[i] = r.value;
        curve.n_angles_used[i] = r.angles;
        curve.flagged[i] = r.stalled ? 1 : 0;
      },
      resolved.workers);
  return curve;
}

}  // namespace

double jensen_average(const BlockModel& model, cplx eps, double xi, const QuadratureSettings& settings) {
  const QuadratureResult r = jensen_average_impl(model, eps, xi, settings);
  if (r.stalled) throw_stall(xi, r.angles);
  return r.value;
}

double sum_positive_exponents(const BlockModel& model, cplx eps, const QuadratureSettings& settings) {
  const double nm = model.dim();
  const int base = std::max(8, settings.n_angles);

  // Real spectra of the Bloch family H(e^{i phi}); a collision of eps with
  // an eigenvalue shifts the whole grid by half the base step.
  auto level_value = [&](double phi) {
    const BoundaryFactor bf{0.0, phi};
    const Matrix h = realize_h(model, bf);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NoConvergence("sum_positive_exponents: Hermitian eigensolve failed");
    const auto& lambda = solver.eigenvalues();
    const double scale = std::max(1.0, std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1))));
    std::vector<double> logs(static_cast<std::size_t>(lambda.size()));
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const double gap = std::abs(eps - cplx(lambda(i), 0.0));
      if (gap < 1e-13 * scale) throw SingularShift("sum_positive_exponents: eps collides with a Bloch eigenvalue");
      logs[static_cast<std::size_t>(i)] = std::log(gap);
    }
    return pairwise_sum(logs) / nm;
  };

  for (double offset : {0.0, std::numbers::pi / base}) {
    try {
      const QuadratureResult r = angular_mean(level_value, settings, offset);
      if (r.stalled) throw_stall(0.0, r.angles);
      return r.value - model.log_abs_det_b_total() / nm;
    } catch (const SingularShift&) {
      if (offset != 0.0) break;
    }
  }
  throw RealAxisSingularity("sum_positive_exponents: eps collides with Bloch spectra on both angle grids");
}

CountingCurve counting_curve(const BlockModel& model, cplx eps, const CurveSettings& settings) {
  return sweep_curve(model, eps, settings, CurveBasis::H);
}

CountingCurve lyapunov_curve(const BlockModel& model, cplx eps, const CurveSettings& settings) {
  if (!model.corner_unitary()) throw NotUnitaryCorner("lyapunov_curve: corner bond B_n must be unitary");
  return sweep_curve(model, eps, settings, CurveBasis::K);
}

BreakpointReport extract_breakpoints(const BlockModel& model, const CountingCurve& curve,
                                     const RefineSettings& refine) {
  const int m = curve.block_size > 0 ? curve.block_size : model.block_size();
  const std::size_t points = curve.xi_grid.size();
  if (points < 4) throw Error("extract_breakpoints: need at least 4 grid points");
  const double h = curve.xi_grid[1] - curve.xi_grid[0];
  const double unit = 1.0 / m;

  BreakpointReport report;
  report.grid_spacing = h;
  report.quad_angles = *std::max_element(curve.n_angles_used.begin(), curve.n_angles_used.end());
  report.mean_positive = curve.g_values.front();

  // Monotonicity within quadrature noise.
  for (std::size_t i = 0; i + 1 < points; ++i) {
    if (curve.g_values[i + 1] < curve.g_values[i] - 10.0 * curve.quad_tol) {
      report.warnings.push_back("curve not monotone at xi = " + std::to_string(curve.xi_grid[i + 1]));
      break;
    }
  }
  for (std::size_t i = 0; i < points; ++i)
    if (curve.flagged[i]) report.warnings.push_back("stalled quadrature at xi = " + std::to_string(curve.xi_grid[i]));

  // Interval slopes in units of 1/m; clean intervals lie within a quarter
  // level of an integer.
  const std::size_t intervals = points - 1;
  std::vector<double> sigma(intervals);
  std::vector<int> level(intervals, -1);  // -1: transition interval
  for (std::size_t i = 0; i < intervals; ++i) {
    sigma[i] = (curve.g_values[i + 1] - curve.g_values[i]) / h;
    const double scaled = sigma[i] * m;
    const int rounded = static_cast<int>(std::lround(scaled));
    if (rounded >= 0 && rounded <= m && std::abs(scaled - rounded) < 0.25) level[i] = rounded;
  }
  report.head_slope = sigma.front();
  if (sigma.front() > 0.5 * unit)
    throw NoPlateau("extract_breakpoints: slope at xi -> 0+ is already " + std::to_string(sigma.front()) +
                    "; the smallest exponent is below the grid resolution");

  // Slope of the curve just right of x, from two fresh angular averages.
  auto local_slope = [&](double x) {
    const double delta = std::max(h / 16.0, 5e-4);
    const double lo = curve_point(model, curve.energy, x - delta, curve.basis, refine.quad).value;
    const double hi = curve_point(model, curve.energy, x + delta, curve.basis, refine.quad).value;
    return (hi - lo) / (2.0 * delta);
  };

  int current = 0;  // established clean level (head slope validated ~ 0)
  std::size_t i = 0;
  while (i < intervals) {
    if (level[i] == current) {
      ++i;
      continue;
    }
    // Transition zone: advance until a clean interval at a higher level.
    const std::size_t zone_start = i;
    while (i < intervals && level[i] != current && !(level[i] > current)) ++i;
    std::size_t zone_end;
    int next_level;
    if (i < intervals && level[i] > current) {
      zone_end = i;  // first clean interval of the new segment
      next_level = level[i];
    } else if (i == intervals) {
      break;  // curve ends inside a transition; tail handled below
    } else {
      ++i;  // level[i] == current again: noise blip, keep walking
      continue;
    }
    const std::size_t zone_width = zone_end - zone_start;
    if (zone_width > 2 && next_level - current > 1)
      throw UnresolvedCluster("extract_breakpoints: " + std::to_string(next_level - current) +
                              " slope levels change across a wide zone near xi = " +
                              std::to_string(curve.xi_grid[zone_start]) + "; refine the grid");

    // Bisect on the slope across the zone, widened by one interval each way:
    // a kink within a quarter level of a grid slope still rounds clean, so it
    // can hide just outside the zone itself.
    double lo = curve.xi_grid[zone_start == 0 ? 0 : zone_start - 1];
    double hi = curve.xi_grid[std::min(zone_end + 2, points - 1)];
    const double target = 0.5 * (current + next_level) * unit;
    for (int step = 0; step < refine.max_steps && hi - lo > refine.target_width; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (local_slope(mid) > target)
        hi = mid;
      else
        lo = mid;
    }
    report.breakpoints.push_back({0.5 * (lo + hi), (next_level - current) * unit});
    current = next_level;
    i = zone_end + 1;
  }

  report.tail_slope = sigma.back();
  report.tail_reaches_unit_slope = level.back() == m;
  double jump_sum = 0.0;
  for (const Breakpoint& b : report.breakpoints) jump_sum += b.slope_jump;
  report.slope_sum_residual = std::abs(jump_sum - 1.0);
  if (!report.tail_reaches_unit_slope)
    report.warnings.push_back("sweep ends before the largest exponent; jump sum covers " + std::to_string(jump_sum));
  report.xi_min = report.breakpoints.empty() ? 0.0 : report.breakpoints.front().xi;
  if (report.breakpoints.empty()) report.warnings.push_back("no breakpoint inside the sweep range");
  return report;
}

}  // namespace andersonspec
