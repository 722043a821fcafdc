#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "andersonspec/blockmodel.hpp"
#include "andersonspec/transfer.hpp"
#include "andersonspec/types.hpp"

namespace andersonspec::anderson {

enum class Distribution { Uniform, Cauchy };

/// Hypercubic-lattice sample: lengths dims = {n_1, ..., n_D} with the chain
/// running along the last axis (n = n_D, m = n_1 ... n_{D-1}), diagonal
/// disorder of width w (uniform on [-w/2, w/2]) or Cauchy half-width delta,
/// and periodic boundary conditions across the transverse directions.
/// Disorder is drawn per site from the (seed, site index) counter mixer, so a
/// realization is reproducible and independent of traversal order.
struct AndersonConfig {
  std::vector<int> dims;
  double w = 0.0;
  double delta = 0.0;
  Distribution distribution = Distribution::Uniform;
  std::uint64_t seed = 0;

  int dimension() const { return static_cast<int>(dims.size()); }
  int chain_length() const { return dims.back(); }
  int cross_section() const;
};

/// Potential of the site with global index `site` (slice-major order:
/// site = slice * m + transverse index). Slices beyond the configured chain
/// length keep drawing fresh values, which is what the long-chain oracle
/// consumes.
double site_potential(const AndersonConfig& config, long site);

/// The nm potentials of the configured sample.
std::vector<double> disorder_values(const AndersonConfig& config);

/// Transverse block A_k (0-based slice): periodic lattice adjacency over the
/// cross-section plus the diagonal disorder of slice k.
Matrix transverse_block(const AndersonConfig& config, long slice);

/// Block model with identity bonds and the transverse blocks above.
BlockModel build_anderson(const AndersonConfig& config);

/// Long-chain Lyapunov oracle streaming transverse blocks past the configured
/// chain length.
ExponentSpectrum lyapunov_oracle(const AndersonConfig& config, double eps, const OracleOptions& options = {});

/// Closed-form spectrum at w = 0: for each transverse mode with center
/// eps_r = 2 sum_i cos(2 pi k_i / n_i) the n eigenvalues lie on the ellipse
///   Re = 2 cosh(xi) cos(theta_l) + eps_r,  Im = 2 sinh(xi) sin(theta_l),
/// theta_l = (phi + 2 pi l) / n.
std::vector<cplx> zero_disorder_spectrum(const AndersonConfig& config, const BoundaryFactor& bf);

/// Worst-case ellipse-containment margin: for each eigenvalue the ellipse
/// form is minimized over centers eps_0 in [-2D+2-w/2, 2D-2+w/2] and the
/// maximum of (min form - 1) is returned; <= 0 means every eigenvalue sits
/// inside the bounding union. At xi = 0 the ellipses collapse and the check
/// degrades to real-interval containment.
double ellipse_bound_check(const AndersonConfig& config, const BoundaryFactor& bf, const DenseSpectrum& spectrum);

/// p_n(eps) = det[eps I - H(i)] for a 1D realization, via the tridiagonal
/// continuant recurrence with the corner correction (the +-i corner terms
/// cancel, leaving D_{1..n} - D_{2..n-1}). O(n) per evaluation.
cplx hatano_p(cplx eps, std::span<const double> v);

/// log|p_n(eps)| with magnitude tracking, safe for any n.
double hatano_log_abs_p(cplx eps, std::span<const double> v);

/// arg-preserving scaled evaluation: p_n = exp(log_abs) * phase.
struct ScaledP {
  double log_abs;
  cplx phase;  // unit modulus
};
ScaledP hatano_p_scaled(cplx eps, std::span<const double> v);

/// xi_1(eps) = (1/n) log|p_n(eps)|, the single decay exponent of the chain.
/// Meaningful when e^{n xi_1} dominates; callers should warn below n = 50.
double hatano_exponent(cplx eps, std::span<const double> v);

/// Spectrum of the 1D chain at corner radius xi split into real wings and
/// complex loop points, with the characteristic-polynomial residuals at each
/// class of points.
struct WingsAndLoops {
  std::vector<cplx> wings;
  std::vector<cplx> loops;
  double max_wing_residual = 0.0;  // signed overshoot of log|p_n| above log(2 cosh n xi)
  double max_loop_residual = 0.0;  // | (1/n) log|p_n| - xi |
};
WingsAndLoops hatano_wings_and_loops(std::span<const double> v, double xi);

/// Normalized level-density histogram accumulated over `realizations`
/// consecutive seeds at xi = 0.
struct DOSHistogram {
  std::vector<double> edges;    // bins + 1 ascending edges
  std::vector<double> density;  // integrates to 1
  long realizations = 0;
};
DOSHistogram dos_histogram(const AndersonConfig& config, int bins, long realizations);

/// Default DOS support [-2D - w/2 - 0.5, 2D + w/2 + 0.5] with 200 bins.
DOSHistogram dos_histogram(const AndersonConfig& config, long realizations);

/// gamma_1(eps) = integral rho(e) log|eps - e| de by midpoint rule, with the
/// cell containing eps integrated analytically (the log kernel is integrable).
double thouless_exponent(const DOSHistogram& dos, double eps);

/// Eigenvalue point clouds for sweeps of the boundary phase, radius, or the
/// disorder seed, with per-point sweep metadata; the phase-swept cloud is
/// clustered into connected components (link radius 3x median consecutive-arc
/// step), whose count should equal the cross-section m.
struct CloudPoint {
  cplx eps;
  double xi;
  double phi;
  std::uint64_t seed;
};
struct LoopPointCloud {
  std::vector<CloudPoint> points;
  int components = 0;        // only for phase sweeps
  bool cluster_ambiguous = false;  // components != m (small-xi irregular regime)
};
enum class SweepKind { Phase, Radius, Seed };
struct SweepSpec {
  SweepKind kind = SweepKind::Phase;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;       // sample count along the sweep
  int seed_count = 1;  // for seed sweeps
};
LoopPointCloud loop_point_cloud(const AndersonConfig& config, const BoundaryFactor& bf, const SweepSpec& sweep);

}  // namespace andersonspec::anderson
