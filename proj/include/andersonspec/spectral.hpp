#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "andersonspec/blockmodel.hpp"
#include "andersonspec/types.hpp"

namespace andersonspec {

struct QuadratureSettings {
  int n_angles = 64;      // starting uniform-grid count (>= 8; powers of two nest)
  double tol = 1e-7;      // adaptive doubling stops when successive values differ by < tol
  bool adaptive = true;
  int max_angles = 4096;  // QuadratureStall beyond this
  int workers = 1;        // angle evaluations run on this many workers
};

/// G(xi): the angular average
///   -(1/(nm)) sum_k log|det B_k|
///   + (1/N) sum_j (1/(nm)) log|det[eps I - H_b(e^{xi + i phi_j / n})]|
/// over the uniform corner-phase grid phi_j = 2 pi j / N. Piecewise linear in
/// xi with slope jumps 1/m at the transfer exponents. A singular angle sample
/// is retried at phi +- 1e-7 before giving up.
double jensen_average(const BlockModel& model, cplx eps, double xi, const QuadratureSettings& settings = {});

/// G(0) through the Hermitian route: per angle the real spectrum of
/// H(e^{i phi}) is computed and (1/(nm)) sum_i log|eps - lambda_i| averaged.
/// Equals the mean positive exponent. A collision of real eps with an
/// eigenvalue shifts the whole angle grid by half a step before retrying.
double sum_positive_exponents(const BlockModel& model, cplx eps, const QuadratureSettings& settings = {});

enum class CurveBasis { H, K };

struct CountingCurve {
  std::vector<double> xi_grid;
  std::vector<double> g_values;
  std::vector<int> n_angles_used;
  std::vector<std::uint8_t> flagged;  // quadrature stalled at this point
  cplx energy{0.0, 0.0};
  CurveBasis basis = CurveBasis::H;
  double quad_tol = 1e-7;
  int block_size = 0;
};

struct CurveSettings {
  double xi_max = -1.0;     // < 0: use 1 + log(1 + ||model||)
  double grid_step = 0.025;
  QuadratureSettings quad;
  int workers = 1;          // grid points run on this many workers
};

/// G sampled on the xi grid [0, xi_max]. Stalled points are flagged, not fatal.
CountingCurve counting_curve(const BlockModel& model, cplx eps, const CurveSettings& settings = {});

/// Same sweep through the doubled operator K: the average of
/// (1/(2nm)) log|det[K(e^{2n xi + i phi}) - eps I]| plus
/// (1/(nm)) sum_{k<n} log|det B_k|; breakpoints are the Lyapunov exponents
/// gamma_a of Q. Requires a unitary corner bond.
CountingCurve lyapunov_curve(const BlockModel& model, cplx eps, const CurveSettings& settings = {});

struct Breakpoint {
  double xi;
  double slope_jump;  // approximately k/m for integer multiplicity k
};

struct BreakpointReport {
  std::vector<Breakpoint> breakpoints;
  double xi_min = 0.0;        // first breakpoint
  double mean_positive = 0.0; // curve value at xi = 0
  double grid_spacing = 0.0;
  int quad_angles = 0;
  double slope_sum_residual = 0.0;  // |sum of jumps - 1|; meaningful for full sweeps
  double head_slope = 0.0;          // measured before the first breakpoint
  double tail_slope = 0.0;          // measured after the last one
  bool tail_reaches_unit_slope = false;
  std::vector<std::string> warnings;
};

struct RefineSettings {
  QuadratureSettings quad;
  int max_steps = 24;          // slope-bisection iterations per breakpoint
  double target_width = 2e-5;  // stop once the bracket is this narrow
};

/// Reads the exponents off the curve: interval slopes, jump detection at the
/// 1/(2m) threshold, then slope bisection against fresh angular averages to
/// refine each breakpoint. Throws NoPlateau when the slope at xi -> 0+ already
/// exceeds 1/(2m) and UnresolvedCluster when breakpoints merge within the
/// grid resolution. With max_steps = 0 the bracket midpoint is reported,
/// accurate to the grid spacing.
BreakpointReport extract_breakpoints(const BlockModel& model, const CountingCurve& curve,
                                     const RefineSettings& refine = {});

}  // namespace andersonspec
