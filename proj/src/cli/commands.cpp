#include "commands.hpp"

#include <chrono>
#include <deque>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>

#include "andersonspec/anderson.hpp"
#include "andersonspec/duality.hpp"
#include "andersonspec/errors.hpp"
#include "andersonspec/parallel.hpp"
#include "andersonspec/spectral.hpp"
#include "andersonspec/transfer.hpp"
#include "csv.hpp"

#ifndef ANDERSONSPEC_VERSION
#define ANDERSONSPEC_VERSION "0.0.0"
#endif

namespace andersonspec::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using anderson::AndersonConfig;

AndersonConfig anderson_config(const ExperimentConfig& config, std::uint64_t seed) {
  AndersonConfig out;
  out.dims = config.model.dims;
  out.w = config.model.w;
  out.delta = config.model.delta;
  out.distribution =
      config.model.distribution == "cauchy" ? anderson::Distribution::Cauchy : anderson::Distribution::Uniform;
  out.seed = seed;
  return out;
}

cplx energy_of(const ExperimentConfig& config) { return cplx(config.energy.re, config.energy.im); }

QuadratureSettings quadrature_of(const ExperimentConfig& config) {
  QuadratureSettings quad;
  quad.n_angles = config.numerics.angles;
  quad.tol = config.numerics.tol;
  quad.adaptive = config.numerics.adaptive;
  quad.workers = 1;
  return quad;
}

/// Payload tables collected by a command, flushed as CSV files or one JSON
/// payload document depending on the output format.
struct Emitter {
  const ExperimentConfig& config;
  fs::path dir;
  std::deque<std::pair<std::string, Table>> tables;  // deque: add() must not invalidate references
  json diagnostics = json::object();

  Table& add(const std::string& name, std::vector<std::string> header) {
    tables.emplace_back(name, Table(std::move(header)));
    tables.back().second.set_precision(config.output.precision);
    return tables.back().second;
  }

  void flush() {
    fs::create_directories(dir);
    const json resolved = resolved_json(config);
    {
      std::ofstream out(dir / "config.resolved.json");
      out << resolved.dump(2) << "\n";
    }
    json files = json::array();
    if (config.output.format == "csv") {
      for (const auto& [name, table] : tables) {
        table.write_csv(dir / (name + ".csv"));
        files.push_back(name + ".csv");
      }
    } else {
      json payload = json::object();
      for (const auto& [name, table] : tables) payload[name] = table.to_json();
      std::ofstream out(dir / "payload.json");
      out << payload.dump(2) << "\n";
      files.push_back("payload.json");
    }
    json envelope;
    envelope["command"] = config.command;
    envelope["version"] = ANDERSONSPEC_VERSION;
    envelope["config_hash"] = config_hash(resolved);
    envelope["seeds"] = config.model.seeds;
    envelope["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
    envelope["files"] = files;
    envelope["diagnostics"] = diagnostics;
    std::ofstream out(dir / "envelope.json");
    out << envelope.dump(2) << "\n";
  }
};

// --- spectrum ---------------------------------------------------------------

int cmd_spectrum(const ExperimentConfig& config, Emitter& emit) {
  Table& cloud = emit.add("spectrum", {"re", "im", "xi", "phi", "seed"});
  const BoundaryFactor bf{config.boundary.xi, config.boundary.phi};

  auto emit_points = [&](const anderson::LoopPointCloud& points) {
    for (const auto& p : points.points)
      cloud.cell(p.eps.real()).cell(p.eps.imag()).cell(p.xi).cell(p.phi).cell(p.seed), cloud.end_row();
  };

  anderson::SweepSpec sweep;
  if (config.boundary.phi_range) {
    sweep.kind = anderson::SweepKind::Phase;
    sweep.from = config.boundary.phi_range->from;
    sweep.to = config.boundary.phi_range->to;
    sweep.steps = config.boundary.phi_range->steps;
    const auto points = anderson::loop_point_cloud(anderson_config(config, config.model.seeds.front()), bf, sweep);
    emit_points(points);
    emit.diagnostics["components"] = points.components;
    emit.diagnostics["cluster_ambiguous"] = points.cluster_ambiguous;
  } else if (config.boundary.xi_range) {
    sweep.kind = anderson::SweepKind::Radius;
    sweep.from = config.boundary.xi_range->from;
    sweep.to = config.boundary.xi_range->to;
    sweep.steps = config.boundary.xi_range->steps;
    emit_points(anderson::loop_point_cloud(anderson_config(config, config.model.seeds.front()), bf, sweep));
  } else {
    for (std::uint64_t seed : config.model.seeds) {
      const AndersonConfig sample = anderson_config(config, seed);
      const BlockModel model = anderson::build_anderson(sample);
      const DenseSpectrum spectrum = dense_eigenvalues(realize_h_balanced(model, bf), SpectrumSource::Balanced);
      for (const cplx& e : spectrum.eigenvalues)
        cloud.cell(e.real()).cell(e.imag()).cell(bf.xi).cell(bf.phi).cell(seed), cloud.end_row();
    }
  }
  return kOk;
}

// --- exponents / lyapunov ----------------------------------------------------

int cmd_exponents(const ExperimentConfig& config, Emitter& emit, CurveBasis basis) {
  Table& curve_table = emit.add("curve", {"seed", "xi", "g", "angles", "stalled"});
  Table& breakpoints = emit.add("breakpoints", {"seed", "xi", "slope_jump"});
  Table& ensemble = emit.add("ensemble", {"seed", "xi_min", "mean_positive", "warnings"});
  Table& summary = emit.add("summary", {"quantity", "mean", "std_error", "count"});

  CurveSettings settings;
  settings.grid_step = config.numerics.grid_step;
  settings.xi_max = config.numerics.xi_max;
  settings.quad = quadrature_of(config);
  settings.workers = resolve_workers(config.numerics.workers);
  const cplx eps = energy_of(config);

  std::vector<double> xi_mins, plateaus;
  for (std::uint64_t seed : config.model.seeds) {
    const BlockModel model = anderson::build_anderson(anderson_config(config, seed));
    const CountingCurve curve =
        basis == CurveBasis::H ? counting_curve(model, eps, settings) : lyapunov_curve(model, eps, settings);
    for (std::size_t i = 0; i < curve.xi_grid.size(); ++i) {
      curve_table.cell(seed).cell(curve.xi_grid[i]).cell(curve.g_values[i]).cell(curve.n_angles_used[i]);
      curve_table.cell(static_cast<std::int64_t>(curve.flagged[i]));
      curve_table.end_row();
    }
    std::string warning_text;
    try {
      RefineSettings refine;
      refine.quad = settings.quad;
      refine.quad.workers = settings.workers;
      const BreakpointReport report = extract_breakpoints(model, curve, refine);
      for (const Breakpoint& b : report.breakpoints)
        breakpoints.cell(seed).cell(b.xi).cell(b.slope_jump), breakpoints.end_row();
      if (!report.breakpoints.empty()) {
        xi_mins.push_back(report.xi_min);
        plateaus.push_back(report.mean_positive);
      }
      for (const std::string& w : report.warnings) warning_text += (warning_text.empty() ? "" : "; ") + w;
      ensemble.cell(seed).cell(report.xi_min).cell(report.mean_positive).cell(warning_text);
      ensemble.end_row();
    } catch (const NoPlateau& e) {
      ensemble.cell(seed).cell(0.0).cell(curve.g_values.front()).cell(std::string("NoPlateau: ") + e.what());
      ensemble.end_row();
    }
  }

  auto mean_se = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= std::max<std::size_t>(1, v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double se = v.size() > 1 ? std::sqrt(var / (v.size() - 1) / v.size()) : 0.0;
    return std::pair{mean, se};
  };
  const auto [xi_mean, xi_se] = mean_se(xi_mins);
  summary.cell(std::string("xi_min")).cell(xi_mean).cell(xi_se).cell(static_cast<std::int64_t>(xi_mins.size()));
  summary.end_row();
  const auto [pl_mean, pl_se] = mean_se(plateaus);
  summary.cell(std::string("mean_positive")).cell(pl_mean).cell(pl_se).cell(static_cast<std::int64_t>(plateaus.size()));
  summary.end_row();
  return kOk;
}

// --- hatano -------------------------------------------------------------------

int cmd_hatano(const ExperimentConfig& config, Emitter& emit) {
  const int dimension = static_cast<int>(config.model.dims.size());
  if (dimension != 1 && !(dimension == 2 && config.hatano.xic))
    throw Error("hatano command expects a 1D chain (the xi_c scan also accepts 2D)");
  const cplx eps = energy_of(config);

  if (dimension == 1) {
    if (config.model.dims.front() < 50)
      emit.diagnostics["warnings"] = json::array({"chain shorter than 50 sites: e^{n xi_1} may not dominate"});

    // Exponent versus disorder width.
    Table& table = emit.add("exponent_vs_w", {"w", "seed", "xi1"});
    std::vector<double> w_values = config.hatano.w_list;
    if (w_values.empty()) w_values = {config.model.w};
    for (double w : w_values) {
      for (std::uint64_t seed : config.model.seeds) {
        AndersonConfig sample = anderson_config(config, seed);
        sample.w = w;
        const std::vector<double> v = anderson::disorder_values(sample);
        table.cell(w).cell(seed).cell(anderson::hatano_exponent(eps, v));
        table.end_row();
      }
    }

    // Wings / loops classification at the configured radius.
    if (config.hatano.wings) {
      Table& wings = emit.add("wings_loops", {"re", "im", "class", "seed"});
      const AndersonConfig sample = anderson_config(config, config.model.seeds.front());
      const std::vector<double> v = anderson::disorder_values(sample);
      const auto split = anderson::hatano_wings_and_loops(v, config.hatano.xi);
      for (const cplx& e : split.wings)
        wings.cell(e.real()).cell(e.imag()).cell(std::string("wing")).cell(sample.seed), wings.end_row();
      for (const cplx& e : split.loops)
        wings.cell(e.real()).cell(e.imag()).cell(std::string("loop")).cell(sample.seed), wings.end_row();
      emit.diagnostics["max_wing_residual"] = split.max_wing_residual;
      emit.diagnostics["max_loop_residual"] = split.max_loop_residual;
    }

    // Thouless-formula comparison from the disorder-averaged level density.
    if (config.hatano.thouless) {
      Table& thouless = emit.add("thouless", {"eps", "gamma_thouless", "xi1_mean"});
      const AndersonConfig base = anderson_config(config, config.model.seeds.front());
      const auto dos = anderson::dos_histogram(base, config.hatano.thouless_realizations);
      double xi1_mean = 0.0;
      for (std::uint64_t seed : config.model.seeds) {
        AndersonConfig sample = anderson_config(config, seed);
        xi1_mean += anderson::hatano_exponent(eps, anderson::disorder_values(sample));
      }
      xi1_mean /= static_cast<double>(config.model.seeds.size());
      thouless.cell(eps.real()).cell(anderson::thouless_exponent(dos, eps.real())).cell(xi1_mean);
      thouless.end_row();
    }
  }

  // First-complex-eigenvalue scan: bisect the smallest xi at which some
  // eigenvalue leaves the real axis (threshold 1e-8 of the spectral radius).
  if (config.hatano.xic) {
    Table& xic = emit.add("xic", {"seed", "xi_c", "xi_hi"});
    for (std::uint64_t seed : config.model.seeds) {
      const AndersonConfig sample = anderson_config(config, seed);
      const BlockModel model = anderson::build_anderson(sample);
      auto has_complex = [&](double xi) {
        const BoundaryFactor bf{xi, 0.0};
        const DenseSpectrum s = dense_eigenvalues(realize_h_balanced(model, bf), SpectrumSource::Balanced);
        double scale = 0.0;
        for (const cplx& e : s.eigenvalues) scale = std::max(scale, std::abs(e));
        for (const cplx& e : s.eigenvalues)
          if (std::abs(e.imag()) > 1e-8 * scale) return true;
        return false;
      };
      double lo = 0.0, hi = config.hatano.xic_hi;
      if (!has_complex(hi)) {
        xic.cell(seed).cell(-1.0).cell(hi);
        xic.end_row();
        continue;
      }
      for (int step = 0; step < 30 && hi - lo > 1e-4; ++step) {
        const double mid = 0.5 * (lo + hi);
        (has_complex(mid) ? hi : lo) = mid;
      }
      xic.cell(seed).cell(0.5 * (lo + hi)).cell(config.hatano.xic_hi);
      xic.end_row();
    }
  }
  return kOk;
}

// --- dos ----------------------------------------------------------------------

int cmd_dos(const ExperimentConfig& config, Emitter& emit) {
  const AndersonConfig base = anderson_config(config, config.model.seeds.front());
  const auto dos = anderson::dos_histogram(base, config.dos.bins, config.dos.realizations);
  Table& hist = emit.add("dos", {"bin_center", "density"});
  for (std::size_t i = 0; i < dos.density.size(); ++i) {
    hist.cell((dos.edges[i] + dos.edges[i + 1]) / 2.0).cell(dos.density[i]);
    hist.end_row();
  }
  if (!config.dos.energies.empty()) {
    Table& thouless = emit.add("thouless", {"eps", "gamma"});
    for (double e : config.dos.energies) thouless.cell(e).cell(anderson::thouless_exponent(dos, e)), thouless.end_row();
  }
  return kOk;
}

// --- verify -------------------------------------------------------------------

struct CheckRow {
  std::string name;
  int cases;
  double max_residual;
  double threshold;
};

int cmd_verify(const ExperimentConfig& config, Emitter& emit) {
  std::mt19937_64 rng(config.verify.master_seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_matrix = [&](int m) {
    Matrix g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = cplx(uni(rng), uni(rng));
    return g;
  };
  auto random_hermitian = [&](int m) {
    const Matrix g = random_matrix(m);
    return Matrix((g + g.adjoint()) / 2.0);
  };
  auto random_unitary = [&](int m) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(m));
    return Matrix(qr.householderQ());
  };
  auto random_blocks = [&](int n, int m, bool unitary_corner) {
    std::pair<std::vector<Matrix>, std::vector<Matrix>> blocks;
    for (int k = 0; k < n; ++k) {
      blocks.first.push_back(random_hermitian(m));
      if (k == n - 1 && unitary_corner) {
        blocks.second.push_back(random_unitary(m));
      } else {
        Matrix g = random_matrix(m);
        while (std::abs(g.determinant()) < 0.1) g = random_matrix(m);
        blocks.second.push_back(g);
      }
    }
    return blocks;
  };
  auto random_model = [&](int n, int m, bool unitary_corner) {
    auto [a, b] = random_blocks(n, m, unitary_corner);
    return BlockModel(std::move(a), std::move(b));
  };

  std::vector<CheckRow> checks;
  const int instances = config.verify.instances;

  {
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      const int n = 3 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 3);
      auto [a, b] = random_blocks(n, m, false);
      const BlockModel model(a, b);
      const cplx eps(2.0 * uni(rng), 2.0 * uni(rng));
      const double radius = std::exp(uni(rng) * static_cast<double>(n));
      const cplx s = std::polar(radius, std::numbers::pi * uni(rng));
      double residual;
      if (config.verify.corrupt_corner_sign) {
        // Fixture: the transfer side sees a corner bond with flipped sign,
        // so the identity must fail loudly.
        b.back() = -b.back();
        const BlockModel corrupted(std::move(a), std::move(b));
        const DualitySides lhs_side = duality_sides(model, eps, s);
        const DualitySides rhs_side = duality_sides(corrupted, eps, s);
        const cplx lhs = lhs_side.lhs, rhs = rhs_side.rhs * std::exp(cplx(rhs_side.log_scale - lhs_side.log_scale));
        residual = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
      } else {
        residual = duality_residual(model, eps, s);
      }
      worst = std::max(worst, residual);
    }
    checks.push_back({"duality_eq10", instances, worst, 1e-8});
  }

  {
    double worst = 0.0;
    for (int i = 0; i < instances / 5 + 1; ++i) {
      const int n = 3 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 2);
      const BlockModel model = random_model(n, m, false);
      const double radius = std::exp(uni(rng));
      const cplx s = std::polar(radius, std::numbers::pi * uni(rng));
      const BoundaryFactor bf{std::log(radius) / n, std::arg(s)};
      const DenseSpectrum spectrum = dense_eigenvalues(realize_h_balanced(model, bf), SpectrumSource::Balanced);
      for (const cplx& e : spectrum.eigenvalues) {
        const DenseSpectrum lam = dense_eigenvalues(build_transfer(model, e).matrix);
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& l : lam.eigenvalues) best = std::min(best, std::abs(l - s));
        worst = std::max(worst, best / (1.0 + std::abs(s)));
      }
    }
    checks.push_back({"duality_eigenvalue_level", instances / 5 + 1, worst, 1e-6});
  }

  {
    double worst = 0.0;
    for (int i = 0; i < instances / 5 + 1; ++i) {
      const int n = 3 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 3);
      const BlockModel model = random_model(n, m, false);
      const cplx eps(uni(rng), uni(rng));
      const auto [r1, r2] = symplectic_residuals(model, eps);
      const double scale = build_transfer(model, eps).matrix.squaredNorm();
      worst = std::max(worst, std::max(r1, r2) / std::max(1.0, scale));
    }
    checks.push_back({"symplectic_eq8", instances / 5 + 1, worst, 1e-8});
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const int n = 3 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 3);
      const BlockModel model = random_model(n, m, false);
      const BoundaryFactor bf{0.0, std::numbers::pi * uni(rng)};
      const Matrix h = realize_h(model, bf);
      worst = std::max(worst, (h - h.adjoint()).cwiseAbs().maxCoeff());
    }
    checks.push_back({"hermitian_at_bloch", 10, worst, 1e-12});
  }

  {
    double worst_struct = 0.0, worst_spectral = 0.0, worst_eq16 = 0.0;
    for (int i = 0; i < instances / 10 + 1; ++i) {
      const int n = 3 + static_cast<int>(rng() % 2), m = 1 + static_cast<int>(rng() % 2);
      const BlockModel model = random_model(n, m, true);
      const cplx t = std::polar(std::exp(uni(rng)), std::numbers::pi * uni(rng));
      const DoubledModel doubled{model};
      const SymmetryResiduals sym = symmetry_residuals(doubled, t);
      worst_struct = std::max({worst_struct, sym.j_residual, sym.s3_residual});
      worst_spectral = std::max(worst_spectral, sym.spectral_distance);

      const cplx eps(uni(rng), uni(rng));
      const Matrix q = build_q(model, eps).matrix;
      Matrix shifted = q;
      shifted.diagonal().array() -= t;
      cplx log_rhs = log_det(shifted) - static_cast<double>(m) * std::log(t);
      if (m % 2 != 0) log_rhs += cplx(0.0, std::numbers::pi);
      Matrix k = build_k(model, t);
      k.diagonal().array() -= eps;
      const cplx log_lhs = log_det(k) - 2.0 * model.log_abs_det_b_total();
      const double scale = std::max(log_lhs.real(), log_rhs.real());
      const cplx lhs = std::exp(log_lhs - scale), rhs = std::exp(log_rhs - scale);
      worst_eq16 = std::max(worst_eq16, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30}));
    }
    checks.push_back({"doubled_conjugations", instances / 10 + 1, worst_struct, 1e-12});
    checks.push_back({"doubled_inverse_similarity", instances / 10 + 1, worst_spectral, 1e-7});
    checks.push_back({"k_duality_eq16", instances / 10 + 1, worst_eq16, 1e-8});
  }

  Table& table = emit.add("checks", {"check", "cases", "max_residual", "threshold", "pass"});
  bool all_pass = true;
  for (const CheckRow& row : checks) {
    const bool pass = row.max_residual < row.threshold;
    all_pass = all_pass && pass;
    table.cell(row.name).cell(row.cases).cell(row.max_residual).cell(row.threshold).cell(std::string(pass ? "1" : "0"));
    table.end_row();
  }
  emit.diagnostics["all_pass"] = all_pass;
  return all_pass ? kOk : kVerifyFailed;
}

}  // namespace

int run_command(const ExperimentConfig& config, std::string* error_out) {
  auto report = [&](int code, const std::string& kind, const std::string& message) {
    if (error_out) {
      json err;
      err["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
      *error_out = err.dump();
    }
    return code;
  };
  try {
    Emitter emit{config, fs::path(config.output.dir), {}, nlohmann::json::object()};
    int code;
    if (config.command == "spectrum")
      code = cmd_spectrum(config, emit);
    else if (config.command == "exponents")
      code = cmd_exponents(config, emit, CurveBasis::H);
    else if (config.command == "lyapunov")
      code = cmd_exponents(config, emit, CurveBasis::K);
    else if (config.command == "hatano")
      code = cmd_hatano(config, emit);
    else if (config.command == "dos")
      code = cmd_dos(config, emit);
    else if (config.command == "verify")
      code = cmd_verify(config, emit);
    else
      return report(kConfigError, "config", "unknown command '" + config.command + "'");
    emit.flush();
    if (code == kVerifyFailed) return report(code, "verify", "one or more verification checks failed");
    return code;
  } catch (const ConfigError& e) {
    return report(kConfigError, "config", e.what());
  } catch (const Error& e) {
    return report(kNumericalError, "numerical", e.what());
  } catch (const std::exception& e) {
    return report(kNumericalError, "internal", e.what());
  }
}

}  // namespace andersonspec::cli
