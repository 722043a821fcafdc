#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vendor_json.hpp"

namespace andersonspec::cli {

struct Range {
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
};

struct ModelSection {
  std::vector<int> dims{3};
  double w = 0.0;
  std::string distribution = "uniform";  // or "cauchy"
  double delta = 1.0;
  std::vector<std::uint64_t> seeds{1};
};

struct BoundarySection {
  double xi = 0.0;
  double phi = 0.0;
  std::optional<Range> xi_range;
  std::optional<Range> phi_range;
};

struct EnergySection {
  double re = 0.0;
  double im = 0.0;
};

struct NumericsSection {
  int angles = 64;
  double tol = 1e-7;
  bool adaptive = true;
  double grid_step = 0.025;
  double xi_max = -1.0;  // < 0: model-dependent default
  int workers = 0;       // 0: ANDERSONSPEC_WORKERS or hardware
  std::int64_t total_length = 100000;
  int reorth_period = 8;
};

struct HatanoSection {
  std::vector<double> w_list;
  double xi = 1.0;
  bool wings = true;
  bool thouless = false;
  std::int64_t thouless_realizations = 100;
  bool xic = false;
  double xic_hi = 1.0;
};

struct VerifySection {
  int instances = 50;
  std::uint64_t master_seed = 20081013;
  bool corrupt_corner_sign = false;  // test fixture: forces the duality check to fail
};

struct DosSection {
  int bins = 200;
  std::int64_t realizations = 100;
  std::vector<double> energies;
};

struct OutputSection {
  std::string dir = "out";
  std::string format = "csv";  // or "json"
  int precision = 17;
};

struct ExperimentConfig {
  std::string command;
  ModelSection model;
  BoundarySection boundary;
  EnergySection energy;
  NumericsSection numerics;
  HatanoSection hatano;
  VerifySection verify;
  DosSection dos;
  OutputSection output;
};

/// Parses and validates a config document. Unknown keys anywhere are
/// rejected with ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Canonical JSON image of a resolved config; re-running from this document
/// reproduces the outputs byte for byte.
nlohmann::json resolved_json(const ExperimentConfig& config);

/// FNV-1a over the canonical dump.
std::uint64_t config_hash(const nlohmann::json& resolved);

}  // namespace andersonspec::cli
