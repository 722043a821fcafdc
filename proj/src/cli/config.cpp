#include "config.hpp"

#include <set>

#include "andersonspec/errors.hpp"

namespace andersonspec::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in config section '" + where + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) {
    try {
      target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

Range read_range(const json& obj, const std::string& where) {
  reject_unknown(obj, {"from", "to", "steps"}, where);
  Range range;
  read(obj, "from", range.from);
  read(obj, "to", range.to);
  read(obj, "steps", range.steps);
  if (range.steps < 2) throw ConfigError("'" + where + ".steps' must be >= 2");
  return range;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc, {"command", "model", "boundary", "energy", "numerics", "hatano", "verify", "dos", "output"},
                 "(top level)");
  ExperimentConfig config;
  read(doc, "command", config.command);

  if (doc.contains("model")) {
    const json& m = doc.at("model");
    reject_unknown(m, {"dims", "w", "distribution", "delta", "seeds", "seed"}, "model");
    read(m, "dims", config.model.dims);
    read(m, "w", config.model.w);
    read(m, "distribution", config.model.distribution);
    read(m, "delta", config.model.delta);
    if (m.contains("seeds")) read(m, "seeds", config.model.seeds);
    if (m.contains("seed")) {
      std::uint64_t seed = 0;
      read(m, "seed", seed);
      config.model.seeds = {seed};
    }
    if (config.model.dims.empty() || config.model.dims.size() > 3)
      throw ConfigError("model.dims must list 1 to 3 lattice lengths");
    for (int d : config.model.dims)
      if (d < 1) throw ConfigError("model.dims entries must be positive");
    if (config.model.distribution != "uniform" && config.model.distribution != "cauchy")
      throw ConfigError("model.distribution must be 'uniform' or 'cauchy'");
    if (config.model.w < 0.0) throw ConfigError("model.w must be nonnegative");
    if (config.model.seeds.empty()) throw ConfigError("model.seeds must not be empty");
  }

  if (doc.contains("boundary")) {
    const json& b = doc.at("boundary");
    reject_unknown(b, {"xi", "phi", "xi_range", "phi_range"}, "boundary");
    read(b, "xi", config.boundary.xi);
    read(b, "phi", config.boundary.phi);
    if (b.contains("xi_range")) config.boundary.xi_range = read_range(b.at("xi_range"), "boundary.xi_range");
    if (b.contains("phi_range")) config.boundary.phi_range = read_range(b.at("phi_range"), "boundary.phi_range");
  }

  if (doc.contains("energy")) {
    const json& e = doc.at("energy");
    reject_unknown(e, {"re", "im"}, "energy");
    read(e, "re", config.energy.re);
    read(e, "im", config.energy.im);
  }

  if (doc.contains("numerics")) {
    const json& n = doc.at("numerics");
    reject_unknown(n, {"angles", "tol", "adaptive", "grid_step", "xi_max", "workers", "total_length", "reorth_period"},
                   "numerics");
    read(n, "angles", config.numerics.angles);
    read(n, "tol", config.numerics.tol);
    read(n, "adaptive", config.numerics.adaptive);
    read(n, "grid_step", config.numerics.grid_step);
    read(n, "xi_max", config.numerics.xi_max);
    read(n, "workers", config.numerics.workers);
    read(n, "total_length", config.numerics.total_length);
    read(n, "reorth_period", config.numerics.reorth_period);
    if (config.numerics.angles < 8) throw ConfigError("numerics.angles must be >= 8");
    if (!(config.numerics.tol > 0.0)) throw ConfigError("numerics.tol must be positive");
    if (!(config.numerics.grid_step > 0.0)) throw ConfigError("numerics.grid_step must be positive");
  }

  if (doc.contains("hatano")) {
    const json& h = doc.at("hatano");
    reject_unknown(h, {"w_list", "xi", "wings", "thouless", "thouless_realizations", "xic", "xic_hi"}, "hatano");
    read(h, "w_list", config.hatano.w_list);
    read(h, "xi", config.hatano.xi);
    read(h, "wings", config.hatano.wings);
    read(h, "thouless", config.hatano.thouless);
    read(h, "thouless_realizations", config.hatano.thouless_realizations);
    read(h, "xic", config.hatano.xic);
    read(h, "xic_hi", config.hatano.xic_hi);
  }

  if (doc.contains("verify")) {
    const json& v = doc.at("verify");
    reject_unknown(v, {"instances", "master_seed", "corrupt_corner_sign"}, "verify");
    read(v, "instances", config.verify.instances);
    read(v, "master_seed", config.verify.master_seed);
    read(v, "corrupt_corner_sign", config.verify.corrupt_corner_sign);
    if (config.verify.instances < 1) throw ConfigError("verify.instances must be positive");
  }

  if (doc.contains("dos")) {
    const json& d = doc.at("dos");
    reject_unknown(d, {"bins", "realizations", "energies"}, "dos");
    read(d, "bins", config.dos.bins);
    read(d, "realizations", config.dos.realizations);
    read(d, "energies", config.dos.energies);
    if (config.dos.bins < 2) throw ConfigError("dos.bins must be >= 2");
    if (config.dos.realizations < 1) throw ConfigError("dos.realizations must be positive");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, {"dir", "format", "precision"}, "output");
    read(o, "dir", config.output.dir);
    read(o, "format", config.output.format);
    read(o, "precision", config.output.precision);
    if (config.output.format != "csv" && config.output.format != "json")
      throw ConfigError("output.format must be 'csv' or 'json'");
    if (config.output.precision < 1 || config.output.precision > 17)
      throw ConfigError("output.precision must be in [1, 17]");
  }

  return config;
}

nlohmann::json resolved_json(const ExperimentConfig& c) {
  json doc;
  doc["command"] = c.command;
  doc["model"] = {{"dims", c.model.dims},
                  {"w", c.model.w},
                  {"distribution", c.model.distribution},
                  {"delta", c.model.delta},
                  {"seeds", c.model.seeds}};
  json boundary = {{"xi", c.boundary.xi}, {"phi", c.boundary.phi}};
  if (c.boundary.xi_range)
    boundary["xi_range"] = {{"from", c.boundary.xi_range->from}, {"to", c.boundary.xi_range->to}, {"steps", c.boundary.xi_range->steps}};
  if (c.boundary.phi_range)
    boundary["phi_range"] = {{"from", c.boundary.phi_range->from}, {"to", c.boundary.phi_range->to}, {"steps", c.boundary.phi_range->steps}};
  doc["boundary"] = boundary;
  doc["energy"] = {{"re", c.energy.re}, {"im", c.energy.im}};
  doc["numerics"] = {{"angles", c.numerics.angles},
                     {"tol", c.numerics.tol},
                     {"adaptive", c.numerics.adaptive},
                     {"grid_step", c.numerics.grid_step},
                     {"xi_max", c.numerics.xi_max},
                     {"workers", c.numerics.workers},
                     {"total_length", c.numerics.total_length},
                     {"reorth_period", c.numerics.reorth_period}};
  doc["hatano"] = {{"w_list", c.hatano.w_list},
                   {"xi", c.hatano.xi},
                   {"wings", c.hatano.wings},
                   {"thouless", c.hatano.thouless},
                   {"thouless_realizations", c.hatano.thouless_realizations},
                   {"xic", c.hatano.xic},
                   {"xic_hi", c.hatano.xic_hi}};
  doc["verify"] = {{"instances", c.verify.instances},
                   {"master_seed", c.verify.master_seed},
                   {"corrupt_corner_sign", c.verify.corrupt_corner_sign}};
  doc["dos"] = {{"bins", c.dos.bins}, {"realizations", c.dos.realizations}, {"energies", c.dos.energies}};
  doc["output"] = {{"dir", c.output.dir}, {"format", c.output.format}, {"precision", c.output.precision}};
  return doc;
}

std::uint64_t config_hash(const nlohmann::json& resolved) {
  const std::string dump = resolved.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace andersonspec::cli
