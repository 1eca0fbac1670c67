#include "cellscale/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "cellscale/errors.hpp"

namespace cellscale {

namespace {

using nlohmann::json;

// Reads `key` into `out` if present; a wrong type becomes a ValidationError.
template <typename T>
void read(const json& section, const char* key, T& out, const std::string& where) {
  const auto it = section.find(key);
  if (it == section.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: " + where + "." + key + " has the wrong type");
  }
}

void reject_unknown(const json& section, const std::set<std::string>& known, const std::string& where) {
  if (!section.is_object()) throw ValidationError("config: " + where + " must be an object");
  for (const auto& [key, _] : section.items()) {
    if (!known.contains(key)) throw ValidationError("config: unknown key " + where + "." + key);
  }
}

const json& section_or_empty(const json& doc, const char* name) {
  static const json empty = json::object();
  const auto it = doc.find(name);
  return it == doc.end() ? empty : *it;
}

}  // namespace

void Config::apply_seeds() { sweep.seeds = seed_range(seed_base, seed_count); }

Config default_config() {
  Config cfg;
  cfg.exponents.psi = 2.0;
  cfg.exponents.beta = 0.5;
  // Thermal noise well above the unit base-station power puts the ISH power
  // knee near psi = 1; relays 5000x stronger than a base station lift the IMH
  // first-hop knee to psi = 2.
  cfg.exponents.N0 = 10.0;
  cfg.exponents.P = 5000.0;
  cfg.apply_seeds();
  return cfg;
}

Config parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("config: not valid JSON: ") + err.what());
  }
  reject_unknown(doc, {"exponents", "constants", "rate_law", "sweep", "output"}, "<root>");

  Config cfg = default_config();
  auto& e = cfg.exponents;

  const json& ex = section_or_empty(doc, "exponents");
  reject_unknown(ex, {"psi", "nu", "beta", "gamma", "alpha"}, "exponents");
  read(ex, "psi", e.psi, "exponents");
  read(ex, "nu", e.nu, "exponents");
  read(ex, "beta", e.beta, "exponents");
  read(ex, "gamma", e.gamma, "exponents");
  read(ex, "alpha", e.alpha, "exponents");

  const json& k = section_or_empty(doc, "constants");
  reject_unknown(k, {"W0", "A0", "m0", "l0", "P", "P_BS", "N0"}, "constants");
  read(k, "W0", e.W0, "constants");
  read(k, "A0", e.A0, "constants");
  read(k, "m0", e.m0, "constants");
  read(k, "l0", e.l0, "constants");
  read(k, "P", e.P, "constants");
  read(k, "P_BS", e.P_BS, "constants");
  read(k, "N0", e.N0, "constants");
  validate(e);

  const json& rl = section_or_empty(doc, "rate_law");
  reject_unknown(rl, {"kappa_dof", "kappa_pow"}, "rate_law");
  read(rl, "kappa_dof", cfg.rate_law.kappa_dof, "rate_law");
  read(rl, "kappa_pow", cfg.rate_law.kappa_pow, "rate_law");
  validate(cfg.rate_law);

  const json& sw = section_or_empty(doc, "sweep");
  reject_unknown(sw,
                 {"n_values", "seed_base", "seeds", "protocols", "c_occupancy", "infeasible_threshold", "metric",
                  "share_mode", "fit_fraction", "tolerance", "threads", "regime_grid", "simulate_n"},
                 "sweep");
  auto& s = cfg.sweep;
  read(sw, "n_values", s.n_values, "sweep");
  read(sw, "seed_base", cfg.seed_base, "sweep");
  read(sw, "seeds", cfg.seed_count, "sweep");
  read(sw, "c_occupancy", s.c_occupancy, "sweep");
  read(sw, "infeasible_threshold", s.infeasible_threshold, "sweep");
  read(sw, "fit_fraction", s.fit_fraction, "sweep");
  read(sw, "tolerance", s.tolerance, "sweep");
  read(sw, "threads", s.threads, "sweep");
  read(sw, "regime_grid", cfg.regime_grid, "sweep");
  read(sw, "simulate_n", cfg.simulate_n, "sweep");
  if (sw.contains("protocols")) {
    std::vector<std::string> names;
    read(sw, "protocols", names, "sweep");
    std::set<Protocol> set;
    for (const auto& name : names) set.insert(protocol_from_string(name));
    s.protocols.assign(set.begin(), set.end());
  }
  if (sw.contains("metric")) {
    std::string name;
    read(sw, "metric", name, "sweep");
    s.metric = metric_from_string(name);
  }
  if (sw.contains("share_mode")) {
    std::string name;
    read(sw, "share_mode", name, "sweep");
    if (name == "closed-form") {
      s.share_mode = ShareMode::ClosedForm;
    } else if (name == "per-realization") {
      s.share_mode = ShareMode::PerRealization;
    } else {
      throw ValidationError("config: sweep.share_mode must be closed-form or per-realization");
    }
  }
  if (!(s.c_occupancy > 1.0)) throw ValidationError("config: sweep.c_occupancy must be > 1");
  if (!(s.infeasible_threshold >= 0.0 && s.infeasible_threshold <= 1.0)) {
    throw ValidationError("config: sweep.infeasible_threshold must be in [0, 1]");
  }
  if (!(s.fit_fraction > 0.0 && s.fit_fraction <= 1.0)) throw ValidationError("config: sweep.fit_fraction must be in (0, 1]");
  if (!(s.tolerance >= 0.0)) throw ValidationError("config: sweep.tolerance must be >= 0");
  if (cfg.regime_grid.empty()) throw ValidationError("config: sweep.regime_grid must not be empty");
  cfg.apply_seeds();

  const json& out = section_or_empty(doc, "output");
  reject_unknown(out, {"dir", "dumps"}, "output");
  read(out, "dir", cfg.output.dir, "output");
  read(out, "dumps", cfg.output.dumps, "output");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const Config& cfg) {
  const auto& e = cfg.exponents;
  const auto& s = cfg.sweep;
  std::vector<std::string> protocols;
  for (const auto p : s.protocols) protocols.emplace_back(to_string(p));
  json doc;
  doc["exponents"] = {{"psi", e.psi}, {"nu", e.nu}, {"beta", e.beta}, {"gamma", e.gamma}, {"alpha", e.alpha}};
  doc["constants"] = {{"W0", e.W0}, {"A0", e.A0}, {"m0", e.m0}, {"l0", e.l0},
                      {"P", e.P},   {"P_BS", e.P_BS}, {"N0", e.N0}};
  doc["rate_law"] = {{"kappa_dof", cfg.rate_law.kappa_dof}, {"kappa_pow", cfg.rate_law.kappa_pow}};
  doc["sweep"] = {{"n_values", s.n_values},
                  {"seed_base", cfg.seed_base},
                  {"seeds", cfg.seed_count},
                  {"protocols", protocols},
                  {"c_occupancy", s.c_occupancy},
                  {"infeasible_threshold", s.infeasible_threshold},
                  {"metric", std::string(to_string(s.metric))},
                  {"share_mode", s.share_mode == ShareMode::ClosedForm ? "closed-form" : "per-realization"},
                  {"fit_fraction", s.fit_fraction},
                  {"tolerance", s.tolerance},
                  {"threads", s.threads},
                  {"regime_grid", cfg.regime_grid},
                  {"simulate_n", cfg.simulate_n}};
  doc["output"] = {{"dir", cfg.output.dir}, {"dumps", cfg.output.dumps}};
  return doc.dump(2);
}

}  // namespace cellscale
