#include "wpac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wpac {

using nlohmann::json;

void SolverSettings::validate() const {
  if (max_iters < 1) throw ConfigError("solver.max_iters must be >= 1");
  if (step_size_init <= 0) throw ConfigError("solver.step_size_init must be positive");
  if (tol_objective <= 0) throw ConfigError("solver.tol_objective must be positive");
  if (tol_projected_grad <= 0)
    throw ConfigError("solver.tol_projected_grad must be positive");
  if (rank_one_ratio_tol <= 0)
    throw ConfigError("solver.rank_one_ratio_tol must be positive");
}

void SystemConfig::validate() const {
  if (K < 1) throw ConfigError("K must be >= 1");
  if (n_ap < 1) throw ConfigError("n_ap must be >= 1");
  if (n_sn < 1) throw ConfigError("n_sn must be >= 1");
  if (L < 1 || L > n_sn) throw ConfigError("L must satisfy 1 <= L <= n_sn");
  // single-antenna sensors compute exactly one function and vice versa
  if ((n_sn == 1) != (L == 1))
    throw ConfigError("mode invariant violated: n_sn == 1 must coincide with L == 1");
  if (p0 <= 0) throw ConfigError("p0 must be positive");
  if (noise_var <= 0) throw ConfigError("noise_var must be positive");
  if (!gamma.empty()) {
    if (static_cast<int>(gamma.size()) != K)
      throw ConfigError("gamma list length must equal K");
    for (double g : gamma)
      if (!(g > 0.0 && g < 1.0))
        throw ConfigError("each gamma must lie strictly inside (0,1)");
  }
  if (rician_var < 0) throw ConfigError("rician_var must be nonnegative");
  if (m_samples < 1) throw ConfigError("m_samples must be >= 1");
  solver.validate();
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
}

}  // namespace

SystemConfig SystemConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown_keys(j, {"K", "n_ap", "n_sn", "L", "p0", "noise_var", "gamma",
                          "rician_mean", "rician_var", "m_samples", "solver"},
                      "config");

  SystemConfig c;
  try {
    c.K = j.value("K", c.K);
    c.n_sn = j.value("n_sn", c.n_sn);
    // mode-dependent defaults: 20 antennas / 1 function for single-antenna
    // sensors, 30 / n_sn otherwise
    c.L = j.value("L", c.n_sn == 1 ? 1 : c.n_sn);
    c.n_ap = j.value("n_ap", c.n_sn == 1 ? 20 : 30);
    c.p0 = j.value("p0", c.p0);
    c.noise_var = j.value("noise_var", c.noise_var);
    if (j.contains("gamma")) c.gamma = j.at("gamma").get<std::vector<double>>();
    c.rician_mean = j.value("rician_mean", c.rician_mean);
    c.rician_var = j.value("rician_var", c.rician_var);
    c.m_samples = j.value("m_samples", c.m_samples);
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      if (!s.is_object()) throw ConfigError("solver must be a JSON object");
      reject_unknown_keys(s, {"max_iters", "step_size_init", "tol_objective",
                              "tol_projected_grad", "rank_one_ratio_tol"},
                          "solver");
      c.solver.max_iters = s.value("max_iters", c.solver.max_iters);
      c.solver.step_size_init = s.value("step_size_init", c.solver.step_size_init);
      c.solver.tol_objective = s.value("tol_objective", c.solver.tol_objective);
      c.solver.tol_projected_grad =
          s.value("tol_projected_grad", c.solver.tol_projected_grad);
      c.solver.rank_one_ratio_tol =
          s.value("rank_one_ratio_tol", c.solver.rank_one_ratio_tol);
    }
  } catch (const json::type_error& e) {
    throw ConfigError(std::string("config field has wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

SystemConfig SystemConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string SystemConfig::to_json_text() const {
  json j;
  j["K"] = K;
  j["n_ap"] = n_ap;
  j["n_sn"] = n_sn;
  j["L"] = L;
  j["p0"] = p0;
  j["noise_var"] = noise_var;
  if (!gamma.empty()) j["gamma"] = gamma;
  j["rician_mean"] = rician_mean;
  j["rician_var"] = rician_var;
  j["m_samples"] = m_samples;
  j["solver"] = {{"max_iters", solver.max_iters},
                 {"step_size_init", solver.step_size_init},
                 {"tol_objective", solver.tol_objective},
                 {"tol_projected_grad", solver.tol_projected_grad},
                 {"rank_one_ratio_tol", solver.rank_one_ratio_tol}};
  return j.dump(2);
}

}  // namespace wpac
