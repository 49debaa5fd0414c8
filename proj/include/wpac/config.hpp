#ifndef WPAC_CONFIG_HPP
#define WPAC_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace wpac {

// Base class for all recoverable failures raised by the library. The harness
// catches these per trial and records the reason instead of aborting a sweep.
class WpacError : public std::runtime_error {
 public:
  explicit WpacError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public WpacError {
 public:
  explicit ConfigError(const std::string& what) : WpacError(what) {}
};

class DegenerateChannelError : public WpacError {
 public:
  explicit DegenerateChannelError(const std::string& what) : WpacError(what) {}
};

// Zero effective gain makes the equalizing power allocation infeasible.
class InfeasibleError : public WpacError {
 public:
  explicit InfeasibleError(const std::string& what) : WpacError(what) {}
};

class SingularPrecoderError : public WpacError {
 public:
  explicit SingularPrecoderError(const std::string& what) : WpacError(what) {}
};

class RandomizationError : public WpacError {
 public:
  explicit RandomizationError(const std::string& what) : WpacError(what) {}
};

struct SolverSettings {
  int max_iters = 2000;
  double step_size_init = 1.0;
  double tol_objective = 1e-12;      // relative decrease per accepted step
  double tol_projected_grad = 1e-10;
  double rank_one_ratio_tol = 1e-6;  // lambda2/lambda1 below this counts as rank one

  void validate() const;
};

// All scalar parameters of an experiment. Field names double as the JSON
// schema; every field is optional in a config file and defaults to the
// simulation setup of the source system (K=5, p0=1, noise_var=1, Rician
// mean 1 variance 1; n_ap=20/n_sn=1/L=1 single-antenna sensors, or
// n_ap=30/n_sn=5/L=5 multiantenna).
struct SystemConfig {
  int K = 5;
  int n_ap = 20;
  int n_sn = 1;
  int L = 1;
  double p0 = 1.0;
  double noise_var = 1.0;
  std::vector<double> gamma;  // empty: sampled per trial from U(0,1)
  double rician_mean = 1.0;
  double rician_var = 1.0;
  int m_samples = 100;
  SolverSettings solver;

  bool miso() const { return n_sn == 1; }
  void validate() const;

  // Parses a JSON object; unknown keys are rejected so that typos fail loudly.
  // When n_ap or L is absent it takes the mode-dependent default above.
  static SystemConfig from_json_text(const std::string& text);
  static SystemConfig from_file(const std::string& path);
  std::string to_json_text() const;
};

}  // namespace wpac

#endif
