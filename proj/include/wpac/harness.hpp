#ifndef WPAC_HARNESS_HPP
#define WPAC_HARNESS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wpac/aircomp.hpp"
#include "wpac/baselines.hpp"
#include "wpac/config.hpp"

namespace wpac {

enum class SweepParameter { kP0, kNAp, kK };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kP0;
  std::vector<double> values;          // nonempty, ascending
  std::vector<SchemeId> schemes;
  int trials = 200;
  std::uint64_t base_seed = 0;
  // mode follows the config (n_sn == 1 selects the vector pipeline)
};

struct ResultRow {
  std::string param;
  double value = 0.0;
  SchemeId scheme = SchemeId::kProposed;
  int trials = 0;
  int failed = 0;
  double mean_nmse = 0.0;
  double std_nmse = 0.0;
  double mean_eta = 0.0;
  // Fraction of rank-one lifted solutions; only the proposed vector-mode
  // pipeline measures it, others carry NaN in the CSV.
  double rank1_frac = std::numeric_limits<double>::quiet_NaN();
};

struct TrialResult {
  bool ok = false;
  std::string failure_reason;
  MseReport mse;
  double eta = 0.0;
  bool rank_one = false;
  bool has_rank_flag = false;
};

// One Monte-Carlo trial: channels and gammas from the trial seed, then the
// scheme pipeline (beamformer, powers, energy beams, denoising factor,
// zero-forcing precoders, MSE). Every scheme at the same (config, base_seed,
// trial index) sees identical channels and gammas.
TrialResult run_trial(const SystemConfig& config, SchemeId scheme,
                      std::uint64_t base_seed, int trial_index);

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SystemConfig& config);

// Rank-one fraction per antenna count at the default operating point.
std::vector<ResultRow> reproduce_table2(const std::vector<int>& n_ap_values,
                                        int trials, std::uint64_t seed);

struct OracleReport {
  double solver_objective = 0.0;
  double search_objective = 0.0;
  double gap = 0.0;  // (solver - search) / search
  bool pass = false;
};

// Small-instance cross-check: lifted solve plus randomization against an
// exhaustive random search over unit vectors (1e5 candidates).
OracleReport oracle_check(const SystemConfig& config, std::uint64_t seed,
                          int search_candidates = 100000);

std::string to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace wpac

#endif
