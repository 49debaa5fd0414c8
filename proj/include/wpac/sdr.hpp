#ifndef WPAC_SDR_HPP
#define WPAC_SDR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "wpac/channel.hpp"
#include "wpac/config.hpp"

namespace wpac {

enum class LiftedProblem { kMiso, kMimo };  // p10_objective vs p19_objective

struct LiftedSolution {
  Eigen::MatrixXcd f_hat;            // Hermitian, trace one, PSD
  double objective = 0.0;
  std::vector<double> eigenvalues;   // sorted nonincreasing
  bool rank_one = false;             // lambda2/lambda1 < rank_one_ratio_tol
  int iterations = 0;
  bool converged = false;
};

// Sum over sensors of 1/(gamma_k tr(h_k h_k^H F_hat) ||g_k||^2 p0).
// grad, when non-null, receives the gradient.
double p10_objective(const Eigen::MatrixXcd& f_hat,
                     const std::vector<Eigen::VectorXcd>& h,
                     const std::vector<Eigen::VectorXcd>& g,
                     const std::vector<double>& gamma, double p0,
                     Eigen::MatrixXcd* grad = nullptr);

// Sum over sensors of L/(gamma_k sigma_max^2(G_k) lambda_min(H_k^H F_hat H_k) p0).
// subgrad, when non-null, receives a subgradient built from the minimum
// eigenvector (deterministic tie-break through the eigensolver ordering).
double p19_objective(const Eigen::MatrixXcd& f_hat,
                     const std::vector<Eigen::MatrixXcd>& H,
                     const std::vector<Eigen::MatrixXcd>& G,
                     const std::vector<double>& gamma, double p0, int L,
                     Eigen::MatrixXcd* subgrad = nullptr);

// Euclidean projection onto {trace one, 0 <= F_hat <= I}: eigendecompose and
// project the spectrum onto the capped simplex. Idempotent. Inputs that are
// Hermitian only up to 1e-8 are symmetrized; larger asymmetry is an error.
Eigen::MatrixXcd project_density(const Eigen::MatrixXcd& X);

// Per-iterate observer for diagnostics and the solver property tests.
// best_objective is nonincreasing for both problems; for the smooth MISO
// objective it equals the current objective (monotone line search).
struct LiftedIterate {
  int iteration;
  const Eigen::MatrixXcd& f_hat;
  double objective;
  double best_objective;
  double step_metric;  // projected-gradient norm (MISO) or movement (MIMO)
};
using LiftedObserver = std::function<void(const LiftedIterate&)>;

// First-order solver over the density-matrix set from F0 = I/n_ap.
// MISO: projected gradient with Armijo backtracking (monotone).
// MIMO: diminishing-step normalized projected subgradient, best iterate kept.
// Internally iterates on the span of the aggregation channels plus an
// isotropic slack eigenvalue; this reproduces the full-space iterate sequence
// exactly because the descent directions live in that span and the spectral
// projection preserves the split.
LiftedSolution solve_lifted(LiftedProblem problem, const ChannelSet& channels,
                            const std::vector<double>& gamma, double p0, int L,
                            const SolverSettings& settings,
                            const LiftedObserver& observer = nullptr);

// Gaussian randomization, vector case: candidates V Sigma^(1/2) z_m
// normalized, plus the dominant eigenvector when the solution is rank one;
// picks the candidate with the smallest unlifted objective.
Eigen::VectorXcd randomize_miso(const LiftedSolution& lifted, int M,
                                const std::vector<Eigen::VectorXcd>& h,
                                const std::vector<Eigen::VectorXcd>& g,
                                const std::vector<double>& gamma, double p0,
                                std::uint64_t seed);

// Matrix case: L dominant left singular vectors of V Sigma^(1/2) Z_m scaled
// by 1/sqrt(L); selection by the unlifted trace-inverse objective. Candidates
// that cannot support L streams are discarded.
Eigen::MatrixXcd randomize_mimo(const LiftedSolution& lifted, int M,
                                const std::vector<Eigen::MatrixXcd>& H,
                                const std::vector<Eigen::MatrixXcd>& G,
                                const std::vector<double>& gamma, double p0,
                                int L, std::uint64_t seed);

struct RankOneStats {
  double fraction = 0.0;
  double mean_ratio = 0.0;  // mean lambda2/lambda1 across trials
};

// Fraction of Monte-Carlo trials whose lifted solution is rank one.
RankOneStats rank_one_probability(const SystemConfig& config, int trials,
                                  std::uint64_t seed);

}  // namespace wpac

#endif
