#ifndef WPAC_AIRCOMP_HPP
#define WPAC_AIRCOMP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "wpac/channel.hpp"
#include "wpac/wpt.hpp"

namespace wpac {

// Normalized aggregation beamformer F (tr FF^H = 1), denoising factor eta,
// and the full receive beamformer A = sqrt(eta) F.
struct AggregationSolution {
  Eigen::MatrixXcd f_norm;
  double eta = 0.0;
  Eigen::MatrixXcd a;
};

struct PrecoderSet {
  std::vector<Eigen::MatrixXcd> b;  // n_sn x L each, scalars in MISO
  // Per-sensor transmit power budget gamma_k |u_k^H G_k v_k|^2 P_k when the
  // set was built against a WptPlan; lets simulate_transmission guard the
  // power constraint. Empty means no guard.
  std::vector<double> budget;
};

struct MseReport {
  double mse_total = 0.0;
  double misalignment = 0.0;
  double noise_term = 0.0;
  double normalized = 0.0;  // mse_total / K
};

enum class NomographicKind {
  kArithmeticMean,
  kWeightedSum,
  kGeometricMean,
  kPolynomial,
  kEuclideanNorm,
};

struct NomographicSpec {
  NomographicKind kind = NomographicKind::kArithmeticMean;
  std::vector<double> weights;    // omega_k, weighted sum / polynomial
  std::vector<double> exponents;  // beta_k, polynomial
};

// Channel-inversion precoders b_k = 1/(a^H h_k).
PrecoderSet miso_precoders(const Eigen::VectorXcd& a,
                           const std::vector<Eigen::VectorXcd>& h);

// Zero-forcing precoders B_k = (A^H H_k)^H (A^H H_k H_k^H A)^-1.
PrecoderSet mimo_precoders(const Eigen::MatrixXcd& A,
                           const std::vector<Eigen::MatrixXcd>& H);

// eta = max_k tr((F^H H_k H_k^H F)^-1) / (gamma_k |u_k^H G_k v_k|^2 P_k).
// Sensors with zero allocated power make the constraint infeasible.
double denoising_factor(const Eigen::MatrixXcd& F,
                        const std::vector<Eigen::MatrixXcd>& H,
                        const std::vector<Eigen::MatrixXcd>& G,
                        const std::vector<double>& gamma, const WptPlan& plan);

// Misalignment sum_k tr((A^H H_k B_k - I)(.)^H) plus noise sigma_n^2 tr(A^H A).
MseReport compute_mse(const Eigen::MatrixXcd& A, const PrecoderSet& precoders,
                      const std::vector<Eigen::MatrixXcd>& H, double noise_var);

// One aggregation: s_hat = A^H sum_k H_k B_k s_k + A^H n. Noise draws are a
// pure function of noise_seed. Violating a precoder budget raises an error.
Eigen::VectorXcd simulate_transmission(const ChannelSet& channels,
                                       const Eigen::MatrixXcd& A,
                                       const PrecoderSet& precoders,
                                       const std::vector<Eigen::VectorXcd>& symbols,
                                       double noise_var, std::uint64_t noise_seed);

// Pre-process values, run one aggregation over the given (A, precoders) pair,
// post-process the real part of the received sum. With zero noise and
// zero-forcing precoders this reproduces the target function exactly.
double aircompute(const std::vector<double>& values, const NomographicSpec& spec,
                  const ChannelSet& channels, const Eigen::MatrixXcd& A,
                  const PrecoderSet& precoders, double noise_var,
                  std::uint64_t noise_seed);

// Reference evaluation of the nomographic function itself (no channel).
double nomographic_exact(const std::vector<double>& values,
                         const NomographicSpec& spec);

}  // namespace wpac

#endif
