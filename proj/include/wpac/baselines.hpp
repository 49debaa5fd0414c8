#ifndef WPAC_BASELINES_HPP
#define WPAC_BASELINES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpac/channel.hpp"
#include "wpac/config.hpp"

namespace wpac {

enum class SchemeId { kProposed, kAntennaSelection, kEigenmode, kEqualPower, kMaxSnr };

std::string scheme_name(SchemeId id);                 // proposed|as|eb|epa|maxsnr
std::optional<SchemeId> parse_scheme(const std::string& name);

Eigen::MatrixXcd sum_channel(const std::vector<Eigen::MatrixXcd>& H);

// Columns are scaled standard-basis vectors for the L largest row norms of
// H_sum (entries 1/sqrt(L)); ties break toward the lowest antenna index.
Eigen::MatrixXcd antenna_selection_beamformer(const Eigen::MatrixXcd& H_sum, int L);

// L dominant left singular vectors of H_sum scaled by 1/sqrt(L).
Eigen::MatrixXcd eigenmode_beamformer(const Eigen::MatrixXcd& H_sum, int L);

std::vector<double> equal_power_plan(int K, double p0);

// Aggregation beamformer under fixed equal powers: lifted max-min problem
// solved by projected supergradient plus the same Gaussian randomization as
// the proposed scheme.
Eigen::MatrixXcd epa_aggregation_beamformer(const ChannelSet& channels,
                                            const std::vector<double>& gamma,
                                            double p0, int L, int m_samples,
                                            const SolverSettings& settings,
                                            std::uint64_t seed);

struct MaxSnrDesign {
  Eigen::VectorXcd f;
  std::vector<double> p;  // a simplex vertex: all power on one sensor
  int selected = 0;
  double rho = 0.0;       // achieved receive SNR
};

// Exact corner maximizer of the receive-SNR objective (vector channels only):
// all power to argmax_k gamma_k ||g_k||^2 ||h_k||^2, f aligned to that h_k.
MaxSnrDesign max_snr_design(const ChannelSet& channels,
                            const std::vector<double>& gamma, double p0,
                            double noise_var);

// Both sides of the power-control gain inequality: the equalizing allocation
// cost sum_k 1/e_k never exceeds the equal-power cost K * max_k 1/e_k.
// Returned as (sum_value, max_value); sum_value <= max_value always.
std::pair<double, double> max_to_sum_gap(const ChannelSet& channels,
                                         const std::vector<double>& gamma,
                                         double p0, const Eigen::VectorXcd& f);

}  // namespace wpac

#endif
