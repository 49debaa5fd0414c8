#ifndef WPAC_CHANNEL_HPP
#define WPAC_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wpac/config.hpp"

namespace wpac {

// Per-sensor channel pair: downlink wireless-power channels G_k and uplink
// aggregation channels H_k, each n_ap x n_sn (column vectors in MISO mode).
struct ChannelSet {
  std::vector<Eigen::MatrixXcd> wpt;      // G_k
  std::vector<Eigen::MatrixXcd> aircomp;  // H_k
};

// Rician entries: mean rician_mean plus circularly symmetric complex Gaussian
// with total variance rician_var. Pure function of (config, seed).
ChannelSet sample_channels(const SystemConfig& config, std::uint64_t seed);

// K i.i.d. draws from U(0,1), strictly interior. If config.gamma is set the
// explicit values win and the seed is unused.
std::vector<double> sample_gammas(const SystemConfig& config, std::uint64_t seed);

}  // namespace wpac

#endif
