#include "wpac/channel.hpp"

#include "wpac/rng.hpp"

namespace wpac {

namespace {

Eigen::MatrixXcd rician_matrix(int rows, int cols, double mean, double var, Rng& rng) {
  Eigen::MatrixXcd m(rows, cols);
  // column-major fill order is part of the determinism contract
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      m(r, c) = std::complex<double>(mean, 0.0) + rng.cnormal(var);
  return m;
}

}  // namespace

ChannelSet sample_channels(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  ChannelSet set;
  set.wpt.reserve(config.K);
  set.aircomp.reserve(config.K);
  for (int k = 0; k < config.K; ++k) {
    Rng rng_g(derive_seed(seed, 1, k));
    Rng rng_h(derive_seed(seed, 2, k));
    set.wpt.push_back(rician_matrix(config.n_ap, config.n_sn, config.rician_mean,
                                    config.rician_var, rng_g));
    set.aircomp.push_back(rician_matrix(config.n_ap, config.n_sn, config.rician_mean,
                                        config.rician_var, rng_h));
  }
  return set;
}

std::vector<double> sample_gammas(const SystemConfig& config, std::uint64_t seed) {
  if (!config.gamma.empty()) return config.gamma;
  Rng rng(derive_seed(seed, 3));
  std::vector<double> g(config.K);
  for (double& v : g) v = rng.uniform_open();
  return g;
}

}  // namespace wpac
