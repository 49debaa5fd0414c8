#ifndef WPAC_WPT_HPP
#define WPAC_WPT_HPP

#include <Eigen/Dense>
#include <vector>

#include "wpac/channel.hpp"

namespace wpac {

// Energy transmit beams u_k (length n_ap), receive beams v_k (length n_sn,
// the scalar 1 in MISO mode) and the wireless power allocation.
struct WptPlan {
  std::vector<Eigen::VectorXcd> u;
  std::vector<Eigen::VectorXcd> v;
  std::vector<double> p;
};

struct HarvestReport {
  std::vector<double> q;               // harvested energy per sensor
  std::vector<double> effective_gain;  // gamma_k |u_k^H G_k v_k|^2
};

// Optimal energy beam for a vector channel: u = g/||g||.
Eigen::VectorXcd miso_energy_beam(const Eigen::VectorXcd& g);

// Dominant singular pair of G; |u^H G v|^2 = sigma_max^2. Phase is
// canonicalized (first nonzero component of u real positive) so repeated
// runs return identical vectors; the gain is phase invariant anyway.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> mimo_energy_beams(
    const Eigen::MatrixXcd& G);

// Equalizing allocation: P_k proportional to 1/e_k with
// e_k = gamma_k ||g_k||^2 |h_k^H f|^2, so all closed-loop products coincide
// and the budget p0 is spent exactly.
std::vector<double> miso_power_allocation(
    const std::vector<Eigen::VectorXcd>& h, const std::vector<Eigen::VectorXcd>& g,
    const Eigen::VectorXcd& f, const std::vector<double>& gamma, double p0);

// MIMO analog: equalizes gamma_k sigma_max^2(G_k) P_k / tr((F^H H_k H_k^H F)^-1).
std::vector<double> mimo_power_allocation(
    const std::vector<Eigen::MatrixXcd>& H, const std::vector<Eigen::MatrixXcd>& G,
    const Eigen::MatrixXcd& F, const std::vector<double>& gamma, double p0);

// Q = alpha |u^H G v|^2 P T.
double harvested_energy(const Eigen::VectorXcd& u, const Eigen::MatrixXcd& G,
                        const Eigen::VectorXcd& v, double P, double alpha, double T);

}  // namespace wpac

#endif
