#include "wpac/wpt.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace wpac {

namespace {

// Rotate the global phase so the first component above the noise floor is
// real positive; applied jointly to (u, v) so u^H G v is untouched.
void canonicalize_pair(Eigen::VectorXcd& u, Eigen::VectorXcd& v) {
  for (int i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-12) {
      std::complex<double> phase = std::conj(u(i)) / std::abs(u(i));
      u *= phase;
      v *= phase;
      return;
    }
  }
}

}  // namespace

Eigen::VectorXcd miso_energy_beam(const Eigen::VectorXcd& g) {
  double n = g.norm();
  if (n == 0.0) throw DegenerateChannelError("zero WPT channel vector");
  return g / n;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> mimo_energy_beams(
    const Eigen::MatrixXcd& G) {
  if (G.norm() == 0.0) throw DegenerateChannelError("zero WPT channel matrix");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXcd u = svd.matrixU().col(0);
  Eigen::VectorXcd v = svd.matrixV().col(0);
  canonicalize_pair(u, v);
  return {u, v};
}

std::vector<double> miso_power_allocation(
    const std::vector<Eigen::VectorXcd>& h, const std::vector<Eigen::VectorXcd>& g,
    const Eigen::VectorXcd& f, const std::vector<double>& gamma, double p0) {
  const int K = static_cast<int>(h.size());
  std::vector<double> inv(K);
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    double e = gamma[k] * g[k].squaredNorm() * std::norm(f.dot(h[k]));
    if (e <= 0.0)
      throw InfeasibleError("zero effective gain for sensor " + std::to_string(k) +
                            "; equalizing allocation infeasible");
    inv[k] = 1.0 / e;
    total += inv[k];
  }
  std::vector<double> p(K);
  for (int k = 0; k < K; ++k) p[k] = p0 * inv[k] / total;
  return p;
}

std::vector<double> mimo_power_allocation(
    const std::vector<Eigen::MatrixXcd>& H, const std::vector<Eigen::MatrixXcd>& G,
    const Eigen::MatrixXcd& F, const std::vector<double>& gamma, double p0) {
  const int K = static_cast<int>(H.size());
  std::vector<double> ratio(K);
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd M = F.adjoint() * H[k] * H[k].adjoint() * F;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (!lu.isInvertible())
      throw SingularPrecoderError("sensor " + std::to_string(k) +
                                  ": channel cannot support the stream count");
    double t = lu.inverse().trace().real();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G[k]);
    double s2 = svd.singularValues()(0) * svd.singularValues()(0);
    // equalized quantity is gamma_k s2 P_k / t, so P_k scales with t/(gamma s2)
    ratio[k] = t / (gamma[k] * s2);
    total += ratio[k];
  }
  std::vector<double> p(K);
  for (int k = 0; k < K; ++k) p[k] = p0 * ratio[k] / total;
  return p;
}

double harvested_energy(const Eigen::VectorXcd& u, const Eigen::MatrixXcd& G,
                        const Eigen::VectorXcd& v, double P, double alpha, double T) {
  std::complex<double> gain = u.dot(G * v);
  return alpha * std::norm(gain) * P * T;
}

}  // namespace wpac
