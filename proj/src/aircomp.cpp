#include "wpac/aircomp.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "wpac/rng.hpp"

namespace wpac {

PrecoderSet miso_precoders(const Eigen::VectorXcd& a,
                           const std::vector<Eigen::VectorXcd>& h) {
  PrecoderSet set;
  set.b.reserve(h.size());
  for (size_t k = 0; k < h.size(); ++k) {
    std::complex<double> c = a.dot(h[k]);
    if (std::abs(c) == 0.0)
      throw SingularPrecoderError("sensor " + std::to_string(k) +
                                  ": beamformed channel is zero");
    Eigen::MatrixXcd b(1, 1);
    b(0, 0) = 1.0 / c;
    set.b.push_back(std::move(b));
  }
  return set;
}

PrecoderSet mimo_precoders(const Eigen::MatrixXcd& A,
                           const std::vector<Eigen::MatrixXcd>& H) {
  PrecoderSet set;
  set.b.reserve(H.size());
  const int L = static_cast<int>(A.cols());
  for (size_t k = 0; k < H.size(); ++k) {
    Eigen::MatrixXcd E = A.adjoint() * H[k];  // L x n_sn
    Eigen::MatrixXcd M = E * E.adjoint();     // L x L
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (lu.rank() < L)
      throw SingularPrecoderError("sensor " + std::to_string(k) +
                                  ": beamformed channel rank deficient");
    set.b.push_back(E.adjoint() * lu.inverse());
  }
  return set;
}

double denoising_factor(const Eigen::MatrixXcd& F,
                        const std::vector<Eigen::MatrixXcd>& H,
                        const std::vector<Eigen::MatrixXcd>& G,
                        const std::vector<double>& gamma, const WptPlan& plan) {
  const int L = static_cast<int>(F.cols());
  double eta = 0.0;
  for (size_t k = 0; k < H.size(); ++k) {
    Eigen::MatrixXcd M = F.adjoint() * H[k] * H[k].adjoint() * F;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (lu.rank() < L)
      throw SingularPrecoderError("sensor " + std::to_string(k) +
                                  ": beamformed channel rank deficient");
    double t = lu.inverse().trace().real();
    std::complex<double> gain = plan.u[k].dot(G[k] * plan.v[k]);
    double denom = gamma[k] * std::norm(gain) * plan.p[k];
    if (denom <= 0.0)
      throw InfeasibleError("sensor " + std::to_string(k) +
                            ": zero harvested power, denoising factor undefined");
    eta = std::max(eta, t / denom);
  }
  return eta;
}

MseReport compute_mse(const Eigen::MatrixXcd& A, const PrecoderSet& precoders,
                      const std::vector<Eigen::MatrixXcd>& H, double noise_var) {
  const int L = static_cast<int>(A.cols());
  MseReport r;
  for (size_t k = 0; k < H.size(); ++k) {
    Eigen::MatrixXcd resid =
        A.adjoint() * H[k] * precoders.b[k] - Eigen::MatrixXcd::Identity(L, L);
    r.misalignment += resid.squaredNorm();
  }
  r.noise_term = noise_var * A.squaredNorm();
  r.mse_total = r.misalignment + r.noise_term;
  r.normalized = r.mse_total / static_cast<double>(H.size());
  return r;
}

Eigen::VectorXcd simulate_transmission(const ChannelSet& channels,
                                       const Eigen::MatrixXcd& A,
                                       const PrecoderSet& precoders,
                                       const std::vector<Eigen::VectorXcd>& symbols,
                                       double noise_var, std::uint64_t noise_seed) {
  const int K = static_cast<int>(channels.aircomp.size());
  const int n_ap = static_cast<int>(A.rows());
  if (!precoders.budget.empty()) {
    for (int k = 0; k < K; ++k) {
      double pw = precoders.b[k].squaredNorm();
      if (pw > precoders.budget[k] + 1e-9)
        throw InfeasibleError("sensor " + std::to_string(k) +
                              ": precoder power " + std::to_string(pw) +
                              " exceeds harvested budget " +
                              std::to_string(precoders.budget[k]));
    }
  }
  Eigen::VectorXcd received = Eigen::VectorXcd::Zero(n_ap);
  for (int k = 0; k < K; ++k)
    received += channels.aircomp[k] * (precoders.b[k] * symbols[k]);
  Rng rng(derive_seed(noise_seed, 4));
  Eigen::VectorXcd n(n_ap);
  for (int i = 0; i < n_ap; ++i) n(i) = rng.cnormal(noise_var);
  return A.adjoint() * (received + n);
}

double nomographic_exact(const std::vector<double>& values,
                         const NomographicSpec& spec) {
  const size_t K = values.size();
  switch (spec.kind) {
    case NomographicKind::kArithmeticMean: {
      double s = 0;
      for (double v : values) s += v;
      return s / static_cast<double>(K);
    }
    case NomographicKind::kWeightedSum: {
      double s = 0;
      for (size_t k = 0; k < K; ++k) s += spec.weights[k] * values[k];
      return s;
    }
    case NomographicKind::kGeometricMean: {
      double p = 1;
      for (double v : values) {
        if (v <= 0.0) throw WpacError("geometric mean requires positive inputs");
        p *= v;
      }
      return std::pow(p, 1.0 / static_cast<double>(K));
    }
    case NomographicKind::kPolynomial: {
      double s = 0;
      for (size_t k = 0; k < K; ++k)
        s += spec.weights[k] * std::pow(values[k], spec.exponents[k]);
      return s;
    }
    case NomographicKind::kEuclideanNorm: {
      double s = 0;
      for (double v : values) s += v * v;
      return std::sqrt(s);
    }
  }
  throw WpacError("unreachable nomographic kind");
}

namespace {

double preprocess(double x, size_t k, const NomographicSpec& spec) {
  switch (spec.kind) {
    case NomographicKind::kArithmeticMean:
      return x;
    case NomographicKind::kWeightedSum:
      return spec.weights[k] * x;
    case NomographicKind::kGeometricMean:
      if (x <= 0.0) throw WpacError("geometric mean requires positive inputs");
      return std::log(x);
    case NomographicKind::kPolynomial:
      return spec.weights[k] * std::pow(x, spec.exponents[k]);
    case NomographicKind::kEuclideanNorm:
      return x * x;
  }
  throw WpacError("unreachable nomographic kind");
}

double postprocess(double y, size_t K, const NomographicSpec& spec) {
  switch (spec.kind) {
    case NomographicKind::kArithmeticMean:
      return y / static_cast<double>(K);
    case NomographicKind::kWeightedSum:
      return y;
    case NomographicKind::kGeometricMean:
      return std::exp(y / static_cast<double>(K));
    case NomographicKind::kPolynomial:
      return y;
    case NomographicKind::kEuclideanNorm:
      if (y < 0.0) y = 0.0;  // noise can push the sum slightly negative
      return std::sqrt(y);
  }
  throw WpacError("unreachable nomographic kind");
}

}  // namespace

double aircompute(const std::vector<double>& values, const NomographicSpec& spec,
                  const ChannelSet& channels, const Eigen::MatrixXcd& A,
                  const PrecoderSet& precoders, double noise_var,
                  std::uint64_t noise_seed) {
  const size_t K = values.size();
  if ((spec.kind == NomographicKind::kWeightedSum ||
       spec.kind == NomographicKind::kPolynomial) &&
      (spec.weights.size() != K ||
       (spec.kind == NomographicKind::kPolynomial && spec.exponents.size() != K)))
    throw ConfigError("nomographic parameters do not match the sensor count");
  // one computed function per aggregation; each sensor transmits its
  // preprocessed scalar on every stream
  const int L = static_cast<int>(A.cols());
  std::vector<Eigen::VectorXcd> symbols(K);
  for (size_t k = 0; k < K; ++k)
    symbols[k] = Eigen::VectorXcd::Constant(L, preprocess(values[k], k, spec));
  Eigen::VectorXcd received =
      simulate_transmission(channels, A, precoders, symbols, noise_var, noise_seed);
  return postprocess(received(0).real(), K, spec);
}

}  // namespace wpac
