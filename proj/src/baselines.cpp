#include "wpac/baselines.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wpac/rng.hpp"
#include "wpac/sdr.hpp"

namespace wpac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void canonicalize_column(Eigen::Ref<Eigen::VectorXcd> v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

}  // namespace

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::kProposed: return "proposed";
    case SchemeId::kAntennaSelection: return "as";
    case SchemeId::kEigenmode: return "eb";
    case SchemeId::kEqualPower: return "epa";
    case SchemeId::kMaxSnr: return "maxsnr";
  }
  return "?";
}

std::optional<SchemeId> parse_scheme(const std::string& name) {
  if (name == "proposed") return SchemeId::kProposed;
  if (name == "as") return SchemeId::kAntennaSelection;
  if (name == "eb") return SchemeId::kEigenmode;
  if (name == "epa") return SchemeId::kEqualPower;
  if (name == "maxsnr") return SchemeId::kMaxSnr;
  return std::nullopt;
}

Eigen::MatrixXcd sum_channel(const std::vector<Eigen::MatrixXcd>& H) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(H.at(0).rows(), H.at(0).cols());
  for (const auto& Hk : H) sum += Hk;
  return sum;
}

Eigen::MatrixXcd antenna_selection_beamformer(const Eigen::MatrixXcd& H_sum,
                                              int L) {
  const int n = static_cast<int>(H_sum.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::VectorXd norms = H_sum.rowwise().norm();
  // stable sort keeps the lowest antenna index on ties
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return norms(a) > norms(b); });
  idx.resize(L);
  std::sort(idx.begin(), idx.end());
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(n, L);
  for (int j = 0; j < L; ++j) F(idx[j], j) = 1.0 / std::sqrt(static_cast<double>(L));
  return F;
}

Eigen::MatrixXcd eigenmode_beamformer(const Eigen::MatrixXcd& H_sum, int L) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H_sum, Eigen::ComputeThinU);
  Eigen::MatrixXcd F = svd.matrixU().leftCols(L) / std::sqrt(static_cast<double>(L));
  for (int j = 0; j < L; ++j) canonicalize_column(F.col(j));
  return F;
}

std::vector<double> equal_power_plan(int K, double p0) {
  return std::vector<double>(K, p0 / static_cast<double>(K));
}

Eigen::MatrixXcd epa_aggregation_beamformer(const ChannelSet& channels,
                                            const std::vector<double>& gamma,
                                            double p0, int L, int m_samples,
                                            const SolverSettings& settings,
                                            std::uint64_t seed) {
  settings.validate();
  const int n = static_cast<int>(channels.aircomp.at(0).rows());
  const int K = static_cast<int>(channels.aircomp.size());
  const int n_sn = static_cast<int>(channels.aircomp.at(0).cols());
  const bool miso = (n_sn == 1);

  // effective-gain scale per sensor under equal powers p0/K
  std::vector<double> c(K);
  for (int k = 0; k < K; ++k) {
    if (miso) {
      c[k] = gamma[k] * channels.wpt[k].squaredNorm() * p0 / K;
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channels.wpt[k]);
      double s2 = svd.singularValues()(0) * svd.singularValues()(0);
      c[k] = gamma[k] * s2 * p0 / K;
    }
  }

  // Supergradient ascent on the concave map F_hat -> min_k q_k(F_hat), where
  // q_k is linear (vector channels) or a min-eigenvalue term (matrix channels).
  auto min_term = [&](const Eigen::MatrixXcd& F_hat, Eigen::MatrixXcd* super) {
    double worst = kInf;
    for (int k = 0; k < K; ++k) {
      double qk;
      Eigen::MatrixXcd dir;
      if (miso) {
        Eigen::VectorXcd h = channels.aircomp[k].col(0);
        qk = c[k] * std::real(h.dot(F_hat * h));
        if (super) dir = c[k] * (h * h.adjoint());
      } else {
        const Eigen::MatrixXcd& H = channels.aircomp[k];
        Eigen::MatrixXcd M = H.adjoint() * F_hat * H;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()));
        qk = c[k] * es.eigenvalues()(0);
        if (super) {
          Eigen::VectorXcd hw = H * es.eigenvectors().col(0);
          dir = c[k] * (hw * hw.adjoint());
        }
      }
      if (qk < worst) {
        worst = qk;
        if (super) *super = dir;
      }
    }
    return worst;
  };

  Eigen::MatrixXcd F_hat = Eigen::MatrixXcd::Identity(n, n) / n;
  Eigen::MatrixXcd best_F_hat = F_hat;
  double best_val = min_term(F_hat, nullptr);
  for (int t = 1; t <= settings.max_iters; ++t) {
    Eigen::MatrixXcd super(n, n);
    min_term(F_hat, &super);
    double gnorm = super.norm();
    if (gnorm == 0.0) break;
    double step = settings.step_size_init / std::sqrt(static_cast<double>(t));
    Eigen::MatrixXcd next = project_density(F_hat + (step / gnorm) * super);
    double moved = (next - F_hat).norm();
    F_hat = next;
    double val = min_term(F_hat, nullptr);
    if (val > best_val) {
      best_val = val;
      best_F_hat = F_hat;
    }
    if (moved < settings.tol_projected_grad) break;
  }

  // Gaussian randomization shaped by the relaxed solution; candidates are
  // scored by the equal-power min-max cost they actually achieve.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(best_F_hat);
  Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::VectorXd ev = es.eigenvalues();
  bool rank_one = ev(n - 1) > 0.0 &&
                  (n < 2 || ev(n - 2) / ev(n - 1) < settings.rank_one_ratio_tol);

  auto cost = [&](const Eigen::MatrixXcd& F) {
    double worst = 0.0;
    for (int k = 0; k < K; ++k) {
      if (miso) {
        Eigen::VectorXcd h = channels.aircomp[k].col(0);
        double gain = std::norm(F.col(0).dot(h));
        if (gain <= 0.0) return kInf;
        worst = std::max(worst, 1.0 / (c[k] * gain));
      } else {
        const Eigen::MatrixXcd& H = channels.aircomp[k];
        Eigen::MatrixXcd M = F.adjoint() * H * H.adjoint() * F;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
        if (lu.rank() < L) return kInf;
        worst = std::max(worst, lu.inverse().trace().real() / c[k]);
      }
    }
    return worst;
  };

  Eigen::MatrixXcd best;
  double best_cost = kInf;
  if (miso && rank_one) {
    Eigen::MatrixXcd F0 = es.eigenvectors().col(n - 1);
    canonicalize_column(F0.col(0));
    best = F0;
    best_cost = cost(F0);
  }
  Rng rng(derive_seed(seed, 7));
  for (int m = 0; m < m_samples; ++m) {
    Eigen::MatrixXcd Z(n, L);
    for (int j = 0; j < L; ++j)
      for (int i = 0; i < n; ++i) Z(i, j) = rng.cnormal(1.0);
    Eigen::MatrixXcd Y = es.eigenvectors() * (sq.asDiagonal() * Z);
    Eigen::MatrixXcd F;
    if (miso) {
      double norm = Y.col(0).norm();
      if (norm < 1e-14) continue;
      F = Y / norm;
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Y, Eigen::ComputeThinU);
      F = svd.matrixU().leftCols(L) / std::sqrt(static_cast<double>(L));
    }
    double cm = cost(F);
    if (cm < best_cost) {
      best_cost = cm;
      best = F;
    }
  }
  if (!std::isfinite(best_cost) || best.size() == 0)
    throw RandomizationError(
        "equal-power randomization produced no usable candidate; increase "
        "m_samples");
  return best;
}

MaxSnrDesign max_snr_design(const ChannelSet& channels,
                            const std::vector<double>& gamma, double p0,
                            double noise_var) {
  const int K = static_cast<int>(channels.aircomp.size());
  if (channels.aircomp.at(0).cols() != 1)
    throw ConfigError("max_snr_design requires single-antenna sensors");
  MaxSnrDesign out;
  double best = -1.0;
  for (int k = 0; k < K; ++k) {
    double score = gamma[k] * channels.wpt[k].squaredNorm() *
                   channels.aircomp[k].squaredNorm();
    if (score > best) {  // strict: ties keep the lowest index
      best = score;
      out.selected = k;
    }
  }
  Eigen::VectorXcd h = channels.aircomp[out.selected].col(0);
  double hn = h.norm();
  if (hn == 0.0)
    throw DegenerateChannelError("selected sensor has a zero uplink channel");
  out.f = h / hn;
  out.p.assign(K, 0.0);
  out.p[out.selected] = p0;
  out.rho = best * p0 / noise_var;
  return out;
}

std::pair<double, double> max_to_sum_gap(const ChannelSet& channels,
                                         const std::vector<double>& gamma,
                                         double p0,
                                         const Eigen::VectorXcd& f) {
  const int K = static_cast<int>(channels.aircomp.size());
  double sum = 0.0, worst = 0.0;
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXcd h = channels.aircomp[k].col(0);
    double e = gamma[k] * channels.wpt[k].squaredNorm() * std::norm(f.dot(h));
    if (e <= 0.0) throw DegenerateChannelError("zero effective gain in gap check");
    sum += 1.0 / (e * p0);
    worst = std::max(worst, static_cast<double>(K) / (e * p0));
  }
  if (sum > worst + 1e-12 * worst)
    throw WpacError("power-gain inequality violated; numerical fault");
  return {sum, worst};
}

}  // namespace wpac
