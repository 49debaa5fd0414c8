#include "wpac/sdr.hpp"

#include "wpac/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wpac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shift theta solving sum_i mult_i clip(val_i - theta, 0, 1) = 1 by bisection;
// the left-hand side is continuous and nonincreasing in theta.
double capped_simplex_shift(const Eigen::VectorXd& vals,
                            const Eigen::VectorXd& mults) {
  double lo = vals.minCoeff() - 1.0;
  double hi = vals.maxCoeff();
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double sum = 0.0;
    for (int j = 0; j < vals.size(); ++j)
      sum += mults(j) * std::clamp(vals(j) - mid, 0.0, 1.0);
    (sum > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void canonicalize_vector(Eigen::VectorXcd& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

// Iterates of both lifted problems stay in the form Q X Q^H + s (I - Q Q^H):
// the descent directions add PSD mass inside span(Q) and the spectral
// projection shifts all eigenvalues uniformly, which keeps the orthogonal
// complement isotropic. Solving in (X, s) is exactly the full-space method.
struct ReducedState {
  Eigen::MatrixXcd Q;  // n_ap x r orthonormal columns spanning the channels
  Eigen::MatrixXcd X;  // r x r Hermitian block
  double s = 0.0;      // slack eigenvalue, multiplicity n_ap - r
  int n = 0;

  int r() const { return static_cast<int>(X.rows()); }
  int slack_mult() const { return n - r(); }

  Eigen::MatrixXcd materialize() const {
    Eigen::MatrixXcd f_hat = Q * X * Q.adjoint();
    if (slack_mult() > 0)
      f_hat += s * (Eigen::MatrixXcd::Identity(n, n) - Q * Q.adjoint());
    // exact Hermitian symmetry for downstream eigendecompositions
    return 0.5 * (f_hat + f_hat.adjoint());
  }

  std::vector<double> spectrum() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X);
    std::vector<double> ev(es.eigenvalues().data(),
                           es.eigenvalues().data() + r());
    ev.insert(ev.end(), slack_mult(), s);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
  }
};

// Projects (X - step, s) onto the density set in the reduced representation.
void project_reduced(ReducedState& st, const Eigen::MatrixXcd& descent_target) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(descent_target);
  const int r = st.r();
  const int m = st.slack_mult();
  Eigen::VectorXd vals(r + (m > 0 ? 1 : 0));
  Eigen::VectorXd mults(vals.size());
  vals.head(r) = es.eigenvalues();
  mults.head(r).setOnes();
  if (m > 0) {
    vals(r) = st.s;
    mults(r) = m;
  }
  double theta = capped_simplex_shift(vals, mults);
  Eigen::VectorXd lam(r);
  for (int i = 0; i < r; ++i)
    lam(i) = std::clamp(es.eigenvalues()(i) - theta, 0.0, 1.0);
  st.X = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  if (m > 0) st.s = std::clamp(st.s - theta, 0.0, 1.0);
}

Eigen::MatrixXcd channel_basis(const std::vector<Eigen::MatrixXcd>& H, int n) {
  int cols = 0;
  for (const auto& Hk : H) cols += static_cast<int>(Hk.cols());
  Eigen::MatrixXcd stack(n, cols);
  int at = 0;
  for (const auto& Hk : H) {
    stack.middleCols(at, Hk.cols()) = Hk;
    at += static_cast<int>(Hk.cols());
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(stack);
  int r = std::max<int>(1, static_cast<int>(qr.rank()));
  Eigen::MatrixXcd Qfull =
      qr.householderQ() * Eigen::MatrixXcd::Identity(n, std::min(n, cols));
  return Qfull.leftCols(r);
}

struct MisoObjective {
  std::vector<Eigen::VectorXcd> ht;  // reduced channels Q^H h_k
  std::vector<double> c;             // gamma_k ||g_k||^2 p0

  double eval(const Eigen::MatrixXcd& X, Eigen::MatrixXcd* grad) const {
    if (grad) grad->setZero(X.rows(), X.cols());
    double total = 0.0;
    for (size_t k = 0; k < ht.size(); ++k) {
      double tau = std::real(ht[k].dot(X * ht[k]));
      if (tau <= 0.0) return kInf;
      total += 1.0 / (c[k] * tau);
      if (grad) grad->noalias() -= (1.0 / (c[k] * tau * tau)) *
                                   (ht[k] * ht[k].adjoint());
    }
    return total;
  }
};

struct MimoObjective {
  std::vector<Eigen::MatrixXcd> Ht;  // reduced channels Q^H H_k
  std::vector<double> c;             // gamma_k sigma_max^2(G_k) p0
  int L = 1;

  double eval(const Eigen::MatrixXcd& X, Eigen::MatrixXcd* subgrad) const {
    if (subgrad) subgrad->setZero(X.rows(), X.cols());
    double total = 0.0;
    for (size_t k = 0; k < Ht.size(); ++k) {
      Eigen::MatrixXcd M = Ht[k].adjoint() * X * Ht[k];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          0.5 * (M + M.adjoint()));
      double lmin = es.eigenvalues()(0);
      if (lmin <= 0.0) return kInf;
      total += static_cast<double>(L) / (c[k] * lmin);
      if (subgrad) {
        // eigensolver ordering provides the deterministic tie-break
        Eigen::VectorXcd w = es.eigenvectors().col(0);
        Eigen::VectorXcd hw = Ht[k] * w;
        subgrad->noalias() -=
            (static_cast<double>(L) / (c[k] * lmin * lmin)) * (hw * hw.adjoint());
      }
    }
    return total;
  }
};

double fro_norm_delta(const ReducedState& a, const Eigen::MatrixXcd& Xb,
                      double sb) {
  double d2 = (a.X - Xb).squaredNorm() +
              a.slack_mult() * (a.s - sb) * (a.s - sb);
  return std::sqrt(d2);
}

}  // namespace

double p10_objective(const Eigen::MatrixXcd& f_hat,
                     const std::vector<Eigen::VectorXcd>& h,
                     const std::vector<Eigen::VectorXcd>& g,
                     const std::vector<double>& gamma, double p0,
                     Eigen::MatrixXcd* grad) {
  if (grad) grad->setZero(f_hat.rows(), f_hat.cols());
  double total = 0.0;
  for (size_t k = 0; k < h.size(); ++k) {
    double tau = std::real(h[k].dot(f_hat * h[k]));
    double ck = gamma[k] * g[k].squaredNorm() * p0;
    if (tau <= 0.0 || ck <= 0.0)
      throw InfeasibleError("sensor " + std::to_string(k) +
                            ": nonpositive beamformed gain in lifted objective");
    total += 1.0 / (ck * tau);
    if (grad)
      grad->noalias() -= (1.0 / (ck * tau * tau)) * (h[k] * h[k].adjoint());
  }
  return total;
}

double p19_objective(const Eigen::MatrixXcd& f_hat,
                     const std::vector<Eigen::MatrixXcd>& H,
                     const std::vector<Eigen::MatrixXcd>& G,
                     const std::vector<double>& gamma, double p0, int L,
                     Eigen::MatrixXcd* subgrad) {
  if (subgrad) subgrad->setZero(f_hat.rows(), f_hat.cols());
  double total = 0.0;
  for (size_t k = 0; k < H.size(); ++k) {
    Eigen::MatrixXcd M = H[k].adjoint() * f_hat * H[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()));
    double lmin = es.eigenvalues()(0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G[k]);
    double s2 = svd.singularValues()(0) * svd.singularValues()(0);
    double ck = gamma[k] * s2 * p0;
    if (lmin <= 0.0)
      throw InfeasibleError("sensor " + std::to_string(k) +
                            ": beamformed channel loses a stream (lambda_min <= 0)");
    total += static_cast<double>(L) / (ck * lmin);
    if (subgrad) {
      Eigen::VectorXcd w = es.eigenvectors().col(0);
      Eigen::VectorXcd hw = H[k] * w;
      subgrad->noalias() -=
          (static_cast<double>(L) / (ck * lmin * lmin)) * (hw * hw.adjoint());
    }
  }
  return total;
}

Eigen::MatrixXcd project_density(const Eigen::MatrixXcd& X) {
  double asym = (X - X.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-8)
    throw WpacError("project_density input asymmetry " + std::to_string(asym) +
                    " exceeds 1e-8");
  if (asym > 1e-12)
    std::fprintf(stderr,
                 "wpac: project_density symmetrizing input (asymmetry %.3e)\n",
                 asym);
  Eigen::MatrixXcd sym = 0.5 * (X + X.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  Eigen::VectorXd vals = es.eigenvalues();
  double theta = capped_simplex_shift(vals, Eigen::VectorXd::Ones(vals.size()));
  Eigen::VectorXd lam(vals.size());
  for (int i = 0; i < vals.size(); ++i)
    lam(i) = std::clamp(vals(i) - theta, 0.0, 1.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

LiftedSolution solve_lifted(LiftedProblem problem, const ChannelSet& channels,
                            const std::vector<double>& gamma, double p0, int L,
                            const SolverSettings& settings,
                            const LiftedObserver& observer) {
  settings.validate();
  const int n = static_cast<int>(channels.aircomp.at(0).rows());
  const int K = static_cast<int>(channels.aircomp.size());

  ReducedState st;
  st.n = n;
  st.Q = channel_basis(channels.aircomp, n);
  const int r = static_cast<int>(st.Q.cols());
  st.X = Eigen::MatrixXcd::Identity(r, r) / static_cast<double>(n);
  st.s = 1.0 / static_cast<double>(n);

  MisoObjective miso;
  MimoObjective mimo;
  std::function<double(const Eigen::MatrixXcd&, Eigen::MatrixXcd*)> eval;
  if (problem == LiftedProblem::kMiso) {
    for (int k = 0; k < K; ++k) {
      miso.ht.push_back(st.Q.adjoint() * channels.aircomp[k].col(0));
      miso.c.push_back(gamma[k] * channels.wpt[k].squaredNorm() * p0);
    }
    eval = [&miso](const Eigen::MatrixXcd& X, Eigen::MatrixXcd* g) {
      return miso.eval(X, g);
    };
  } else {
    mimo.L = L;
    for (int k = 0; k < K; ++k) {
      mimo.Ht.push_back(st.Q.adjoint() * channels.aircomp[k]);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channels.wpt[k]);
      double s2 = svd.singularValues()(0) * svd.singularValues()(0);
      mimo.c.push_back(gamma[k] * s2 * p0);
    }
    eval = [&mimo](const Eigen::MatrixXcd& X, Eigen::MatrixXcd* g) {
      return mimo.eval(X, g);
    };
  }

  Eigen::MatrixXcd grad(r, r);
  double f = eval(st.X, &grad);
  if (!std::isfinite(f))
    throw InfeasibleError("interior start infeasible; channels degenerate");

  LiftedSolution best;
  best.objective = f;
  Eigen::MatrixXcd best_X = st.X;
  double best_s = st.s;

  const bool smooth = (problem == LiftedProblem::kMiso);
  double alpha = settings.step_size_init;
  int it = 0;
  bool converged = false;

  auto notify = [&](double step_metric) {
    if (!observer) return;
    Eigen::MatrixXcd fh = st.materialize();
    observer(LiftedIterate{it, fh, f, best.objective, step_metric});
  };

  while (it < settings.max_iters) {
    ++it;
    if (smooth) {
      // Armijo backtracking on the projected step; monotone by construction.
      bool accepted = false;
      ReducedState trial = st;
      double f_trial = f, delta = 0.0;
      while (alpha > 1e-18) {
        trial = st;
        project_reduced(trial, st.X - alpha * grad);
        f_trial = eval(trial.X, nullptr);
        delta = fro_norm_delta(st, trial.X, trial.s);
        if (std::isfinite(f_trial) &&
            f_trial <= f - 1e-4 * delta * delta / alpha) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {  // no descent step at machine precision: stationary
        converged = true;
        break;
      }
      double pg = delta / alpha;
      double rel = (f - f_trial) / std::max(std::abs(f), 1e-300);
      st = trial;
      f = f_trial;
      eval(st.X, &grad);
      best.objective = f;
      best_X = st.X;
      best_s = st.s;
      alpha = std::min(alpha * 1.5, 1e6);
      notify(pg);
      if (pg < settings.tol_projected_grad || rel < settings.tol_objective) {
        converged = true;
        break;
      }
    } else {
      // Diminishing-step normalized subgradient with best-iterate tracking.
      // The objective blows up where a beamformed channel loses a stream, so
      // halve any step whose projected point leaves the objective's domain.
      double gnorm = grad.norm();
      if (gnorm == 0.0) {
        converged = true;
        break;
      }
      double step = settings.step_size_init / std::sqrt(static_cast<double>(it));
      ReducedState next = st;
      double f_next = kInf;
      for (int halving = 0; halving < 60 && !std::isfinite(f_next); ++halving) {
        next = st;
        project_reduced(next, st.X - (step / gnorm) * grad);
        f_next = eval(next.X, nullptr);
        step *= 0.5;
      }
      if (!std::isfinite(f_next)) {  // pinned against the domain boundary
        converged = true;
        break;
      }
      double moved = fro_norm_delta(st, next.X, next.s);
      st = next;
      f = eval(st.X, &grad);
      if (f < best.objective) {
        best.objective = f;
        best_X = st.X;
        best_s = st.s;
      }
      notify(moved);
      if (moved < settings.tol_projected_grad) {
        converged = true;
        break;
      }
    }
  }

  st.X = best_X;
  st.s = best_s;
  LiftedSolution sol;
  sol.objective = best.objective;
  sol.f_hat = st.materialize();
  sol.eigenvalues = st.spectrum();
  sol.iterations = it;
  sol.converged = converged;
  double l1 = sol.eigenvalues.empty() ? 0.0 : sol.eigenvalues.front();
  double l2 = sol.eigenvalues.size() > 1 ? sol.eigenvalues[1] : 0.0;
  sol.rank_one = l1 > 0.0 && (l2 / l1) < settings.rank_one_ratio_tol;
  return sol;
}

Eigen::VectorXcd randomize_miso(const LiftedSolution& lifted, int M,
                                const std::vector<Eigen::VectorXcd>& h,
                                const std::vector<Eigen::VectorXcd>& g,
                                const std::vector<double>& gamma, double p0,
                                std::uint64_t seed) {
  const int n = static_cast<int>(lifted.f_hat.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lifted.f_hat);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Eigen::VectorXd sq = lam.cwiseSqrt();

  auto objective = [&](const Eigen::VectorXcd& f) {
    double total = 0.0;
    for (size_t k = 0; k < h.size(); ++k) {
      double gain = std::norm(f.dot(h[k]));
      double ck = gamma[k] * g[k].squaredNorm() * p0;
      if (gain <= 0.0) return kInf;
      total += 1.0 / (ck * gain);
    }
    return total;
  };

  Eigen::VectorXcd best;
  double best_obj = kInf;
  if (lifted.rank_one) {
    Eigen::VectorXcd f0 = es.eigenvectors().col(n - 1);
    canonicalize_vector(f0);
    best = f0;
    best_obj = objective(f0);
  }
  Rng rng(derive_seed(seed, 5));
  for (int m = 0; m < M; ++m) {
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z(i) = rng.cnormal(1.0);
    Eigen::VectorXcd f = es.eigenvectors() * (sq.asDiagonal() * z);
    double norm = f.norm();
    if (norm < 1e-14) continue;
    f /= norm;
    double obj = objective(f);
    if (obj < best_obj) {
      best_obj = obj;
      best = f;
    }
  }
  if (!std::isfinite(best_obj) || best.size() == 0)
    throw RandomizationError(
        "no randomization candidate achieved a finite objective; increase "
        "m_samples");
  return best;
}

Eigen::MatrixXcd randomize_mimo(const LiftedSolution& lifted, int M,
                                const std::vector<Eigen::MatrixXcd>& H,
                                const std::vector<Eigen::MatrixXcd>& G,
                                const std::vector<double>& gamma, double p0,
                                int L, std::uint64_t seed) {
  const int n = static_cast<int>(lifted.f_hat.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(lifted.f_hat);
  Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();

  std::vector<double> c(H.size());
  for (size_t k = 0; k < H.size(); ++k) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G[k]);
    double s2 = svd.singularValues()(0) * svd.singularValues()(0);
    c[k] = gamma[k] * s2 * p0;
  }
  auto objective = [&](const Eigen::MatrixXcd& F) {
    double total = 0.0;
    for (size_t k = 0; k < H.size(); ++k) {
      Eigen::MatrixXcd M2 = F.adjoint() * H[k] * H[k].adjoint() * F;
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(M2);
      if (lu.rank() < L) return kInf;
      total += lu.inverse().trace().real() / c[k];
    }
    return total;
  };

  Rng rng(derive_seed(seed, 6));
  Eigen::MatrixXcd best;
  double best_obj = kInf;
  for (int m = 0; m < M; ++m) {
    Eigen::MatrixXcd Z(n, L);
    for (int j = 0; j < L; ++j)
      for (int i = 0; i < n; ++i) Z(i, j) = rng.cnormal(1.0);
    Eigen::MatrixXcd Y = es.eigenvectors() * (sq.asDiagonal() * Z);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Y, Eigen::ComputeThinU);
    Eigen::MatrixXcd F = svd.matrixU().leftCols(L) / std::sqrt(static_cast<double>(L));
    double obj = objective(F);
    if (obj < best_obj) {
      best_obj = obj;
      best = F;
    }
  }
  if (!std::isfinite(best_obj) || best.size() == 0)
    throw RandomizationError(
        "all randomization candidates were rank deficient; increase m_samples");
  return best;
}

RankOneStats rank_one_probability(const SystemConfig& config, int trials,
                                  std::uint64_t seed) {
  if (!config.miso())
    throw ConfigError("rank_one_probability requires the single-antenna mode");
  RankOneStats stats;
  for (int t = 0; t < trials; ++t) {
    ChannelSet ch = sample_channels(config, derive_seed(seed, 10, t));
    std::vector<double> gam = sample_gammas(config, derive_seed(seed, 11, t));
    LiftedSolution sol = solve_lifted(LiftedProblem::kMiso, ch, gam, config.p0,
                                      config.L, config.solver);
    if (sol.rank_one) stats.fraction += 1.0;
    double l1 = sol.eigenvalues[0];
    double l2 = sol.eigenvalues.size() > 1 ? sol.eigenvalues[1] : 0.0;
    stats.mean_ratio += l1 > 0 ? l2 / l1 : 0.0;
  }
  stats.fraction /= trials;
  stats.mean_ratio /= trials;
  return stats;
}

}  // namespace wpac
