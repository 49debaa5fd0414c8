#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wpac/baselines.hpp"
#include "wpac/channel.hpp"
#include "wpac/config.hpp"
#include "wpac/sdr.hpp"

using namespace wpac;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

std::mt19937_64 test_rng(51877);

std::complex<double> crand() {
  std::normal_distribution<double> n;
  return {n(test_rng), n(test_rng)};
}

MatrixXcd random_matrix(int r, int c) {
  MatrixXcd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = crand();
  return m;
}

ChannelSet miso_channels(int K, int n) {
  ChannelSet ch;
  for (int k = 0; k < K; ++k) {
    ch.wpt.push_back(random_matrix(n, 1));
    ch.aircomp.push_back(random_matrix(n, 1));
  }
  return ch;
}

double beam_gain(const VectorXcd& f, const MatrixXcd& h) {
  return std::norm(f.dot(h.col(0)));
}

// Final-MSE functionals for the vector case, taken at their respective
// optimal (sum form) and equal (max form) power allocations.
double mse_optimal_powers(const ChannelSet& ch, const std::vector<double>& gamma,
                          double p0, const VectorXcd& f) {
  double s = 0.0;
  for (size_t k = 0; k < ch.aircomp.size(); ++k)
    s += 1.0 / (gamma[k] * ch.wpt[k].squaredNorm() * beam_gain(f, ch.aircomp[k]));
  return s / p0;
}

double mse_equal_powers(const ChannelSet& ch, const std::vector<double>& gamma,
                        double p0, const VectorXcd& f) {
  double worst = 0.0;
  for (size_t k = 0; k < ch.aircomp.size(); ++k) {
    double c = gamma[k] * ch.wpt[k].squaredNorm() * beam_gain(f, ch.aircomp[k]);
    worst = std::max(worst, 1.0 / c);
  }
  return worst * ch.aircomp.size() / p0;
}

}  // namespace

TEST_CASE("scheme names round trip") {
  for (SchemeId id : {SchemeId::kProposed, SchemeId::kAntennaSelection,
                      SchemeId::kEigenmode, SchemeId::kEqualPower,
                      SchemeId::kMaxSnr}) {
    auto back = parse_scheme(scheme_name(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK(scheme_name(SchemeId::kProposed) == "proposed");
  CHECK(scheme_name(SchemeId::kAntennaSelection) == "as");
  CHECK(scheme_name(SchemeId::kEigenmode) == "eb");
  CHECK(scheme_name(SchemeId::kEqualPower) == "epa");
  CHECK(scheme_name(SchemeId::kMaxSnr) == "maxsnr");
  CHECK(!parse_scheme("random").has_value());
  CHECK(!parse_scheme("").has_value());
  CHECK(!parse_scheme("Proposed").has_value());
}

TEST_CASE("channel sum is elementwise") {
  std::vector<MatrixXcd> H = {random_matrix(3, 2), random_matrix(3, 2),
                              random_matrix(3, 2)};
  MatrixXcd s = sum_channel(H);
  CHECK((s - (H[0] + H[1] + H[2])).norm() <= 1e-15);
}

TEST_CASE("antenna selection picks the strongest rows") {
  SUBCASE("single antenna out of two") {
    MatrixXcd h(2, 1);
    h << 5.0, 3.0;
    MatrixXcd f = antenna_selection_beamformer(h, 1);
    REQUIRE(f.rows() == 2);
    REQUIRE(f.cols() == 1);
    CHECK(std::abs(f(0, 0) - 1.0) <= 1e-15);
    CHECK(std::abs(f(1, 0)) <= 1e-15);
  }

  SUBCASE("ties break toward the lowest index") {
    MatrixXcd h(3, 1);
    h << std::complex<double>(0.0, 2.0), 2.0, 1.0;
    MatrixXcd f = antenna_selection_beamformer(h, 1);
    CHECK(std::abs(f(0, 0) - 1.0) <= 1e-15);
    CHECK(f.col(0).norm() == doctest::Approx(1.0));
  }

  SUBCASE("two antennas out of four, index-ordered columns") {
    MatrixXcd H(4, 2);
    H << 1.0, 0.0,
         0.0, 6.0,
         2.0, 2.0,
         0.1, 0.1;
    // row norms: 1, 6, 2*sqrt(2), ~0.14 -> antennas {1, 2}
    MatrixXcd F = antenna_selection_beamformer(H, 2);
    REQUIRE(F.rows() == 4);
    REQUIRE(F.cols() == 2);
    double inv = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(F(1, 0) - inv) <= 1e-15);
    CHECK(std::abs(F(2, 1) - inv) <= 1e-15);
    CHECK(F.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(F(0, 0)) + std::abs(F(3, 0)) <= 1e-15);
  }
}

TEST_CASE("eigenmode beamformer uses scaled dominant singular vectors") {
  SUBCASE("diagonal channel") {
    MatrixXcd H = MatrixXcd::Zero(2, 2);
    H(0, 0) = 3.0;
    H(1, 1) = 1.0;
    MatrixXcd f = eigenmode_beamformer(H, 1);
    CHECK(std::abs(f(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(f(1, 0)) <= 1e-12);
    MatrixXcd F = eigenmode_beamformer(H, 2);
    CHECK(F.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(F(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(F(1, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  SUBCASE("vector channel reduces to the matched filter") {
    MatrixXcd h = random_matrix(5, 1);
    MatrixXcd f = eigenmode_beamformer(h, 1);
    CHECK(f.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.col(0).dot(h.col(0))) ==
          doctest::Approx(h.norm()).epsilon(1e-12));
  }
}

TEST_CASE("equal power plan splits the budget") {
  std::vector<double> p = equal_power_plan(5, 1.0);
  REQUIRE(p.size() == 5);
  for (double v : p) CHECK(v == doctest::Approx(0.2).epsilon(1e-15));
  std::vector<double> q = equal_power_plan(3, 0.9);
  for (double v : q) CHECK(v == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("equal-power aggregation beamformer") {
  SolverSettings settings;

  SUBCASE("single sensor recovers the matched filter") {
    ChannelSet ch = miso_channels(1, 6);
    MatrixXcd f = epa_aggregation_beamformer(ch, {0.6}, 1.0, 1, 100, settings, 7);
    REQUIRE(f.cols() == 1);
    CHECK(f.col(0).norm() == doctest::Approx(1.0).epsilon(1e-9));
    double gain = beam_gain(f.col(0), ch.aircomp[0]);
    CHECK(gain == doctest::Approx(ch.aircomp[0].squaredNorm()).epsilon(1e-5));
  }

  SUBCASE("identical sensors make equal powers optimal") {
    // all sensors share one channel, so the max-form and sum-form costs agree
    // and both schemes land on the matched filter
    ChannelSet one = miso_channels(1, 5);
    ChannelSet ch;
    std::vector<double> gamma;
    for (int k = 0; k < 4; ++k) {
      ch.wpt.push_back(one.wpt[0]);
      ch.aircomp.push_back(one.aircomp[0]);
      gamma.push_back(0.5);
    }
    MatrixXcd f_epa =
        epa_aggregation_beamformer(ch, gamma, 1.0, 1, 100, settings, 3);
    LiftedSolution sol =
        solve_lifted(LiftedProblem::kMiso, ch, gamma, 1.0, 1, settings);
    VectorXcd f_prop = randomize_miso(
        sol, 100, {ch.aircomp[0], ch.aircomp[1], ch.aircomp[2], ch.aircomp[3]},
        {ch.wpt[0], ch.wpt[1], ch.wpt[2], ch.wpt[3]}, gamma, 1.0, 3);
    double mse_epa = mse_equal_powers(ch, gamma, 1.0, f_epa.col(0));
    double mse_prop = mse_optimal_powers(ch, gamma, 1.0, f_prop);
    CHECK(mse_epa == doctest::Approx(mse_prop).epsilon(1e-5));
  }

  SUBCASE("equal powers never beat optimized powers") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      ChannelSet ch = miso_channels(5, 8);
      std::vector<double> gamma;
      std::uniform_real_distribution<double> u(0.05, 0.95);
      for (int k = 0; k < 5; ++k) gamma.push_back(u(test_rng));
      MatrixXcd f_epa = epa_aggregation_beamformer(ch, gamma, 1.0, 1, 100,
                                                   settings, 100 + trial);
      LiftedSolution sol =
          solve_lifted(LiftedProblem::kMiso, ch, gamma, 1.0, 1, settings);
      std::vector<VectorXcd> h, g;
      for (int k = 0; k < 5; ++k) {
        h.push_back(ch.aircomp[k].col(0));
        g.push_back(ch.wpt[k].col(0));
      }
      VectorXcd f_prop =
          randomize_miso(sol, 100, h, g, gamma, 1.0, 100 + trial);
      double mse_epa = mse_equal_powers(ch, gamma, 1.0, f_epa.col(0));
      double mse_prop = mse_optimal_powers(ch, gamma, 1.0, f_prop);
      CHECK(mse_epa >= mse_prop * (1.0 - 1e-9));
    }
  }

  SUBCASE("matrix channels return a unit-norm L-column beamformer") {
    ChannelSet ch;
    for (int k = 0; k < 2; ++k) {
      ch.wpt.push_back(random_matrix(6, 2));
      ch.aircomp.push_back(random_matrix(6, 2));
    }
    MatrixXcd F =
        epa_aggregation_beamformer(ch, {0.5, 0.7}, 1.0, 2, 50, settings, 5);
    REQUIRE(F.rows() == 6);
    REQUIRE(F.cols() == 2);
    CHECK(F.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
    for (int k = 0; k < 2; ++k) {
      MatrixXcd M = F.adjoint() * ch.aircomp[k] * ch.aircomp[k].adjoint() * F;
      CHECK(std::abs(M.determinant()) > 0.0);  // supports both streams
    }
  }
}

TEST_CASE("max-SNR design is the exact corner optimum") {
  SUBCASE("single sensor") {
    ChannelSet ch = miso_channels(1, 4);
    MaxSnrDesign d = max_snr_design(ch, {0.8}, 2.0, 0.5);
    CHECK(d.selected == 0);
    REQUIRE(d.p.size() == 1);
    CHECK(d.p[0] == doctest::Approx(2.0));
    CHECK(d.f.norm() == doctest::Approx(1.0).epsilon(1e-12));
    double expect = 0.8 * ch.wpt[0].squaredNorm() *
                    ch.aircomp[0].squaredNorm() * 2.0 / 0.5;
    CHECK(d.rho == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("dominant sensor wins") {
    ChannelSet ch = miso_channels(2, 4);
    ch.wpt[1] *= 10.0;  // sensor 1 harvests 100x more
    MaxSnrDesign d = max_snr_design(ch, {0.5, 0.5}, 1.0, 1.0);
    CHECK(d.selected == 1);
    CHECK(d.p[0] == 0.0);
    CHECK(d.p[1] == doctest::Approx(1.0));
    CHECK(std::abs(d.f.dot(ch.aircomp[1].col(0))) ==
          doctest::Approx(ch.aircomp[1].norm()).epsilon(1e-12));
  }

  SUBCASE("no sampled beamformer and allocation does better") {
    ChannelSet ch = miso_channels(4, 5);
    std::vector<double> gamma = {0.3, 0.9, 0.6, 0.45};
    double p0 = 1.5, noise = 0.7;
    MaxSnrDesign d = max_snr_design(ch, gamma, p0, noise);
    std::exponential_distribution<double> e(1.0);
    for (int c = 0; c < 100000; ++c) {
      VectorXcd f = random_matrix(5, 1);
      f.normalize();
      double total = 0.0;
      std::vector<double> p(4);
      for (int k = 0; k < 4; ++k) {
        p[k] = e(test_rng);
        total += p[k];
      }
      double rho = 0.0;
      for (int k = 0; k < 4; ++k) {
        p[k] *= p0 / total;
        rho += gamma[k] * ch.wpt[k].squaredNorm() *
               beam_gain(f, ch.aircomp[k]) * p[k] / noise;
      }
      CHECK(rho <= d.rho * (1.0 + 1e-12));
    }
  }

  SUBCASE("matrix channels are rejected") {
    ChannelSet ch;
    ch.wpt.push_back(random_matrix(4, 2));
    ch.aircomp.push_back(random_matrix(4, 2));
    CHECK_THROWS_AS(max_snr_design(ch, {0.5}, 1.0, 1.0), ConfigError);
  }
}

TEST_CASE("power-gain gap: equalizing allocation never loses") {
  SUBCASE("one sensor leaves no gap") {
    ChannelSet ch = miso_channels(1, 4);
    VectorXcd f = random_matrix(4, 1);
    f.normalize();
    auto [sum_v, max_v] = max_to_sum_gap(ch, {0.7}, 1.0, f);
    CHECK(sum_v == doctest::Approx(max_v).epsilon(1e-12));
  }

  SUBCASE("generic channels open a strict gap") {
    for (int rep = 0; rep < 50; ++rep) {
      ChannelSet ch = miso_channels(5, 6);
      std::vector<double> gamma;
      std::uniform_real_distribution<double> u(0.05, 0.95);
      for (int k = 0; k < 5; ++k) gamma.push_back(u(test_rng));
      VectorXcd f = random_matrix(6, 1);
      f.normalize();
      auto [sum_v, max_v] = max_to_sum_gap(ch, gamma, 1.0, f);
      CHECK(sum_v <= max_v * (1.0 + 1e-12));
      CHECK(sum_v < max_v);  // ties have probability zero
      CHECK(sum_v > 0.0);
    }
  }
}
