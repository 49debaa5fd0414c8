#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wpac/harness.hpp"
#include "wpac/rng.hpp"
#include "wpac/sdr.hpp"
#include "wpac/wpt.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 12345;
  int trials = -1;  // -1 keeps the subcommand default
  std::string schemes = "proposed,as,eb,epa";
};

void add_common(CLI::App* cmd, CommonOpts* opt) {
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--seed", opt->seed, "base seed");
  cmd->add_option("--out", opt->out_dir, "output directory");
  cmd->add_option("--trials", opt->trials, "Monte-Carlo trials");
  cmd->add_option("--schemes", opt->schemes,
                  "comma list of proposed|as|eb|epa|maxsnr");
}

wpac::SystemConfig load_config(const CommonOpts& opt) {
  if (opt.config_path.empty()) {
    wpac::SystemConfig c;
    c.validate();
    return c;
  }
  return wpac::SystemConfig::from_file(opt.config_path);
}

std::vector<wpac::SchemeId> parse_schemes(const std::string& csv) {
  std::vector<wpac::SchemeId> out;
  std::string token;
  for (size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (!token.empty()) {
        auto id = wpac::parse_scheme(token);
        if (!id) throw wpac::ConfigError("unknown scheme name: " + token);
        out.push_back(*id);
        token.clear();
      }
    } else {
      token += csv[i];
    }
  }
  if (out.empty()) throw wpac::ConfigError("no schemes requested");
  return out;
}

int emit(const std::vector<wpac::ResultRow>& rows, const CommonOpts& opt,
         const std::string& name) {
  std::string path = opt.out_dir + "/" + name;
  wpac::write_csv(rows, path);
  std::printf("%s", wpac::to_csv(rows).c_str());
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int do_sweep(const CommonOpts& opt, wpac::SweepParameter param,
             std::vector<double> values, const std::string& csv_name) {
  wpac::SystemConfig config = load_config(opt);
  wpac::SweepSpec spec;
  spec.parameter = param;
  spec.values = std::move(values);
  spec.schemes = parse_schemes(opt.schemes);
  spec.trials = opt.trials > 0 ? opt.trials : 200;
  spec.base_seed = opt.seed;
  return emit(wpac::run_sweep(spec, config), opt, csv_name);
}

int do_run(const CommonOpts& opt) {
  wpac::SystemConfig config = load_config(opt);
  wpac::SweepSpec spec;
  spec.parameter = wpac::SweepParameter::kP0;
  spec.values = {config.p0};
  spec.schemes = parse_schemes(opt.schemes);
  spec.trials = opt.trials > 0 ? opt.trials : 200;
  spec.base_seed = opt.seed;
  return emit(wpac::run_sweep(spec, config), opt, "run.csv");
}

int do_table2(const CommonOpts& opt) {
  std::vector<int> n_values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  int trials = opt.trials > 0 ? opt.trials : 1000;
  auto rows = wpac::reproduce_table2(n_values, trials, opt.seed);
  return emit(rows, opt, "table2.csv");
}

int do_oracle(const CommonOpts& opt) {
  wpac::SystemConfig config;
  if (opt.config_path.empty()) {
    config.K = 2;
    config.n_ap = 2;
    config.validate();
  } else {
    config = wpac::SystemConfig::from_file(opt.config_path);
  }
  auto report = wpac::oracle_check(config, opt.seed);
  std::printf("solver objective: %.12g\n", report.solver_objective);
  std::printf("search objective: %.12g\n", report.search_objective);
  std::printf("relative gap:     %.3e\n", report.gap);
  std::printf("%s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}

int do_demo(const CommonOpts& opt) {
  wpac::SystemConfig config = load_config(opt);
  if (!config.miso())
    throw wpac::ConfigError("nomographic demo uses the single-antenna mode");
  wpac::ChannelSet ch =
      wpac::sample_channels(config, wpac::derive_seed(opt.seed, 20, 0));
  std::vector<double> gamma =
      wpac::sample_gammas(config, wpac::derive_seed(opt.seed, 21, 0));

  std::vector<Eigen::VectorXcd> h, g;
  for (const auto& M : ch.aircomp) h.push_back(M.col(0));
  for (const auto& M : ch.wpt) g.push_back(M.col(0));

  wpac::LiftedSolution sol =
      wpac::solve_lifted(wpac::LiftedProblem::kMiso, ch, gamma, config.p0,
                         config.L, config.solver);
  Eigen::VectorXcd f =
      wpac::randomize_miso(sol, config.m_samples, h, g, gamma, config.p0,
                           wpac::derive_seed(opt.seed, 22, 0));
  std::vector<double> powers =
      wpac::miso_power_allocation(h, g, f, gamma, config.p0);

  wpac::WptPlan plan;
  plan.p = powers;
  for (int k = 0; k < config.K; ++k) {
    plan.u.push_back(wpac::miso_energy_beam(g[k]));
    plan.v.push_back(Eigen::VectorXcd::Ones(1));
  }
  double eta = wpac::denoising_factor(f, ch.aircomp, ch.wpt, gamma, plan);
  Eigen::MatrixXcd A = std::sqrt(eta) * f;
  wpac::PrecoderSet pre = wpac::miso_precoders(A.col(0), h);

  wpac::Rng value_rng(wpac::derive_seed(opt.seed, 23));
  std::vector<double> values(config.K);
  for (double& v : values) v = 0.5 + 1.5 * value_rng.uniform_open();

  struct Case {
    const char* label;
    wpac::NomographicSpec spec;
  };
  std::vector<Case> cases;
  cases.push_back({"arithmetic-mean", {wpac::NomographicKind::kArithmeticMean, {}, {}}});
  {
    wpac::NomographicSpec s;
    s.kind = wpac::NomographicKind::kWeightedSum;
    for (int k = 0; k < config.K; ++k) s.weights.push_back(0.5 + 0.25 * k);
    cases.push_back({"weighted-sum", s});
  }
  cases.push_back({"geometric-mean", {wpac::NomographicKind::kGeometricMean, {}, {}}});
  {
    wpac::NomographicSpec s;
    s.kind = wpac::NomographicKind::kPolynomial;
    for (int k = 0; k < config.K; ++k) {
      s.weights.push_back(1.0 + 0.1 * k);
      s.exponents.push_back(1.0 + 0.5 * (k % 3));
    }
    cases.push_back({"polynomial", s});
  }
  cases.push_back({"euclidean-norm", {wpac::NomographicKind::kEuclideanNorm, {}, {}}});

  bool all_ok = true;
  std::printf("%-16s %18s %18s %10s\n", "function", "computed", "exact", "error");
  for (const auto& c : cases) {
    double exact = wpac::nomographic_exact(values, c.spec);
    double computed = wpac::aircompute(values, c.spec, ch, A, pre, 0.0,
                                       wpac::derive_seed(opt.seed, 24));
    double err = std::abs(computed - exact);
    bool ok = err <= 1e-6 * std::max(1.0, std::abs(exact));
    all_ok = all_ok && ok;
    std::printf("%-16s %18.12g %18.12g %10.2e %s\n", c.label, computed, exact,
                err, ok ? "" : "MISMATCH");
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint wireless-power and over-the-air-computation designer"};
  app.require_subcommand(1);

  CommonOpts opt;
  auto* run = app.add_subcommand("run", "single operating point, all schemes");
  auto* sp = app.add_subcommand("sweep-power", "server power sweep");
  auto* sa = app.add_subcommand("sweep-antennas", "server antenna sweep");
  auto* ss = app.add_subcommand("sweep-sensors", "sensor count sweep");
  auto* t2 = app.add_subcommand("table2", "rank-one fraction vs antenna count");
  auto* oc = app.add_subcommand("oracle-check", "small-instance solver cross-check");
  auto* dn = app.add_subcommand("demo-nomographic", "end-to-end function computation");
  for (auto* cmd : {run, sp, sa, ss, t2, oc, dn}) add_common(cmd, &opt);

  std::vector<double> power_values = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> antenna_values = {10, 20, 30};
  std::vector<double> sensor_values = {2, 5, 8};
  sp->add_option("--values", power_values, "power budgets");
  sa->add_option("--values", antenna_values, "antenna counts");
  ss->add_option("--values", sensor_values, "sensor counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(opt);
    if (sp->parsed())
      return do_sweep(opt, wpac::SweepParameter::kP0, power_values, "sweep_power.csv");
    if (sa->parsed())
      return do_sweep(opt, wpac::SweepParameter::kNAp, antenna_values,
                      "sweep_antennas.csv");
    if (ss->parsed())
      return do_sweep(opt, wpac::SweepParameter::kK, sensor_values,
                      "sweep_sensors.csv");
    if (t2->parsed()) return do_table2(opt);
    if (oc->parsed()) return do_oracle(opt);
    if (dn->parsed()) return do_demo(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
