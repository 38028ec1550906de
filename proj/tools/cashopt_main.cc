// Copyright 2026 The cashopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cashopt: ingest password corpora, optimize CASH distributions, emit the
// cracked-fraction curves and simulate the authentication mechanism.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cashopt/adversary.h"
#include "cashopt/cash_file.h"
#include "cashopt/curves.h"
#include "cashopt/distribution.h"
#include "cashopt/errors.h"
#include "cashopt/mechanism.h"
#include "cashopt/optimizer.h"

namespace {

using namespace cashopt;

struct DistSource {
  std::string dist, freq, plaintext;

  void AddTo(CLI::App* cmd) {
    auto* group = cmd->add_option_group("input", "password distribution source");
    group->add_option("--dist", dist, "normalized class file (from ingest)")
        ->check(CLI::ExistingFile);
    group->add_option("--freq", freq, "frequency corpus, one \"f c\" per line")
        ->check(CLI::ExistingFile);
    group->add_option("--plaintext", plaintext, "one password per line")
        ->check(CLI::ExistingFile);
    group->require_option(1);
  }

  PasswordDistribution Load() const {
    const std::string& path = !dist.empty() ? dist : !freq.empty() ? freq : plaintext;
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    if (!dist.empty()) return ReadNormalized(in);
    if (!freq.empty()) return IngestFrequencyCorpus(in);
    return IngestPlaintext(in);
  }
};

struct ModelFlags {
  double alpha = 1;
  double c_max = 1;
  int m = 50;
  double epsilon = 0.02;
  std::vector<double> k_set;
  std::vector<std::int64_t> b_set;
  int max_rounds = 200;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  void AddTo(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "fraction of logins with the correct password")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd->add_option("--cmax", c_max, "amortized cost budget per login")
        ->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--m", m, "runtime range")->check(CLI::Range(1, 100000))->capture_default_str();
    cmd->add_option("--eps", epsilon, "cutting-plane slack tolerance")
        ->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--kset", k_set, "hash costs to try (default: 20 up to the largest feasible)")
        ->delimiter(',');
    cmd->add_option("--bset", b_set, "attacker thresholds (default scales with --cmax)")
        ->delimiter(',');
    cmd->add_option("--max-rounds", max_rounds, "cut rounds per (k, B)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }

  OptimizerConfig Config() const {
    OptimizerConfig config = DefaultConfig(c_max, alpha, m);
    config.epsilon = epsilon;
    config.max_cut_rounds = max_rounds;
    config.threads = threads;
    if (!k_set.empty()) config.k_set = k_set;
    if (!b_set.empty()) config.thresholds = b_set;
    return config;
  }
};

// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw Error("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

CashFile LoadCash(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ReadCashFile(in);
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

int RunIngest(const DistSource& src, const std::string& out) {
  const auto dist = src.Load();
  Output o(out);
  WriteNormalized(dist, o.stream());
  std::cerr << "classes " << dist.num_classes() << ", passwords " << dist.total_passwords()
            << ", users " << dist.total_users() << "\n";
  return 0;
}

int RunOptimize(const DistSource& src, const ModelFlags& model, double vhat_ratio,
                const std::string& out) {
  const auto dist = src.Load();
  const auto config = model.Config();
  const double v_hat = vhat_ratio * model.c_max;
  const auto defense = FindCashDistribution(dist, v_hat, model.c_max, model.alpha, config);
  for (const auto& [budget, reason] : defense.failures) {
    std::cerr << "warning: threshold " << budget << " skipped: " << reason << "\n";
  }
  CashFile file;
  file.cash = defense.cash;
  file.k = defense.k;
  file.alpha = model.alpha;
  file.c_max = model.c_max;
  file.epsilon = model.epsilon;
  file.source_threshold = defense.source_threshold;
  file.predicted_cracked = defense.predicted_cracked;
  if (!out.empty()) {
    Output o(out);
    WriteCashFile(file, o.stream());
  }
  const double uniform =
      UniformSuccessRate(dist, v_hat, model.c_max, model.m, model.alpha).cracked;
  std::cout << "k " << Num(defense.k) << "\n"
            << "predicted_cracked " << Num(defense.predicted_cracked) << "\n"
            << "uniform_cracked " << Num(uniform) << "\n"
            << "source_threshold "
            << (defense.source_threshold ? std::to_string(*defense.source_threshold)
                                         : "uniform")
            << "\n"
            << "server_cost " << Num(ServerCost(defense.cash, defense.k, model.alpha)) << "\n";
  return 0;
}

int RunCurves(const DistSource& src, const ModelFlags& model, std::vector<double> v_grid,
              std::optional<double> vhat_ratio, const std::string& out) {
  const auto dist = src.Load();
  if (v_grid.empty()) v_grid = DefaultValueGrid();
  if (!std::is_sorted(v_grid.begin(), v_grid.end())) {
    throw DomainError("--vgrid must be ascending");
  }
  CurveOptions options;
  options.alpha = model.alpha;
  options.c_max = model.c_max;
  options.config = model.Config();
  options.policy = vhat_ratio ? VhatPolicy::Fixed(*vhat_ratio) : VhatPolicy::Match();
  const auto rows = GenerateCurves(dist, v_grid, options);
  Output o(out);
  WriteCurvesCsv(rows, o.stream());
  return 0;
}

int RunCostCdf(const std::string& cash_path, const std::string& out) {
  const auto file = LoadCash(cash_path);
  Output o(out);
  WriteCostCdfCsv(CostCdf(file.cash, file.k, file.alpha, file.c_max), o.stream());
  return 0;
}

int RunSimulate(const std::string& cash_path, int accounts, int wrong, std::uint64_t seed,
                std::optional<std::uint32_t> k_iter_flag, const std::string& records,
                const std::string& out) {
  const auto file = LoadCash(cash_path);
  const std::uint32_t k_iter = k_iter_flag ? *k_iter_flag : IterationsForCost(file.k);
  std::mt19937_64 rng(seed);
  RecordStore store(file.cash.m());
  std::uniform_int_distribution<int> pwd(0, 999);
  std::vector<std::string> passwords;
  passwords.reserve(accounts);
  for (int i = 0; i < accounts; ++i) {
    passwords.push_back("pw" + std::to_string(pwd(rng)));
    store.CreateAccount("user" + std::to_string(i), passwords.back(), file.cash, k_iter, rng);
  }
  std::int64_t correct_evals = 0, failures = 0;
  for (int i = 0; i < accounts; ++i) {
    const auto r = store.Authenticate("user" + std::to_string(i), passwords[i]);
    if (r.outcome != AuthResult::Outcome::kSuccess) ++failures;
    correct_evals += r.evaluations;
  }
  std::int64_t wrong_evals = 0, false_accepts = 0;
  for (int i = 0; i < wrong; ++i) {
    const auto r = store.Authenticate("user" + std::to_string(i % accounts),
                                      "wrong" + std::to_string(i));
    if (r.outcome == AuthResult::Outcome::kSuccess) ++false_accepts;
    wrong_evals += r.evaluations;
  }
  if (!records.empty()) {
    Output r(records);
    store.Save(r.stream());
  }
  const double k = static_cast<double>(k_iter);
  const double correct_blocks = k * static_cast<double>(correct_evals) / accounts;
  const double wrong_blocks = wrong > 0 ? k * static_cast<double>(wrong_evals) / wrong : 0;
  const double mixed = file.alpha * correct_blocks + (1 - file.alpha) * k * file.cash.m();
  Output o(out);
  auto& s = o.stream();
  s << "accounts " << accounts << "\n"
    << "k_iter " << k_iter << "\n"
    << "correct_login_failures " << failures << "\n"
    << "wrong_login_accepts " << false_accepts << "\n"
    << "correct_login_cost_empirical " << Num(correct_blocks) << "\n"
    << "correct_login_cost_analytic " << Num(k * file.cash.ExpectedRuntime()) << "\n"
    << "wrong_login_cost_empirical " << Num(wrong_blocks) << "\n"
    << "wrong_login_cost_analytic " << Num(k * file.cash.m()) << "\n"
    << "session_cost_empirical " << Num(mixed) << "\n"
    << "session_cost_analytic " << Num(ServerCost(file.cash, k, file.alpha)) << "\n";
  return failures == 0 && false_accepts == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CASH key-stretching optimizer and simulator"};
  app.require_subcommand(1);

  DistSource src;
  ModelFlags model;
  std::string out;

  auto* ingest = app.add_subcommand("ingest", "normalize a password corpus");
  DistSource ingest_src;
  ingest_src.AddTo(ingest);
  ingest->add_option("--out", out, "normalized class file (default: stdout)");

  auto* optimize = app.add_subcommand("optimize", "find a CASH distribution");
  src.AddTo(optimize);
  model.AddTo(optimize);
  double vhat = 0;
  optimize->add_option("--vhat", vhat, "defender's estimate of v / c_max")
      ->required()->check(CLI::NonNegativeNumber);
  optimize->add_option("--out", out, "CASH distribution file");

  auto* curves = app.add_subcommand("curves", "fraction cracked versus v / c_max");
  DistSource curves_src;
  ModelFlags curves_model;
  curves_src.AddTo(curves);
  curves_model.AddTo(curves);
  std::vector<double> v_grid;
  std::optional<double> fixed_vhat;
  curves->add_option("--vgrid", v_grid, "values of v / c_max (default grid if omitted)")
      ->delimiter(',');
  curves->add_option("--vhat", fixed_vhat,
                     "fixed defender estimate v_hat / c_max (default: v_hat = v)");
  curves->add_option("--out", out, "CSV output (default: stdout)");

  auto* costcdf = app.add_subcommand("costcdf", "cumulative per-login cost distribution");
  std::string cash_path;
  costcdf->add_option("--cash", cash_path, "CASH distribution file")
      ->required()->check(CLI::ExistingFile);
  costcdf->add_option("--out", out, "CSV output (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "run the mechanism on a seeded workload");
  int accounts = 10000, wrong = 1000;
  std::uint64_t seed = 1;
  std::optional<std::uint32_t> k_iter;
  std::string records;
  simulate->add_option("--cash", cash_path, "CASH distribution file")
      ->required()->check(CLI::ExistingFile);
  simulate->add_option("--accounts", accounts, "accounts to create")
      ->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--wrong", wrong, "wrong-password attempts")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  simulate->add_option("--seed", seed, "workload and salt seed")->capture_default_str();
  simulate->add_option("--k-iter", k_iter, "iterations per H^k (default: round(k))");
  simulate->add_option("--records", records, "write the account records here");
  simulate->add_option("--out", out, "summary output (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return RunIngest(ingest_src, out);
    if (*optimize) return RunOptimize(src, model, vhat, out);
    if (*curves) return RunCurves(curves_src, curves_model, v_grid, fixed_vhat, out);
    if (*costcdf) return RunCostCdf(cash_path, out);
    if (*simulate) return RunSimulate(cash_path, accounts, wrong, seed, k_iter, records, out);
  } catch (const std::exception& e) {
    std::cerr << "cashopt: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
