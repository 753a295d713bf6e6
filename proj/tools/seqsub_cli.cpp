// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// seqsub: generate instances, run rankers, audit with the oracles.
//
// Exit status: 0 on success, 1 on errors, 2 when a checked guarantee fails.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "seqsub/io.h"
#include "seqsub/seqsub.h"

namespace {

using seqsub::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitGuarantee = 2;

struct RunConfig {
  std::string algo;
  std::string instance;
  std::uint64_t seed = 0;
  int steps = 40;
  int samples = 200;
  int trials = 1;
  std::string out;
  std::string format = "table";
  double factor = 1.0;
  double threshold = std::numeric_limits<double>::quiet_NaN();
};

// Summary lines for the terminal plus the machine-readable report.
struct Output {
  std::vector<std::pair<std::string, std::string>> rows;
  Json report = Json::object();
  bool guarantee_ok = true;

  void Row(const std::string& key, const std::string& value) {
    rows.emplace_back(key, value);
  }
  void Row(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    Row(key, std::string(buf));
  }
};

std::string PermText(const seqsub::Permutation& pi) {
  std::string s = "(";
  for (int p : pi.OneBased()) {
    if (s.size() > 1) s += ",";
    s += std::to_string(p);
  }
  return s + ")";
}

Json NumberOrNull(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

void Emit(const Output& out, const RunConfig& cfg) {
  if (!cfg.out.empty()) seqsub::WriteJsonFile(cfg.out, out.report);
  if (cfg.format == "json") {
    std::cout << out.report.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : out.rows) std::cout << k << "," << v << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& [k, v] : out.rows) width = std::max(width, k.size());
    for (const auto& [k, v] : out.rows) {
      std::cout << k << std::string(width - k.size() + 2, ' ') << v << "\n";
    }
  }
}

seqsub::Instance LoadInstance(const RunConfig& cfg) {
  seqsub::Instance inst =
      seqsub::AnyInstanceFromJson(seqsub::ReadJsonFile(cfg.instance));
  if (!std::isnan(cfg.threshold)) inst = inst.WithThreshold(cfg.threshold);
  return inst;
}

Json TrialJson(const seqsub::Instance& inst, const seqsub::Permutation& pi) {
  Json t = Json::object();
  t["permutation"] = seqsub::PermutationToJson(pi);
  t["F"] = seqsub::EvalEngagement(inst, pi);
  t["G"] = seqsub::EvalRevenue(inst, pi);
  return t;
}

void AddOptimum(const seqsub::Instance& inst, double achieved, Output& out) {
  if (inst.n() > seqsub::kMaxOracleProducts) return;
  const auto opt = seqsub::BruteForceEngagementOpt(inst);
  out.report["opt_F"] = opt.best_value;
  out.report["opt_permutation"] = seqsub::PermutationToJson(opt.witness);
  const double ratio = opt.best_value > 0.0 ? achieved / opt.best_value : 1.0;
  out.report["ratio"] = ratio;
  out.Row("OPT F", opt.best_value);
  out.Row("OPT permutation", PermText(opt.witness));
  out.Row("ratio", ratio);
}

Output RunGreedy(const RunConfig& cfg) {
  const seqsub::Instance inst = LoadInstance(cfg);
  const seqsub::Permutation pi = seqsub::GreedyRank(inst);
  Output out;
  out.report["algo"] = "greedy";
  out.report["result"] = TrialJson(inst, pi);
  const double f = seqsub::EvalEngagement(inst, pi);
  out.Row("algo", "greedy");
  out.Row("permutation", PermText(pi));
  out.Row("F", f);
  out.Row("G", seqsub::EvalRevenue(inst, pi));
  AddOptimum(inst, f, out);
  if (out.report.contains("opt_F")) {
    const bool ok = f >= 0.5 * out.report["opt_F"].get<double>() - 1e-12;
    out.report["half_opt_bound_met"] = ok;
    out.guarantee_ok = ok;
  }
  return out;
}

Output RunCg(const RunConfig& cfg) {
  const seqsub::Instance inst = LoadInstance(cfg);
  Output out;
  out.report["algo"] = "cg";
  out.report["seed"] = cfg.seed;
  out.report["steps"] = cfg.steps;
  out.report["samples"] = cfg.samples;
  Json trials = Json::array();
  double sum = 0.0;
  double best = -1.0;
  seqsub::Permutation best_pi;
  bool chain_ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed =
        cfg.trials == 1 ? cfg.seed
                        : seqsub::DeriveSeed(cfg.seed,
                                             {static_cast<std::uint64_t>(t)});
    const auto r = seqsub::RankContinuousGreedy(
        inst, {cfg.steps, cfg.samples, seed, seqsub::PipageMode::kRandomized});
    Json tj = TrialJson(inst, r.permutation);
    tj["seed"] = seed;
    tj["fractional_estimate"] = r.fractional_value.mean;
    tj["fractional_stderr"] = r.fractional_value.std_error;
    tj["rounded_g"] = r.rounded_value;
    trials.push_back(std::move(tj));
    chain_ok = chain_ok && r.engagement >= r.rounded_value - 1e-9;
    sum += r.engagement;
    if (r.engagement > best) {
      best = r.engagement;
      best_pi = r.permutation;
    }
  }
  const double mean = sum / cfg.trials;
  out.report["trials"] = std::move(trials);
  out.report["mean_F"] = mean;
  out.report["best"] = TrialJson(inst, best_pi);
  out.report["extraction_bound_met"] = chain_ok;
  out.guarantee_ok = chain_ok;
  out.Row("algo", "cg");
  out.Row("trials", std::to_string(cfg.trials));
  out.Row("best permutation", PermText(best_pi));
  out.Row("best F", best);
  out.Row("mean F", mean);
  AddOptimum(inst, mean, out);
  return out;
}

Output RunRevenue(const RunConfig& cfg) {
  const seqsub::Instance inst = LoadInstance(cfg);
  const auto rep = seqsub::RunBiCriteria(
      inst, {cfg.trials, cfg.factor, cfg.seed, /*bound=*/0.25});
  Output out;
  Json& j = out.report;
  j["algo"] = "revenue";
  j["seed"] = cfg.seed;
  j["factor"] = cfg.factor;
  j["T"] = inst.threshold();
  j["lp2_value"] = rep.lp2_value;
  j["lp2_engagement"] = rep.lp2_engagement;
  j["scaled_value"] = rep.scaled_value;
  Json seeds = Json::array();
  for (const auto& t : rep.trials) seeds.push_back(TrialJson(inst, t.permutation));
  j["trials"] = std::move(seeds);
  j["mean_G"] = rep.mean_revenue;
  j["mean_F"] = rep.mean_engagement;
  j["worst_G"] = rep.worst_revenue;
  j["worst_F"] = rep.worst_engagement;
  j["alpha_mean"] = NumberOrNull(rep.alpha_mean);
  j["alpha_worst"] = NumberOrNull(rep.alpha_worst);
  j["beta_mean"] = NumberOrNull(rep.beta_mean);
  j["beta_worst"] = NumberOrNull(rep.beta_worst);
  j["revenue_bound_met"] = rep.revenue_bound_met;
  j["engagement_bound_met"] = rep.engagement_bound_met;
  out.guarantee_ok = rep.revenue_bound_met && rep.engagement_bound_met;
  out.Row("algo", "revenue");
  out.Row("LP2 value", rep.lp2_value);
  out.Row("scaled value", rep.scaled_value);
  out.Row("trials", std::to_string(rep.trials.size()));
  out.Row("mean G", rep.mean_revenue);
  out.Row("mean F", rep.mean_engagement);
  out.Row("alpha (mean)", rep.alpha_mean);
  out.Row("beta (mean)", rep.beta_mean);
  out.Row("bounds met", out.guarantee_ok ? "yes" : "no");
  return out;
}

Output RunCoverage(const RunConfig& cfg) {
  const Json j = seqsub::ReadJsonFile(cfg.instance);
  if (!seqsub::IsCoverageInstanceJson(j)) {
    throw seqsub::Error(seqsub::ErrorCode::kInvalidInstance, "coverage",
                        "coverage needs an interest-set instance");
  }
  const auto ci = seqsub::CoverageInstanceFromJson(j);
  const auto sol = seqsub::SolveLp3(ci);
  const auto best = seqsub::CoverageBestOf(ci, sol, cfg.trials, cfg.seed);
  const seqsub::Instance inst = seqsub::CoverageToInstance(ci);
  Output out;
  out.report["algo"] = "coverage";
  out.report["seed"] = cfg.seed;
  out.report["trials"] = cfg.trials;
  out.report["lp3_value"] = sol.value;
  out.report["clicks"] = best.clicks;
  out.report["result"] = TrialJson(inst, best.permutation);
  const double ratio = sol.value > 0.0 ? best.clicks / sol.value : 1.0;
  out.report["ratio"] = ratio;
  out.guarantee_ok = best.clicks <= sol.value + 1e-6;
  out.report["relaxation_bound_met"] = out.guarantee_ok;
  out.Row("algo", "coverage");
  out.Row("LP3 value", sol.value);
  out.Row("permutation", PermText(best.permutation));
  out.Row("clicks", std::to_string(best.clicks));
  out.Row("ratio", ratio);
  return out;
}

Output RunOracle(const RunConfig& cfg) {
  const seqsub::Instance inst = LoadInstance(cfg);
  const auto eng = seqsub::BruteForceEngagementOpt(inst);
  Output out;
  out.report["algo"] = "oracle";
  out.report["opt_F"] = eng.best_value;
  out.report["opt_F_permutation"] = seqsub::PermutationToJson(eng.witness);
  out.report["enumerated"] = eng.enumerated_count;
  out.Row("algo", "oracle");
  out.Row("OPT engagement", eng.best_value);
  out.Row("OPT engagement permutation", PermText(eng.witness));
  try {
    const auto rev = seqsub::BruteForceRevenueOpt(inst);
    out.report["opt_revenue"] = rev.best_value;
    out.report["opt_revenue_result"] = TrialJson(inst, rev.witness);
    out.Row("OPT revenue", rev.best_value);
    out.Row("OPT revenue permutation", PermText(rev.witness));
  } catch (const seqsub::Error& e) {
    if (e.code() != seqsub::ErrorCode::kInfeasible) throw;
    out.report["opt_revenue"] = nullptr;
    out.Row("OPT revenue", "infeasible");
  }
  return out;
}

Output RunCertify(const RunConfig& cfg) {
  const seqsub::PolicyVector pv =
      seqsub::PolicyFromJson(seqsub::ReadJsonFile(cfg.instance));
  Output out;
  out.report["algo"] = "certify";
  out.Row("algo", "certify");
  for (int k = 1; k <= pv.n(); ++k) {
    if (std::abs(pv.LayerMass(k) - 1.0) > seqsub::kPolicyTolerance) {
      out.report["feasible"] = false;
      out.report["unnormalized_layer"] = k;
      out.Row("result", "unnormalized layer " + std::to_string(k));
      return out;
    }
  }
  const auto rep = seqsub::CheckImplementable(pv);
  Json layers = Json::array();
  for (const auto& c : rep.certs) {
    Json l = Json::object();
    l["layer"] = c.layer;
    l["flow"] = c.flow;
    l["feasible"] = c.feasible;
    Json cut = Json::array();
    for (const auto& node : c.cut_source_side) {
      Json nj = Json::object();
      nj["layer"] = node.layer;
      nj["set"] = seqsub::MaskToHex(node.set);
      cut.push_back(std::move(nj));
    }
    l["cut_source_side"] = std::move(cut);
    layers.push_back(std::move(l));
    out.Row("layer " + std::to_string(c.layer) + " flow", c.flow);
  }
  out.report["feasible"] = rep.feasible;
  out.report["violating_layer"] = rep.violating_layer;
  out.report["layers"] = std::move(layers);
  out.Row("result", rep.feasible ? std::string("feasible")
                                 : "infeasible at layer " +
                                       std::to_string(rep.violating_layer));
  return out;
}

Output Dispatch(const RunConfig& cfg) {
  if (cfg.algo == "greedy") return RunGreedy(cfg);
  if (cfg.algo == "cg") return RunCg(cfg);
  if (cfg.algo == "revenue") return RunRevenue(cfg);
  if (cfg.algo == "coverage") return RunCoverage(cfg);
  if (cfg.algo == "oracle") return RunOracle(cfg);
  if (cfg.algo == "certify") return RunCertify(cfg);
  throw seqsub::Error(seqsub::ErrorCode::kInvalidArgument, "cli",
                      "unknown algorithm: " + cfg.algo);
}

int Finish(const Output& out, const RunConfig& cfg) {
  Emit(out, cfg);
  return out.guarantee_ok ? kExitOk : kExitGuarantee;
}

// Re-evaluates every {"permutation", "F", "G"} object in a report.
void Revalidate(const Json& node, const seqsub::Instance& inst, int& checked,
                int& failed) {
  if (node.is_object()) {
    if (node.contains("permutation") && node.contains("F") &&
        node.contains("G")) {
      const auto pi = seqsub::PermutationFromJson(node.at("permutation"));
      ++checked;
      if (std::abs(seqsub::EvalEngagement(inst, pi) -
                   node.at("F").get<double>()) > 1e-9 ||
          std::abs(seqsub::EvalRevenue(inst, pi) -
                   node.at("G").get<double>()) > 1e-9) {
        ++failed;
      }
    }
    for (const auto& [key, child] : node.items()) {
      Revalidate(child, inst, checked, failed);
    }
  } else if (node.is_array()) {
    for (const auto& child : node) Revalidate(child, inst, checked, failed);
  }
}

void AddCommonFlags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--instance", cfg.instance, "Instance or policy JSON file")
      ->required();
  cmd->add_option("--seed", cfg.seed, "Root random seed");
  cmd->add_option("--steps", cfg.steps, "Continuous greedy steps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--samples", cfg.samples, "Samples per estimate")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--trials", cfg.trials, "Independent rounding trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", cfg.out, "Write the JSON report here");
  cmd->add_option("--format", cfg.format, "Summary format")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_option("--factor", cfg.factor, "Relaxation scale factor in (0, 1]");
  cmd->add_option("--threshold", cfg.threshold, "Override the engagement floor");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential submodular ranking: engagement and revenue"};
  app.require_subcommand(1);

  std::string kind;
  int n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool no_revenue = false;
  auto* gen = app.add_subcommand("gen", "Write a random instance");
  gen->add_option("--kind", kind, "explicit | coverage | mnl")
      ->required()
      ->check(CLI::IsMember({"explicit", "coverage", "mnl"}));
  gen->add_option("--n", n, "Number of products")->required()->check(
      CLI::Range(1, 64));
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output file")->required();
  gen->add_flag("--no-revenue", no_revenue, "Set r = 0 and K = 0");

  RunConfig run_cfg;
  auto* run = app.add_subcommand("run", "Run one algorithm");
  run->add_option("--algo", run_cfg.algo,
                  "greedy | cg | revenue | coverage | oracle | certify")
      ->required()
      ->check(CLI::IsMember(
          {"greedy", "cg", "revenue", "coverage", "oracle", "certify"}));
  AddCommonFlags(run, run_cfg);

  RunConfig certify_cfg;
  certify_cfg.algo = "certify";
  auto* certify =
      app.add_subcommand("certify", "Check a policy vector for implementability");
  AddCommonFlags(certify, certify_cfg);

  RunConfig oracle_cfg;
  oracle_cfg.algo = "oracle";
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optima (n <= 10)");
  AddCommonFlags(oracle, oracle_cfg);

  std::string report_path;
  RunConfig report_cfg;
  auto* report = app.add_subcommand(
      "report", "Print a saved report and re-check its permutations");
  report->add_option("--report", report_path, "Report JSON file")->required();
  report->add_option("--instance", report_cfg.instance,
                     "Instance to re-evaluate against");
  report->add_option("--format", report_cfg.format, "Summary format")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (gen->parsed()) {
      const seqsub::ClickKind k = seqsub::ParseClickKind(kind);
      if (k == seqsub::ClickKind::kCoverage) {
        seqsub::WriteJsonFile(gen_out, seqsub::CoverageInstanceToJson(
                                           seqsub::RandomCoverageInstance(
                                               n, gen_seed)));
      } else {
        seqsub::GeneratorOptions options;
        options.revenue = !no_revenue;
        seqsub::WriteJsonFile(gen_out,
                              seqsub::InstanceToJson(seqsub::RandomInstance(
                                  k, n, gen_seed, options)));
      }
      std::cout << "wrote " << gen_out << "\n";
      return kExitOk;
    }
    if (run->parsed()) return Finish(Dispatch(run_cfg), run_cfg);
    if (certify->parsed()) return Finish(Dispatch(certify_cfg), certify_cfg);
    if (oracle->parsed()) return Finish(Dispatch(oracle_cfg), oracle_cfg);
    if (report->parsed()) {
      Output out;
      out.report = seqsub::ReadJsonFile(report_path);
      for (const auto& [key, value] : out.report.items()) {
        if (value.is_primitive()) out.Row(key, value.dump());
      }
      if (!report_cfg.instance.empty()) {
        const seqsub::Instance inst = LoadInstance(report_cfg);
        int checked = 0;
        int failed = 0;
        Revalidate(out.report, inst, checked, failed);
        out.Row("re-evaluated", std::to_string(checked));
        out.Row("mismatches", std::to_string(failed));
        out.guarantee_ok = failed == 0;
      }
      return Finish(out, report_cfg);
    }
  } catch (const seqsub::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
