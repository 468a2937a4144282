#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stickydiff/baselines.hpp"
#include "stickydiff/detection.hpp"
#include "stickydiff/errors.hpp"
#include "stickydiff/evaluation.hpp"
#include "stickydiff/evidence.hpp"
#include "stickydiff/io.hpp"
#include "stickydiff/mcmc.hpp"
#include "stickydiff/simgen.hpp"

namespace sfs = std::filesystem;
using namespace stickydiff;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("STICKYDIFF_SEED");
  if (v == nullptr) return std::nullopt;
  return static_cast<std::uint64_t>(std::stoull(v));
}

unsigned env_threads() {
  const char* v = std::getenv("STICKYDIFF_THREADS");
  if (v == nullptr) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  const long n = std::stol(v);
  return n < 1 ? 1 : static_cast<unsigned>(n);
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_flag) {
  SimConfig cfg = io::read_sim_config(config_path);
  if (const auto s = seed_flag ? seed_flag : env_seed()) cfg.seed = *s;
  sfs::create_directories(out_dir);

  auto [data, truth] = generate_dataset(cfg);
  io::write_dataset(data, out_dir);
  io::write_truth(truth, data.probe_ids, sfs::path(out_dir) / "truth.tsv");
  io::atomic_write(sfs::path(out_dir) / "config-echo.json", io::sim_config_echo(cfg));
  std::cerr << "simulate: wrote " << data.n_samples() << " samples x " << data.n_probes()
            << " probes to " << out_dir << "\n";
  return exit_ok;
}

void fit_one(const sfs::path& data_dir, const io::FitConfig& fit, const sfs::path& out_dir) {
  const Dataset data = io::read_dataset(data_dir);
  const LogitData logit = logit_transform(data, fit.mcmc.clamp_eps);

  const McmcResult result = run_chain(logit, fit.mcmc);
  const PosteriorSummary summary = summarize_posterior(result.s_draws, result.theta_mean, fit.q0);
  const BfBound b10 = bf_lower_bound(result.log_odds_eta_trace, BfDirection::order1_vs_order0);
  const BfBound b01 = bf_lower_bound(result.log_odds_eta_trace, BfDirection::order0_vs_order1);

  sfs::create_directories(out_dir);
  io::write_trace_csv(out_dir / "trace.csv", result);
  io::write_posterior_summary(out_dir / "posterior_summary.tsv", data, summary);
  io::write_evidence_json(out_dir / "evidence.json", b10, b01,
                          static_cast<long>(result.log_odds_eta_trace.size()));
  io::write_diagnostics_json(out_dir / "diagnostics.json", result.summary, fit.mcmc, fit.q0);
  std::cerr << "fit: " << data_dir.string() << " -> " << out_dir.string()
            << "  (block1 acceptance " << result.summary.block1_accept_rate << ", "
            << result.summary.seconds_per_iteration << " s/iter, called " << summary.b_star
            << " probes)\n";
}

int cmd_fit(const std::vector<std::string>& data_dirs, const std::string& config_path,
            const std::string& out_dir, std::optional<std::uint64_t> seed_flag,
            std::optional<double> q0_flag) {
  io::FitConfig fit = io::read_fit_config(config_path);
  if (const auto s = seed_flag ? seed_flag : env_seed()) fit.mcmc.seed = *s;
  if (q0_flag) fit.q0 = *q0_flag;
  if (!(fit.q0 > 0.0 && fit.q0 < 1.0)) throw validation_error("fit: q0 must lie in (0,1)");

  if (data_dirs.size() == 1) {
    fit_one(data_dirs[0], fit, out_dir);
    return exit_ok;
  }
  // several datasets: independent chains, each into out_dir/<name>, run in
  // parallel up to STICKYDIFF_THREADS
  const unsigned max_threads = env_threads();
  std::vector<std::future<void>> running;
  for (std::size_t k = 0; k < data_dirs.size(); ++k) {
    if (running.size() >= max_threads) {
      running.front().get();
      running.erase(running.begin());
    }
    const sfs::path in = data_dirs[k];
    const sfs::path out = sfs::path(out_dir) / in.filename();
    io::FitConfig fit_k = fit;
    fit_k.mcmc.seed = splitmix64(fit.mcmc.seed ^ (0x9e3779b9ULL + k));
    running.push_back(std::async(std::launch::async, [in, fit_k, out] { fit_one(in, fit_k, out); }));
  }
  for (auto& f : running) f.get();
  return exit_ok;
}

struct ReplicateRow {
  std::string name;
  double auc_bayes = 0, auc20_bayes = 0, auc10_bayes = 0;
  double auc_anova = 0, auc20_anova = 0, auc10_anova = 0;
  double auc_kw = 0, auc20_kw = 0, auc10_kw = 0;
  double fdr_bayes = 0, fdr_anova_bh = 0, fdr_kw_bh = 0;
  int called_bayes = 0;
};

int cmd_evaluate(const std::vector<std::string>& replicate_dirs, const std::string& out_dir,
                 double q0) {
  if (replicate_dirs.empty()) throw validation_error("evaluate: no replicate directories given");
  sfs::create_directories(out_dir);

  std::vector<ReplicateRow> rows;
  std::string roc_tsv = "replicate\tmethod\tfpr\ttpr\n";

  for (const std::string& dir : replicate_dirs) {
    const sfs::path d(dir);
    for (const char* required : {"dataset.tsv", "positions.tsv", "truth.tsv", "posterior_summary.tsv"})
      if (!sfs::exists(d / required))
        throw validation_error("evaluate: " + (d / required).string() + " is missing");

    const Dataset data = io::read_dataset(d);
    const io::TruthFile truth = io::read_truth(d / "truth.tsv");
    const io::SummaryFile posterior = io::read_posterior_summary(d / "posterior_summary.tsv");

    if (truth.probe_ids != data.probe_ids || posterior.probe_ids != data.probe_ids) {
      std::string offending;
      for (std::size_t j = 0; j < data.probe_ids.size(); ++j) {
        const bool bad_truth = j >= truth.probe_ids.size() || truth.probe_ids[j] != data.probe_ids[j];
        const bool bad_post = j >= posterior.probe_ids.size() || posterior.probe_ids[j] != data.probe_ids[j];
        if (bad_truth || bad_post) {
          offending += (offending.empty() ? "" : ", ") + data.probe_ids[j];
          if (offending.size() > 200) break;
        }
      }
      throw validation_error("evaluate: probe sets do not match in " + dir + " (" + offending + ")");
    }

    std::vector<bool> truth_diff(truth.s_true.size());
    for (std::size_t j = 0; j < truth.s_true.size(); ++j) truth_diff[j] = truth.s_true[j] == 2;

    const std::vector<double> p_anova = anova_pvalues(data);
    const std::vector<double> p_kw = kruskal_wallis_pvalues(data);
    std::vector<double> score_anova(p_anova.size()), score_kw(p_kw.size());
    for (std::size_t j = 0; j < p_anova.size(); ++j) {
      score_anova[j] = 1.0 - p_anova[j];
      score_kw[j] = 1.0 - p_kw[j];
    }

    ReplicateRow row;
    row.name = d.filename().string();
    const auto roc_bayes = roc_points(posterior.omega_hat, truth_diff);
    const auto roc_anova = roc_points(score_anova, truth_diff);
    const auto roc_kw = roc_points(score_kw, truth_diff);
    row.auc_bayes = auc(roc_bayes);
    row.auc20_bayes = auc_partial(roc_bayes, 0.2);
    row.auc10_bayes = auc_partial(roc_bayes, 0.1);
    row.auc_anova = auc(roc_anova);
    row.auc20_anova = auc_partial(roc_anova, 0.2);
    row.auc10_anova = auc_partial(roc_anova, 0.1);
    row.auc_kw = auc(roc_kw);
    row.auc20_kw = auc_partial(roc_kw, 0.2);
    row.auc10_kw = auc_partial(roc_kw, 0.1);

    row.fdr_bayes = achieved_fdr(posterior.called, truth_diff);
    int called = 0;
    for (bool c : posterior.called) called += c ? 1 : 0;
    row.called_bayes = called;

    const std::vector<double> bh_anova = bh_adjust(p_anova);
    const std::vector<double> bh_kw = bh_adjust(p_kw);
    std::vector<bool> called_anova(bh_anova.size()), called_kw(bh_kw.size());
    for (std::size_t j = 0; j < bh_anova.size(); ++j) {
      called_anova[j] = bh_anova[j] < q0;
      called_kw[j] = bh_kw[j] < q0;
    }
    row.fdr_anova_bh = achieved_fdr(called_anova, truth_diff);
    row.fdr_kw_bh = achieved_fdr(called_kw, truth_diff);
    rows.push_back(row);

    const auto emit = [&](const char* method, const std::vector<std::pair<double, double>>& pts) {
      for (const auto& [fpr, tpr] : pts)
        roc_tsv += row.name + "\t" + method + "\t" + io::format_double(fpr) + "\t" +
                   io::format_double(tpr) + "\n";
    };
    emit("bayesdiff", roc_bayes);
    emit("anova", roc_anova);
    emit("kruskal_wallis", roc_kw);
  }

  io::atomic_write(sfs::path(out_dir) / "roc_points.tsv", roc_tsv);

  nlohmann::ordered_json report;
  report["schema"] = "stickydiff-scenario-v1";
  report["q0"] = q0;
  report["replicates"] = nlohmann::ordered_json::array();
  double sum_ab = 0, sum_a20b = 0, sum_a10b = 0, sum_aa = 0, sum_a20a = 0, sum_a10a = 0,
         sum_fdr = 0;
  for (const ReplicateRow& r : rows) {
    nlohmann::ordered_json jr;
    jr["replicate"] = r.name;
    jr["auc"] = {{"bayesdiff", r.auc_bayes}, {"anova", r.auc_anova}, {"kruskal_wallis", r.auc_kw}};
    jr["auc20"] = {{"bayesdiff", r.auc20_bayes}, {"anova", r.auc20_anova}, {"kruskal_wallis", r.auc20_kw}};
    jr["auc10"] = {{"bayesdiff", r.auc10_bayes}, {"anova", r.auc10_anova}, {"kruskal_wallis", r.auc10_kw}};
    jr["achieved_fdr"] = {{"bayesdiff", r.fdr_bayes},
                          {"anova_bh", r.fdr_anova_bh},
                          {"kruskal_wallis_bh", r.fdr_kw_bh}};
    jr["called_bayesdiff"] = r.called_bayes;
    report["replicates"].push_back(jr);
    sum_ab += r.auc_bayes;
    sum_a20b += r.auc20_bayes;
    sum_a10b += r.auc10_bayes;
    sum_aa += r.auc_anova;
    sum_a20a += r.auc20_anova;
    sum_a10a += r.auc10_anova;
    sum_fdr += r.fdr_bayes;
  }
  const double nrep = static_cast<double>(rows.size());
  report["aggregate"] = {
      {"n_replicates", rows.size()},
      {"mean_auc", {{"bayesdiff", sum_ab / nrep}, {"anova", sum_aa / nrep}}},
      {"mean_auc20", {{"bayesdiff", sum_a20b / nrep}, {"anova", sum_a20a / nrep}}},
      {"mean_auc10", {{"bayesdiff", sum_a10b / nrep}, {"anova", sum_a10a / nrep}}},
      {"mean_achieved_fdr_bayesdiff", sum_fdr / nrep},
  };
  io::atomic_write(sfs::path(out_dir) / "scenario_report.json", report.dump(2) + "\n");
  std::cerr << "evaluate: " << rows.size() << " replicates -> " << out_dir << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sticky Pitman-Yor differential methylation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> data_dirs, replicate_dirs;
  std::uint64_t seed_value = 0;
  double q0 = 0.05;

  CLI::App* sim = app.add_subcommand("simulate", "Generate a synthetic methylation dataset");
  sim->add_option("--config", config_path, "Simulation config JSON")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();
  CLI::Option* sim_seed = sim->add_option("--seed", seed_value, "Seed override");

  CLI::App* fit = app.add_subcommand("fit", "Run the MCMC sampler on a dataset");
  fit->add_option("--data", data_dirs, "Dataset directory (repeatable)")->required();
  fit->add_option("--config", config_path, "Fit config JSON")->required();
  fit->add_option("--out", out_dir, "Output directory")->required();
  CLI::Option* fit_seed = fit->add_option("--seed", seed_value, "Seed override");
  CLI::Option* fit_q0 = fit->add_option("--q0", q0, "Nominal FDR level (default 0.05)");

  CLI::App* eval = app.add_subcommand("evaluate", "Score fits against ground truth");
  eval->add_option("--replicate", replicate_dirs,
                   "Replicate directory with dataset, truth and posterior summary (repeatable)")
      ->required();
  eval->add_option("--out", out_dir, "Output directory")->required();
  eval->add_option("--q0", q0, "Nominal FDR level for the baseline calls");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, out_dir,
                          sim_seed->count() > 0 ? std::optional<std::uint64_t>(seed_value) : std::nullopt);
    if (fit->parsed())
      return cmd_fit(data_dirs, config_path, out_dir,
                     fit_seed->count() > 0 ? std::optional<std::uint64_t>(seed_value) : std::nullopt,
                     fit_q0->count() > 0 ? std::optional<double>(q0) : std::nullopt);
    if (eval->parsed()) return cmd_evaluate(replicate_dirs, out_dir, q0);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_ok;
}
