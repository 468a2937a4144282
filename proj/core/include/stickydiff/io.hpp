#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stickydiff/data_model.hpp"
#include "stickydiff/detection.hpp"
#include "stickydiff/evidence.hpp"
#include "stickydiff/mcmc.hpp"
#include "stickydiff/simgen.hpp"

namespace stickydiff::io {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double x);

// Write-temp-then-rename so interrupted runs never leave truncated files.
void atomic_write(const std::filesystem::path& file, std::string_view content);

// dataset.tsv: header = sample_id, treatment, probe ids; one row per sample.
// positions.tsv: probe_id, position.
void write_dataset(const Dataset& data, const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

// truth.tsv: probe_id, s_true, h_true, chi_true, theta_1..theta_T.
void write_truth(const SimTruth& truth, const std::vector<std::string>& probe_ids,
                 const std::filesystem::path& file);
struct TruthFile {
  std::vector<std::string> probe_ids;
  std::vector<int> s_true;
  std::vector<int> h_true;
  std::vector<double> chi_true;
  Matrix theta_true;
};
TruthFile read_truth(const std::filesystem::path& file);

SimConfig read_sim_config(const std::filesystem::path& file);
std::string sim_config_echo(const SimConfig& cfg);  // canonical JSON text

struct FitConfig {
  McmcConfig mcmc;
  double q0 = 0.05;
};
FitConfig read_fit_config(const std::filesystem::path& file);

void write_trace_csv(const std::filesystem::path& file, const McmcResult& result);
void write_posterior_summary(const std::filesystem::path& file, const Dataset& data,
                             const PosteriorSummary& summary);
struct SummaryFile {
  std::vector<std::string> probe_ids;
  std::vector<double> omega_hat;
  std::vector<bool> called;
};
SummaryFile read_posterior_summary(const std::filesystem::path& file);

void write_evidence_json(const std::filesystem::path& file, const BfBound& order1_vs_order0,
                         const BfBound& order0_vs_order1, long trace_length);
void write_diagnostics_json(const std::filesystem::path& file, const TraceSummary& summary,
                            const McmcConfig& cfg, double q0);

}  // namespace stickydiff::io
