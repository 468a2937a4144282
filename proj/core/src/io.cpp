#include "stickydiff/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stickydiff/errors.hpp"

namespace stickydiff::io {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace sfs = std::filesystem;

std::string slurp(const sfs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw validation_error("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw validation_error(context + ": bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& context) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw validation_error(context + ": bad integer '" + s + "'");
  return v;
}

std::vector<std::string> read_lines(const sfs::path& file) {
  const std::string content = slurp(file);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t pos = content.find('\n', start);
    if (pos == std::string::npos) pos = content.size();
    lines.push_back(content.substr(start, pos - start));
    start = pos + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

template <typename T>
T json_get(const ordered_json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw validation_error(context + ": missing required field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(context + ": bad value for '" + key + "': " + e.what());
  }
}

ordered_json parse_json_file(const sfs::path& file, const std::string& context) {
  try {
    return ordered_json::parse(slurp(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(context + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void atomic_write(const sfs::path& file, std::string_view content) {
  const sfs::path tmp = file.parent_path() / (file.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw validation_error("write failed for " + tmp.string());
  }
  sfs::rename(tmp, file);
}

void write_dataset(const Dataset& data, const sfs::path& dir) {
  std::string tsv = "sample_id\ttreatment";
  for (const std::string& id : data.probe_ids) tsv += "\t" + id;
  tsv += "\n";
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    tsv += "s" + std::to_string(i + 1) + "\t" + std::to_string(data.treatments[i]);
    for (std::size_t j = 0; j < data.n_probes(); ++j) tsv += "\t" + format_double(data.values(i, j));
    tsv += "\n";
  }
  atomic_write(dir / "dataset.tsv", tsv);

  std::string pos = "probe_id\tposition\n";
  for (std::size_t j = 0; j < data.n_probes(); ++j)
    pos += data.probe_ids[j] + "\t" + std::to_string(data.positions[j]) + "\n";
  atomic_write(dir / "positions.tsv", pos);
}

Dataset read_dataset(const sfs::path& dir) {
  const std::vector<std::string> lines = read_lines(dir / "dataset.tsv");
  if (lines.size() < 2) throw validation_error("dataset.tsv: need a header and at least one sample row");
  const std::vector<std::string> header = split_tab(lines[0]);
  if (header.size() < 3 || header[0] != "sample_id" || header[1] != "treatment")
    throw validation_error("dataset.tsv: header must start with sample_id, treatment");

  Dataset data;
  data.probe_ids.assign(header.begin() + 2, header.end());
  const std::size_t p = data.probe_ids.size();
  const std::size_t n = lines.size() - 1;
  data.values = Matrix(n, p);
  data.treatments.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::string> f = split_tab(lines[i + 1]);
    if (f.size() != p + 2)
      throw validation_error("dataset.tsv: row " + std::to_string(i + 2) + " has " +
                             std::to_string(f.size()) + " fields, expected " + std::to_string(p + 2));
    data.treatments[i] = static_cast<int>(parse_int(f[1], "dataset.tsv row " + std::to_string(i + 2)));
    for (std::size_t j = 0; j < p; ++j)
      data.values(i, j) = parse_double(f[j + 2], "dataset.tsv row " + std::to_string(i + 2));
  }

  const std::vector<std::string> pos_lines = read_lines(dir / "positions.tsv");
  if (pos_lines.size() != p + 1)
    throw validation_error("positions.tsv: expected " + std::to_string(p + 1) + " lines");
  data.positions.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const std::vector<std::string> f = split_tab(pos_lines[j + 1]);
    if (f.size() != 2 || f[0] != data.probe_ids[j])
      throw validation_error("positions.tsv: row " + std::to_string(j + 2) +
                             " does not match probe " + data.probe_ids[j]);
    data.positions[j] = parse_int(f[1], "positions.tsv row " + std::to_string(j + 2));
  }
  data.validate();
  return data;
}

void write_truth(const SimTruth& truth, const std::vector<std::string>& probe_ids,
                 const sfs::path& file) {
  const std::size_t p = truth.s_true.size();
  const std::size_t T = truth.theta_true.cols();
  std::string tsv = "probe_id\ts_true\th_true\tchi_true";
  for (std::size_t t = 0; t < T; ++t) tsv += "\ttheta_" + std::to_string(t + 1);
  tsv += "\n";
  for (std::size_t j = 0; j < p; ++j) {
    tsv += probe_ids[j] + "\t" + std::to_string(truth.s_true[j]) + "\t" +
           std::to_string(truth.h_true[j]) + "\t" + format_double(truth.chi_true[j]);
    for (std::size_t t = 0; t < T; ++t) tsv += "\t" + format_double(truth.theta_true(j, t));
    tsv += "\n";
  }
  atomic_write(file, tsv);
}

TruthFile read_truth(const sfs::path& file) {
  const std::vector<std::string> lines = read_lines(file);
  if (lines.empty()) throw validation_error("truth.tsv: empty file");
  const std::vector<std::string> header = split_tab(lines[0]);
  if (header.size() < 5) throw validation_error("truth.tsv: bad header");
  const std::size_t T = header.size() - 4;
  TruthFile out;
  const std::size_t p = lines.size() - 1;
  out.theta_true = Matrix(p, T);
  for (std::size_t j = 0; j < p; ++j) {
    const std::vector<std::string> f = split_tab(lines[j + 1]);
    if (f.size() != header.size())
      throw validation_error("truth.tsv: row " + std::to_string(j + 2) + " has wrong field count");
    out.probe_ids.push_back(f[0]);
    out.s_true.push_back(static_cast<int>(parse_int(f[1], "truth.tsv")));
    out.h_true.push_back(static_cast<int>(parse_int(f[2], "truth.tsv")));
    out.chi_true.push_back(parse_double(f[3], "truth.tsv"));
    for (std::size_t t = 0; t < T; ++t) out.theta_true(j, t) = parse_double(f[4 + t], "truth.tsv");
  }
  return out;
}

SimConfig read_sim_config(const sfs::path& file) {
  const ordered_json j = parse_json_file(file, "sim config");
  const std::string schema = json_get<std::string>(j, "schema", "sim config");
  if (schema != "stickydiff-sim-v1")
    throw validation_error("sim config: unsupported schema '" + schema + "'");
  SimConfig cfg;
  cfg.p = json_get<int>(j, "p", "sim config");
  cfg.T = json_get<int>(j, "T", "sim config");
  cfg.n_per_treatment = json_get<int>(j, "n_per_treatment", "sim config");
  cfg.sigma2_0 = json_get<double>(j, "sigma2_0", "sim config");
  cfg.eta_0 = json_get<double>(j, "eta_0", "sim config");
  cfg.read_depth_mean = json_get<double>(j, "read_depth_mean", "sim config");
  cfg.baseline_methylated = json_get<double>(j, "baseline_methylated", "sim config");
  cfg.baseline_transit = json_get<double>(j, "baseline_transit", "sim config");
  cfg.baseline_demethylated = json_get<double>(j, "baseline_demethylated", "sim config");
  cfg.tau_chi2 = json_get<double>(j, "tau_chi2", "sim config");
  cfg.hmm_kappa = json_get<double>(j, "hmm_kappa", "sim config");
  cfg.truncation_L = json_get<int>(j, "truncation_L", "sim config");
  const std::string src = json_get<std::string>(j, "distance_source", "sim config");
  if (src == "bundled")
    cfg.distance_source = DistanceSource::bundled;
  else if (src == "log_uniform")
    cfg.distance_source = DistanceSource::log_uniform;
  else if (src == "explicit")
    cfg.distance_source = DistanceSource::explicit_gaps;
  else
    throw validation_error("sim config: unknown distance_source '" + src + "'");
  cfg.gap_min_bp = json_get<long long>(j, "gap_min_bp", "sim config");
  cfg.gap_max_bp = json_get<long long>(j, "gap_max_bp", "sim config");
  if (cfg.distance_source == DistanceSource::explicit_gaps)
    cfg.gaps_bp = json_get<std::vector<long long>>(j, "gaps_bp", "sim config");
  cfg.seed = json_get<std::uint64_t>(j, "seed", "sim config");
  cfg.meta = json_get<std::string>(j, "meta", "sim config");

  const ordered_json hp = j.contains("hp_true") ? j.at("hp_true") : ordered_json::object();
  cfg.hp_true.rho1 = json_get<double>(hp, "rho1", "sim config hp_true");
  cfg.hp_true.gamma = json_get<double>(hp, "gamma", "sim config hp_true");
  cfg.hp_true.alpha1 = json_get<double>(hp, "alpha1", "sim config hp_true");
  cfg.hp_true.alpha2 = json_get<double>(hp, "alpha2", "sim config hp_true");
  cfg.hp_true.d2 = json_get<double>(hp, "d2", "sim config hp_true");
  cfg.hp_true.beta_mass = json_get<double>(hp, "beta_mass", "sim config hp_true");
  cfg.hp_true.mu_G = json_get<double>(hp, "mu_G", "sim config hp_true");
  cfg.hp_true.tau_G2 = json_get<double>(hp, "tau_G2", "sim config hp_true");
  cfg.hp_true.eta = cfg.eta_0;
  cfg.hp_true.sigma2 = cfg.sigma2_0;
  cfg.validate();
  return cfg;
}

std::string sim_config_echo(const SimConfig& cfg) {
  ordered_json j;
  j["schema"] = "stickydiff-sim-v1";
  j["p"] = cfg.p;
  j["T"] = cfg.T;
  j["n_per_treatment"] = cfg.n_per_treatment;
  j["sigma2_0"] = cfg.sigma2_0;
  j["eta_0"] = cfg.eta_0;
  j["read_depth_mean"] = cfg.read_depth_mean;
  j["baseline_methylated"] = cfg.baseline_methylated;
  j["baseline_transit"] = cfg.baseline_transit;
  j["baseline_demethylated"] = cfg.baseline_demethylated;
  j["tau_chi2"] = cfg.tau_chi2;
  j["hmm_kappa"] = cfg.hmm_kappa;
  j["truncation_L"] = cfg.truncation_L;
  switch (cfg.distance_source) {
    case DistanceSource::bundled: j["distance_source"] = "bundled"; break;
    case DistanceSource::log_uniform: j["distance_source"] = "log_uniform"; break;
    case DistanceSource::explicit_gaps: j["distance_source"] = "explicit"; break;
  }
  j["gap_min_bp"] = cfg.gap_min_bp;
  j["gap_max_bp"] = cfg.gap_max_bp;
  if (cfg.distance_source == DistanceSource::explicit_gaps) j["gaps_bp"] = cfg.gaps_bp;
  j["seed"] = cfg.seed;
  j["meta"] = cfg.meta;
  ordered_json hp;
  hp["rho1"] = cfg.hp_true.rho1;
  hp["gamma"] = cfg.hp_true.gamma;
  hp["alpha1"] = cfg.hp_true.alpha1;
  hp["alpha2"] = cfg.hp_true.alpha2;
  hp["d2"] = cfg.hp_true.d2;
  hp["beta_mass"] = cfg.hp_true.beta_mass;
  hp["mu_G"] = cfg.hp_true.mu_G;
  hp["tau_G2"] = cfg.hp_true.tau_G2;
  j["hp_true"] = hp;
  return j.dump(2) + "\n";
}

FitConfig read_fit_config(const sfs::path& file) {
  const ordered_json j = parse_json_file(file, "fit config");
  const std::string schema = json_get<std::string>(j, "schema", "fit config");
  if (schema != "stickydiff-fit-v1")
    throw validation_error("fit config: unsupported schema '" + schema + "'");
  FitConfig out;
  out.mcmc.burn_in = json_get<int>(j, "burn_in", "fit config");
  out.mcmc.samples = json_get<int>(j, "samples", "fit config");
  out.mcmc.thin = json_get<int>(j, "thin", "fit config");
  out.mcmc.truncation_L = json_get<int>(j, "truncation_L", "fit config");
  out.mcmc.seed = json_get<std::uint64_t>(j, "seed", "fit config");
  out.q0 = json_get<double>(j, "q0", "fit config");
  if (!(out.q0 > 0.0 && out.q0 < 1.0)) throw validation_error("fit config: q0 must lie in (0,1)");

  const std::string chi = j.value("chi_model", std::string("finite_mixture_3"));
  if (chi == "none")
    out.mcmc.chi_model = ChiModel::none;
  else if (chi == "iid_normal")
    out.mcmc.chi_model = ChiModel::iid_normal;
  else if (chi == "finite_mixture_3")
    out.mcmc.chi_model = ChiModel::finite_mixture_3;
  else
    throw validation_error("fit config: unknown chi_model '" + chi + "'");
  const std::string xi = j.value("xi_model", std::string("iid_normal"));
  if (xi == "iid_normal")
    out.mcmc.xi_model = XiModel::iid_normal;
  else if (xi == "dp_normal")
    out.mcmc.xi_model = XiModel::dp_normal;
  else
    throw validation_error("fit config: unknown xi_model '" + xi + "'");
  out.mcmc.include_chi = j.value("include_chi", true);
  out.mcmc.store_theta = j.value("store_theta", true);
  out.mcmc.clamp_eps = j.value("clamp_eps", 1e-6);
  out.mcmc.validate();
  return out;
}

void write_trace_csv(const sfs::path& file, const McmcResult& result) {
  std::string csv = "iteration,loglik,sigma2,rho1,gamma,eta,d2,q,n_diff,log_odds_eta\n";
  for (const PosteriorSample& s : result.samples) {
    csv += std::to_string(s.iteration) + "," + format_double(s.loglik) + "," +
           format_double(s.sigma2) + "," + format_double(s.rho1) + "," + format_double(s.gamma) +
           "," + format_double(s.eta) + "," + format_double(s.d2) + "," +
           std::to_string(s.q_clusters) + "," + std::to_string(s.n_diff) + "," +
           format_double(s.log_odds_eta) + "\n";
  }
  atomic_write(file, csv);
}

void write_posterior_summary(const sfs::path& file, const Dataset& data,
                             const PosteriorSummary& summary) {
  std::string tsv = "probe_id\tposition\tomega_hat\tcalled\tmax_pair\tdifference\tdirection\n";
  std::vector<const PairwiseRecord*> by_probe(data.n_probes(), nullptr);
  for (const PairwiseRecord& rec : summary.pairwise) by_probe[static_cast<std::size_t>(rec.probe)] = &rec;
  for (std::size_t j = 0; j < data.n_probes(); ++j) {
    tsv += data.probe_ids[j] + "\t" + std::to_string(data.positions[j]) + "\t" +
           format_double(summary.omega_hat[j]) + "\t" + (summary.called[j] ? "1" : "0");
    if (by_probe[j] != nullptr) {
      const PairwiseRecord& rec = *by_probe[j];
      tsv += "\t" + std::to_string(rec.t_high) + "-" + std::to_string(rec.t_low) + "\t" +
             format_double(rec.difference) + "\t" + std::to_string(rec.t_high) + "up," +
             std::to_string(rec.t_low) + "down";
    } else {
      tsv += "\tNA\tNA\tNA";
    }
    tsv += "\n";
  }
  atomic_write(file, tsv);
}

SummaryFile read_posterior_summary(const sfs::path& file) {
  const std::vector<std::string> lines = read_lines(file);
  if (lines.empty()) throw validation_error("posterior_summary.tsv: empty file");
  SummaryFile out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_tab(lines[i]);
    if (f.size() < 4) throw validation_error("posterior_summary.tsv: short row " + std::to_string(i + 1));
    out.probe_ids.push_back(f[0]);
    out.omega_hat.push_back(parse_double(f[2], "posterior_summary.tsv"));
    out.called.push_back(f[3] == "1");
  }
  return out;
}

void write_evidence_json(const sfs::path& file, const BfBound& order1_vs_order0,
                         const BfBound& order0_vs_order1, long trace_length) {
  ordered_json j;
  j["schema"] = "stickydiff-evidence-v1";
  j["trace_length"] = trace_length;
  j["log_bf_lower_bound_order1_vs_order0"] = {{"estimate", order1_vs_order0.estimate},
                                              {"mc_se", order1_vs_order0.mc_se}};
  j["log_bf_lower_bound_order0_vs_order1"] = {{"estimate", order0_vs_order1.estimate},
                                              {"mc_se", order0_vs_order1.mc_se}};
  atomic_write(file, j.dump(2) + "\n");
}

void write_diagnostics_json(const sfs::path& file, const TraceSummary& summary,
                            const McmcConfig& cfg, double q0) {
  ordered_json j;
  j["schema"] = "stickydiff-diagnostics-v1";
  j["burn_in"] = cfg.burn_in;
  j["samples"] = cfg.samples;
  j["thin"] = cfg.thin;
  j["q0"] = q0;
  j["block1_proposals"] = summary.block1_proposals;
  j["block1_accepts"] = summary.block1_accepts;
  j["block1_accept_rate"] = summary.block1_accept_rate;
  j["block2_rejection_exhaustions"] = summary.block2_rejection_exhaustions;
  atomic_write(file, j.dump(2) + "\n");
}

}  // namespace stickydiff::io
