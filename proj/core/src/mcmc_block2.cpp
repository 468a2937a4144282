#include <cmath>
#include <vector>

#include "mcmc_internal.hpp"
#include "stickydiff/logmath.hpp"

namespace stickydiff {

// Gibbs update of the latent vector elements given the probe-cluster
// allocations. The update walks the tables (the structural blocks of the
// state): a table's dish moves all of its probes' effects together, one
// element at a time over the atoms of the current G*. Grouping by dish-value
// equality instead would merge same-valued tables irreversibly, so tables
// sharing a dish are updated separately and may split. Differential elements
// are drawn by rejection against the restricted support (no all-equal
// vectors).
long block2_update(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  (void)cfg;
  detail::Workspace ws;
  ws.build(data, state.xi, state.chi);

  FranchiseState& fs = state.franchise;
  const int T = fs.T;
  const HyperParams& hp = state.hp;
  const BaseMeasureG& g = state.g_star;
  const std::size_t L = g.size();
  const double n_total = static_cast<double>(ws.n);

  std::vector<double> log_pi(L);
  for (std::size_t l = 0; l < L; ++l) log_pi[l] = std::log(g.weights[l]);

  // probes per (section, table)
  std::array<std::array<std::vector<std::vector<int>>, 2>, 2> members;
  for (int gi = 1; gi <= 2; ++gi)
    for (int si = 1; si <= 2; ++si)
      members[static_cast<std::size_t>(gi - 1)][static_cast<std::size_t>(si - 1)]
          .assign(fs.section(gi, si).tables.size(), {});
  for (int j = 0; j < fs.p; ++j)
    members[fs.g[static_cast<std::size_t>(j)] - 1u][fs.s[static_cast<std::size_t>(j)] - 1u]
        [static_cast<std::size_t>(fs.v[static_cast<std::size_t>(j)])]
            .push_back(j);

  long exhaustions = 0;
  std::vector<double> logw(L);
  constexpr int rejection_cap = 1000;

  for (int gi = 1; gi <= 2; ++gi) {
    for (int si = 1; si <= 2; ++si) {
      Section& sec = fs.section(gi, si);
      for (std::size_t k = 0; k < sec.tables.size(); ++k) {
        const std::vector<int>& probes =
            members[static_cast<std::size_t>(gi - 1)][static_cast<std::size_t>(si - 1)][k];
        const double m_k = static_cast<double>(probes.size());
        Table& table = sec.tables[k];

        if (si == 1) {
          double sum = 0.0;
          for (int j : probes)
            for (int t = 0; t < T; ++t) sum += ws.a(j, t);
          const double y_bar = sum / (n_total * m_k);
          const double like_var = hp.sigma2 / (n_total * m_k);
          for (std::size_t l = 0; l < L; ++l)
            logw[l] = log_pi[l] + log_normal_pdf(y_bar, g.atoms[l], like_var);
          const double psi = g.atoms[rng.categorical_log(logw)];
          table.dish.assign(static_cast<std::size_t>(T), psi);
        } else {
          for (int t = 0; t < T; ++t) {
            double sum = 0.0;
            for (int j : probes) sum += ws.a(j, t);
            const double n_t = static_cast<double>(ws.n_t[static_cast<std::size_t>(t)]);
            const double y_bar = sum / (n_t * m_k);
            const double like_var = hp.sigma2 / (n_t * m_k);

            // restricted support A_t: when every other element ties, the new
            // value must not complete an all-equal vector
            bool others_tied = true;
            double tied_value = 0.0;
            bool first = true;
            for (int t2 = 0; t2 < T; ++t2) {
              if (t2 == t) continue;
              if (first) {
                tied_value = table.dish[static_cast<std::size_t>(t2)];
                first = false;
              } else if (table.dish[static_cast<std::size_t>(t2)] != tied_value) {
                others_tied = false;
                break;
              }
            }

            for (std::size_t l = 0; l < L; ++l)
              logw[l] = log_pi[l] + log_normal_pdf(y_bar, g.atoms[l], like_var);
            bool updated = false;
            for (int attempt = 0; attempt < rejection_cap; ++attempt) {
              const double candidate = g.atoms[rng.categorical_log(logw)];
              if (!(others_tied && candidate == tied_value)) {
                table.dish[static_cast<std::size_t>(t)] = candidate;
                updated = true;
                break;
              }
            }
            if (!updated) ++exhaustions;  // keep the current value
          }
        }
      }
    }
  }
  return exhaustions;
}

}  // namespace stickydiff
