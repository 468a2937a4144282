#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "stickydiff/rng.hpp"

namespace stickydiff {

// Full parameter vector of the two-restaurant two-cuisine franchise.
struct HyperParams {
  double rho1 = 0.9;     // baseline non-differential proportion, in (0.5, 1)
  double gamma = 0.9;    // speciality-cuisine popularity, in (0, 1)
  double eta = 0.0;      // dependence parameter, 0 or in (0, -1/log gamma)
  double alpha1 = 20.0;  // PYP mass, cuisine 1
  double alpha2 = 20.0;  // PYP mass, cuisine 2
  double d1 = 0.0;       // fixed at 0 (Dirichlet process for cuisine 1)
  double d2 = 0.0;       // discount for cuisine 2, in [0, 1)
  double beta_mass = 20.0;  // DP mass of the base distribution G
  double mu_G = 0.0;
  double tau_G2 = 1.0;
  double sigma2 = 1.0;     // observation variance
  double tau_eps2 = 1.0;   // subject-effect variance

  double rho2() const { return 1.0 - rho1; }
  double alpha(int s) const { return s == 1 ? alpha1 : alpha2; }
  double discount(int s) const { return s == 1 ? d1 : d2; }
  // Upper end of the valid eta slab for the current gamma.
  double eta_slab_width() const;

  void validate() const;  // throws validation_error
};

// Truncated realization of the discrete base distribution G.
struct BaseMeasureG {
  std::vector<double> atoms;    // pairwise distinct
  std::vector<double> weights;  // positive, sum to 1

  std::size_t size() const { return atoms.size(); }
  void validate() const;
  // Index of an atom exactly equal to `value`, or -1.
  long index_of(double value) const;
  double sample_atom(Rng& rng) const;
};

// Stick-breaking realization of DP(beta_mass, N(mu, tau2)) truncated at L
// atoms (the last stick takes the remaining mass).
BaseMeasureG stick_breaking_realization(double beta_mass, double mu, double tau2, int L, Rng& rng);

// A table in one restaurant section, holding its dish and occupancy.
struct Table {
  std::vector<double> dish;  // T elements
  int occupancy = 0;
};

// One (restaurant, cuisine) section: tables labelled by order of first
// occupancy, empty tables compacted away.
struct Section {
  std::vector<Table> tables;
  int customers = 0;  // sum of occupancies

  std::vector<int> occupancies() const;
};

// Complete seating state of the franchise: per-probe restaurant g_j, cuisine
// s_j, table v_j (index into the section's table list), dishes held by the
// tables. theta_j is the dish at (g_j, s_j, v_j).
struct FranchiseState {
  int p = 0;
  int T = 0;
  std::vector<std::uint8_t> g;  // values 1/2
  std::vector<std::uint8_t> s;  // values 1/2
  std::vector<int> v;
  std::array<std::array<Section, 2>, 2> sections;  // [g-1][s-1]

  Section& section(int gi, int si) { return sections[gi - 1][si - 1]; }
  const Section& section(int gi, int si) const { return sections[gi - 1][si - 1]; }
  const std::vector<double>& theta(int j) const {
    return section(g[j], s[j]).tables[static_cast<std::size_t>(v[j])].dish;
  }
  int total_tables() const;

  // Seats probe j at table `table` of section (gi,si); table == size appends
  // a new table with `dish`.
  void seat(int j, int gi, int si, int table, const std::vector<double>& dish);
  // Removes probe j from its table, compacting the table away if emptied
  // (labels of later tables shift down by one).
  void unseat(int j);

  // Throws on violation of any structural invariant; `strict_menu` also
  // checks the all-equal/not-all-equal menu conditions of the dishes.
  void check_invariants(bool strict_menu = true) const;
};

// Eq.-style primitives --------------------------------------------------

// exp(-e/eta), with the eta == 0 convention of returning 0.
double affinity(double e, double eta);

// Probability that a customer selects restaurant 1 given the previous
// customer's cuisine and the affinity r.
double restaurant_prob(int s_prev, double r, const HyperParams& hp);

// Probability that a restaurant-g customer selects cuisine 1.
double cuisine_prob(int g, const HyperParams& hp);

// Predictive distribution over the M occupied tables plus one new table.
std::vector<double> table_predictive(std::span<const int> occupancies, double alpha_s, double d_s);

// Draws a dish from menu W_1 (all-equal) or W_2 (not all equal) over G.
std::vector<double> sample_dish(int s, const BaseMeasureG& G, int T, Rng& rng);

// Forward simulation of the franchise prior for p probes.
FranchiseState simulate_franchise(int p, std::span<const double> distances,
                                  const HyperParams& hp, const BaseMeasureG& G, int T, Rng& rng);

// Latent clusters: probes grouped by exact dish equality.
struct ClusterSet {
  std::vector<int> allocation;             // c_j in 0..q-1
  std::vector<std::vector<int>> members;   // probes per cluster
  std::vector<std::vector<double>> dishes; // latent vector per cluster
  std::vector<int> cuisine;                // shared cuisine (1 or 2) per cluster
  std::vector<int> table_count;            // tables serving the cluster's dish
  std::vector<std::vector<std::array<int, 3>>> table_refs;  // (g, s, table index)

  std::size_t size() const { return members.size(); }
};

ClusterSet extract_clusters(const FranchiseState& fs);

inline bool all_equal(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] != xs[0]) return false;
  return true;
}

}  // namespace stickydiff
