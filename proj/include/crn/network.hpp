#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crn/linalg.hpp"
#include "crn/multi_index.hpp"
#include "crn/polynomial.hpp"
#include "crn/rational.hpp"

namespace crn {

struct ZeroColumnError : CrnError {
  using CrnError::CrnError;
};
struct NotConservedError : CrnError {
  using CrnError::CrnError;
};
struct BadCoefficientError : CrnError {
  using CrnError::CrnError;
};

struct Reaction {
  MultiIndex source;  // a_j
  MultiIndex target;  // b_j
  Rational rate;      // kappa_j > 0

  long long order() const { return source.order(); }

  /// Net change b_j - a_j.
  std::vector<int> change() const {
    std::vector<int> g(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) g[i] = target[i] - source[i];
    return g;
  }

  /// Source is a unit vector and target is zero.
  bool is_degradation() const {
    return source.order() == 1 && target.is_zero();
  }

  bool operator==(const Reaction& o) const {
    return source == o.source && target == o.target && rate == o.rate;
  }
};

struct ReactionNetwork {
  std::vector<std::string> species;
  std::vector<Reaction> reactions;

  std::size_t n_species() const { return species.size(); }
  std::size_t n_reactions() const { return reactions.size(); }
  bool operator==(const ReactionNetwork& o) const {
    return species == o.species && reactions == o.reactions;
  }
  /// Throws on duplicate species names, mismatched index lengths,
  /// nonpositive rates or a_j = b_j.
  void validate() const;
};

struct StoichMatrix {
  std::size_t rows = 0;  // species
  std::size_t cols = 0;  // reactions
  std::vector<std::vector<int>> entries;

  std::vector<int> column(std::size_t j) const {
    std::vector<int> c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = entries[i][j];
    return c;
  }
  bool operator==(const StoichMatrix& o) const {
    return rows == o.rows && cols == o.cols && entries == o.entries;
  }
};

struct ConservationBasis {
  std::vector<std::vector<Integer>> rows;  // m x n
  bool nonnegative = false;
  bool exact = true;  // rows span the full left nullspace
  std::size_t gamma_rank = 0;

  std::size_t size() const { return rows.size(); }
};

struct FfnCertificate {
  std::vector<int> species_layer;          // per species, 1-based
  std::vector<int> reaction_layer;         // per reaction; 0 for degradations
  std::vector<std::size_t> degradation_set;
  int n_layers = 0;
};

struct FfnResult {
  std::optional<FfnCertificate> certificate;
  std::string reason;  // set when NotFFN: the violating cycle or reaction
  bool ok() const { return certificate.has_value(); }
};

/// Network whose kinetics are already expanded polynomials; the common
/// form shared by as-parsed mass-action networks and conservation-reduced
/// ones.
struct PropensityReaction {
  Polynomial propensity;
  std::vector<int> change;
};

struct PropensityNetwork {
  std::vector<std::string> species;
  std::vector<PropensityReaction> reactions;
};

// --- structural operations -------------------------------------------------

StoichMatrix stoichiometry(const ReactionNetwork& net);

/// Integer basis of the left nullspace of Gamma, rescaled to nonnegative
/// rows when the greedy pivoting search finds such a basis.
ConservationBasis conservation_basis(const StoichMatrix& gamma);

struct ComplexInfo {
  std::vector<MultiIndex> complexes;     // deduplicated, in first-appearance order
  std::vector<std::size_t> source_of;    // reaction -> complex index
  std::vector<std::size_t> target_of;
};

ComplexInfo complexes(const ReactionNetwork& net);

std::vector<std::vector<std::size_t>> linkage_classes(const ReactionNetwork& net);
bool weak_reversibility(const ReactionNetwork& net);
long long deficiency(const ReactionNetwork& net);

/// kappa_j * prod_i C(k_i, a_ij) expanded exactly; the Heaviside guard is
/// applied at evaluation sites, not here.
Polynomial mass_action_propensity(const ReactionNetwork& net, std::size_t j);

/// kappa_j / prod_i a_ij!.
Rational rescaled_rate(const Reaction& r);

FfnResult ffn_certificate(const ReactionNetwork& net);

PropensityNetwork to_propensity_network(const ReactionNetwork& net);

/// Substitute k_i = beta - sum_{i' != i} alpha_{i'} k_{i'} into every
/// expanded propensity and drop species i.
PropensityNetwork reduce_by_conservation(const ReactionNetwork& net,
                                         const std::vector<Integer>& law_row,
                                         const Integer& beta,
                                         std::size_t eliminated);

}  // namespace crn
