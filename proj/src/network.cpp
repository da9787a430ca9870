#include "crn/network.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace crn {

void ReactionNetwork::validate() const {
  std::set<std::string> seen;
  for (const auto& name : species)
    if (!seen.insert(name).second)
      throw CrnError("duplicate species name '" + name + "'");
  for (std::size_t j = 0; j < reactions.size(); ++j) {
    const auto& r = reactions[j];
    if (r.source.size() != species.size() || r.target.size() != species.size())
      throw CrnError("reaction " + std::to_string(j + 1) +
                     ": multi-index length does not match species count");
    if (r.rate <= 0)
      throw CrnError("reaction " + std::to_string(j + 1) + ": nonpositive rate");
    if (r.source == r.target)
      throw ZeroColumnError("reaction " + std::to_string(j + 1) +
                            ": source equals target (gamma_j = 0)");
  }
}

StoichMatrix stoichiometry(const ReactionNetwork& net) {
  net.validate();
  StoichMatrix g;
  g.rows = net.n_species();
  g.cols = net.n_reactions();
  g.entries.assign(g.rows, std::vector<int>(g.cols, 0));
  for (std::size_t j = 0; j < g.cols; ++j) {
    auto col = net.reactions[j].change();
    bool all_zero = true;
    for (std::size_t i = 0; i < g.rows; ++i) {
      g.entries[i][j] = col[i];
      if (col[i] != 0) all_zero = false;
    }
    if (all_zero)
      throw ZeroColumnError("reaction " + std::to_string(j + 1) +
                            " has zero stoichiometry column");
  }
  return g;
}

namespace {

bool row_nonnegative(const std::vector<Integer>& r) {
  for (const auto& x : r)
    if (x < 0) return false;
  return true;
}

Integer negativity(const std::vector<Integer>& r) {
  Integer s = 0;
  for (const auto& x : r)
    if (x < 0) s -= x;
  return s;
}

// Greedy pivoting: repeatedly add positive multiples of other rows to a
// mixed-sign row while the total negativity strictly decreases.
bool normalize_nonnegative(std::vector<std::vector<Integer>>& rows) {
  for (auto& r : rows) {
    bool any_pos = false;
    for (const auto& x : r)
      if (x > 0) any_pos = true;
    if (!any_pos)
      for (auto& x : r) x = -x;
  }

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Integer neg = negativity(rows[i]);
      if (neg == 0) continue;
      for (std::size_t j = 0; j < rows.size() && neg > 0; ++j) {
        if (i == j) continue;
        // Try row_i and -row_i, each patched by the smallest multiple of
        // row_j that fixes the worst deficit row_j can fix.
        for (int sign : {1, -1}) {
          std::vector<Integer> base = rows[i];
          if (sign < 0)
            for (auto& x : base) x = -x;
          Integer best_t = 0;
          for (std::size_t c = 0; c < base.size(); ++c) {
            if (base[c] < 0 && rows[j][c] > 0) {
              Integer t = (-base[c] + rows[j][c] - 1) / rows[j][c];
              best_t = std::max(best_t, t);
            }
          }
          if (best_t == 0) continue;
          for (std::size_t c = 0; c < base.size(); ++c)
            base[c] += best_t * rows[j][c];
          if (negativity(base) < neg) {
            rows[i] = std::move(base);
            neg = negativity(rows[i]);
            progress = true;
          }
        }
      }
    }
  }
  for (const auto& r : rows)
    if (!row_nonnegative(r)) return false;
  return true;
}

}  // namespace

ConservationBasis conservation_basis(const StoichMatrix& gamma) {
  ConservationBasis basis;
  // Left nullspace of Gamma = nullspace of Gamma'.
  RatMatrix gt(gamma.cols, RatVector(gamma.rows));
  for (std::size_t i = 0; i < gamma.rows; ++i)
    for (std::size_t j = 0; j < gamma.cols; ++j)
      gt[j][i] = Rational(gamma.entries[i][j]);
  basis.gamma_rank = rat_rank(gt);
  auto ns = nullspace(gt);
  for (const auto& v : ns) basis.rows.push_back(primitive_integer_vector(v));
  basis.nonnegative = normalize_nonnegative(basis.rows);
  // Canonical order: by leading nonzero column.
  std::sort(basis.rows.begin(), basis.rows.end(),
            [](const std::vector<Integer>& a, const std::vector<Integer>& b) {
              auto lead = [](const std::vector<Integer>& r) {
                for (std::size_t c = 0; c < r.size(); ++c)
                  if (r[c] != 0) return c;
                return r.size();
              };
              std::size_t la = lead(a), lb = lead(b);
              return la != lb ? la < lb : a < b;
            });
  basis.exact = true;
  return basis;
}

ComplexInfo complexes(const ReactionNetwork& net) {
  net.validate();
  ComplexInfo info;
  std::map<MultiIndex, std::size_t> index;
  auto intern = [&](const MultiIndex& c) {
    auto it = index.find(c);
    if (it != index.end()) return it->second;
    std::size_t id = info.complexes.size();
    info.complexes.push_back(c);
    index.emplace(c, id);
    return id;
  };
  for (const auto& r : net.reactions) {
    info.source_of.push_back(intern(r.source));
    info.target_of.push_back(intern(r.target));
  }
  return info;
}

namespace {

std::vector<std::size_t> union_find_parent(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::size_t uf_find(std::vector<std::size_t>& p, std::size_t x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

void uf_union(std::vector<std::size_t>& p, std::size_t a, std::size_t b) {
  p[uf_find(p, a)] = uf_find(p, b);
}

// Tarjan-free SCC (Kosaraju), adjacency by index.
std::vector<std::size_t> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adj) {
  std::size_t n = adj.size();
  std::vector<std::vector<std::size_t>> radj(n);
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : adj[u]) radj[v].push_back(u);
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (visited[s]) continue;
    // iterative post-order
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    visited[s] = true;
    while (!stack.empty()) {
      auto& [u, idx] = stack.back();
      if (idx < adj[u].size()) {
        std::size_t v = adj[u][idx++];
        if (!visited[v]) {
          visited[v] = true;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<std::size_t> comp(n, SIZE_MAX);
  std::size_t ncomp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != SIZE_MAX) continue;
    std::vector<std::size_t> stack{*it};
    comp[*it] = ncomp;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (auto v : radj[u]) {
        if (comp[v] == SIZE_MAX) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }
  return comp;
}

}  // namespace

std::vector<std::vector<std::size_t>> linkage_classes(const ReactionNetwork& net) {
  auto info = complexes(net);
  auto parent = union_find_parent(info.complexes.size());
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    uf_union(parent, info.source_of[j], info.target_of[j]);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < info.complexes.size(); ++c)
    groups[uf_find(parent, c)].push_back(c);
  std::vector<std::vector<std::size_t>> classes;
  // first-appearance order of the representative's smallest member
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> tmp;
  for (auto& [rep, members] : groups)
    tmp.emplace_back(*std::min_element(members.begin(), members.end()),
                     std::move(members));
  std::sort(tmp.begin(), tmp.end());
  for (auto& [k, v] : tmp) classes.push_back(std::move(v));
  return classes;
}

bool weak_reversibility(const ReactionNetwork& net) {
  auto info = complexes(net);
  std::vector<std::vector<std::size_t>> adj(info.complexes.size());
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    adj[info.source_of[j]].push_back(info.target_of[j]);
  auto scc = strongly_connected_components(adj);
  // weakly reversible iff every weak component is a single SCC
  auto parent = union_find_parent(info.complexes.size());
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    uf_union(parent, info.source_of[j], info.target_of[j]);
  std::map<std::size_t, std::set<std::size_t>> comp_sccs;
  for (std::size_t c = 0; c < info.complexes.size(); ++c)
    comp_sccs[uf_find(parent, c)].insert(scc[c]);
  for (const auto& [rep, sccs] : comp_sccs)
    if (sccs.size() > 1) return false;
  return true;
}

long long deficiency(const ReactionNetwork& net) {
  auto info = complexes(net);
  auto classes = linkage_classes(net);
  auto gamma = stoichiometry(net);
  RatMatrix g(gamma.rows, RatVector(gamma.cols));
  for (std::size_t i = 0; i < gamma.rows; ++i)
    for (std::size_t j = 0; j < gamma.cols; ++j)
      g[i][j] = Rational(gamma.entries[i][j]);
  long long rank = static_cast<long long>(rat_rank(g));
  return static_cast<long long>(info.complexes.size()) -
         static_cast<long long>(classes.size()) - rank;
}

Rational rescaled_rate(const Reaction& r) {
  Rational denom = 1;
  for (std::size_t i = 0; i < r.source.size(); ++i)
    denom *= factorial(r.source[i]);
  return r.rate / denom;
}

Polynomial mass_action_propensity(const ReactionNetwork& net, std::size_t j) {
  const Reaction& r = net.reactions.at(j);
  std::size_t n = net.n_species();
  Polynomial p = Polynomial::constant(n, rescaled_rate(r));
  for (std::size_t i = 0; i < n; ++i) {
    for (int t = 0; t < r.source[i]; ++t) {
      // factor (k_i - t)
      Polynomial f = Polynomial::variable(n, i);
      f.add_term(MultiIndex(n), Rational(-t));
      p = p * f;
    }
  }
  return p;
}

FfnResult ffn_certificate(const ReactionNetwork& net) {
  net.validate();
  std::size_t n = net.n_species();
  FfnResult res;
  FfnCertificate cert;
  cert.reaction_layer.assign(net.n_reactions(), 0);

  std::vector<std::size_t> layered;  // non-degradation reaction indices
  for (std::size_t j = 0; j < net.n_reactions(); ++j) {
    if (net.reactions[j].is_degradation())
      cert.degradation_set.push_back(j);
    else
      layered.push_back(j);
  }

  // Group species changed by the same reaction.
  auto parent = union_find_parent(n);
  for (auto j : layered) {
    auto g = net.reactions[j].change();
    std::size_t first = SIZE_MAX;
    for (std::size_t i = 0; i < n; ++i) {
      if (g[i] == 0) continue;
      if (first == SIZE_MAX)
        first = i;
      else
        uf_union(parent, first, i);
    }
  }
  std::vector<std::size_t> group(n);
  std::map<std::size_t, std::size_t> rep_to_group;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rep = uf_find(parent, i);
    auto it = rep_to_group.find(rep);
    if (it == rep_to_group.end())
      it = rep_to_group.emplace(rep, rep_to_group.size()).first;
    group[i] = it->second;
  }
  std::size_t ngroups = rep_to_group.size();

  // Hard edges: reactant group -> changed group for order > 1 reactions.
  // Soft edges: catalyst group -> changed group for order <= 1 reactions
  // (used only to deepen the layering; cycles through them are harmless).
  std::set<std::pair<std::size_t, std::size_t>> hard, soft;
  std::vector<std::size_t> changed_group_of(net.n_reactions(), SIZE_MAX);
  for (auto j : layered) {
    const Reaction& r = net.reactions[j];
    auto g = r.change();
    std::size_t cg = SIZE_MAX;
    for (std::size_t i = 0; i < n; ++i)
      if (g[i] != 0) {
        cg = group[i];
        break;
      }
    changed_group_of[j] = cg;
    bool high_order = r.order() > 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (r.source[i] == 0) continue;
      if (high_order)
        hard.insert({group[i], cg});
      else if (g[i] == 0)
        soft.insert({group[i], cg});
    }
  }

  std::vector<std::vector<std::size_t>> adj(ngroups);
  for (const auto& [a, b] : hard) adj[a].push_back(b);
  for (const auto& [a, b] : soft)
    if (!hard.count({a, b})) adj[a].push_back(b);
  auto scc = strongly_connected_components(adj);
  for (const auto& [a, b] : hard) {
    if (scc[a] == scc[b]) {
      res.reason = "precedence cycle through species groups " +
                   std::to_string(a) + " and " + std::to_string(b) +
                   " (a higher-order reaction changes its own reactants)";
      return res;
    }
  }

  // Longest-path layering on the condensation (deepest valid layering).
  std::size_t nscc = 0;
  for (auto c : scc) nscc = std::max(nscc, c + 1);
  std::vector<std::set<std::size_t>> cadj(nscc);
  std::vector<std::size_t> indeg(nscc, 0);
  for (std::size_t u = 0; u < ngroups; ++u)
    for (auto v : adj[u])
      if (scc[u] != scc[v] && cadj[scc[u]].insert(scc[v]).second) ++indeg[scc[v]];
  std::vector<int> level(nscc, 1);
  std::vector<std::size_t> queue;
  for (std::size_t c = 0; c < nscc; ++c)
    if (indeg[c] == 0) queue.push_back(c);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    for (auto v : cadj[u]) {
      level[v] = std::max(level[v], level[u] + 1);
      if (--indeg[v] == 0) queue.push_back(v);
    }
  }

  cert.species_layer.assign(n, 1);
  cert.n_layers = 1;
  for (std::size_t i = 0; i < n; ++i) {
    cert.species_layer[i] = level[scc[group[i]]];
    cert.n_layers = std::max(cert.n_layers, cert.species_layer[i]);
  }
  for (auto j : layered)
    cert.reaction_layer[j] = level[scc[changed_group_of[j]]];

  // Verify the layering conditions directly.
  for (auto j : layered) {
    const Reaction& r = net.reactions[j];
    int pi = cert.reaction_layer[j];
    auto g = r.change();
    if (pi == 1 && r.order() > 1) {
      res.reason = "layer-1 reaction " + std::to_string(j + 1) +
                   " has order > 1";
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (g[i] != 0 && cert.species_layer[i] != pi) {
        res.reason = "reaction " + std::to_string(j + 1) +
                     " changes species outside its layer";
        return res;
      }
      if (r.order() > 1 && r.source[i] != 0 && cert.species_layer[i] >= pi) {
        res.reason = "higher-order reaction " + std::to_string(j + 1) +
                     " has reactant '" + net.species[i] +
                     "' not in an earlier layer";
        return res;
      }
    }
  }
  res.certificate = std::move(cert);
  return res;
}

PropensityNetwork to_propensity_network(const ReactionNetwork& net) {
  net.validate();
  PropensityNetwork pn;
  pn.species = net.species;
  for (std::size_t j = 0; j < net.n_reactions(); ++j)
    pn.reactions.push_back({mass_action_propensity(net, j),
                            net.reactions[j].change()});
  return pn;
}

PropensityNetwork reduce_by_conservation(const ReactionNetwork& net,
                                         const std::vector<Integer>& law_row,
                                         const Integer& beta,
                                         std::size_t eliminated) {
  auto gamma = stoichiometry(net);
  if (law_row.size() != gamma.rows)
    throw CrnError("conservation row length mismatch");
  for (std::size_t j = 0; j < gamma.cols; ++j) {
    Integer dot = 0;
    for (std::size_t i = 0; i < gamma.rows; ++i)
      dot += law_row[i] * gamma.entries[i][j];
    if (dot != 0)
      throw NotConservedError("law row does not annihilate stoichiometry column " +
                              std::to_string(j + 1));
  }
  if (law_row.at(eliminated) != 1)
    throw BadCoefficientError("coefficient on eliminated species must be 1");

  std::size_t n = net.n_species();
  Polynomial repl = Polynomial::constant(n, Rational(beta));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == eliminated || law_row[i] == 0) continue;
    repl = repl + Polynomial::variable(n, i) * Rational(-law_row[i]);
  }

  PropensityNetwork pn;
  for (std::size_t i = 0; i < n; ++i)
    if (i != eliminated) pn.species.push_back(net.species[i]);
  for (std::size_t j = 0; j < net.n_reactions(); ++j) {
    Polynomial prop = mass_action_propensity(net, j)
                          .substitute(eliminated, repl)
                          .drop_variable(eliminated);
    auto full_change = net.reactions[j].change();
    std::vector<int> change;
    change.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      if (i != eliminated) change.push_back(full_change[i]);
    pn.reactions.push_back({std::move(prop), std::move(change)});
  }
  return pn;
}

}  // namespace crn
