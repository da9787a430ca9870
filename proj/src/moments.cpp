#include "crn/moments.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <map>

namespace crn {

Polynomial delta_poly(const Polynomial& m, const std::vector<int>& gamma) {
  return m.shifted(gamma) - m;
}

Polynomial moment_derivative(const PropensityNetwork& net, const MultiIndex& u) {
  Polynomial total;
  Polynomial mono = Polynomial::monomial(u);
  for (const auto& r : net.reactions)
    total = total + r.propensity * delta_poly(mono, r.change);
  return total;
}

ClosureResult closure(const PropensityNetwork& net,
                      const std::vector<MultiIndex>& targets,
                      std::size_t cap) {
  ClosureResult res;
  std::map<MultiIndex, bool> known;  // value: expanded yet
  std::vector<MultiIndex> queue;
  Polynomial dummy;
  for (const auto& t : targets) {
    if (t.is_zero()) {
      res.basis.includes_constant = true;
      continue;
    }
    if (known.emplace(t, false).second) {
      res.basis.indices.push_back(t);
      queue.push_back(t);
    }
  }
  std::size_t qi = 0;
  while (qi < queue.size()) {
    if (res.basis.indices.size() > cap) {
      res.cap_exceeded = true;
      res.frontier.assign(queue.begin() + static_cast<long>(qi), queue.end());
      return res;
    }
    MultiIndex u = queue[qi++];
    Polynomial mono = Polynomial::monomial(u);
    // Per-reaction expansion keeps discovery order deterministic: reaction
    // index first, then lexicographic monomial order within a reaction.
    for (const auto& r : net.reactions) {
      Polynomial contrib = r.propensity * delta_poly(mono, r.change);
      for (const auto& [v, c] : contrib.terms()) {
        if (v.is_zero()) {
          res.basis.includes_constant = true;
          continue;
        }
        if (known.emplace(v, false).second) {
          res.basis.indices.push_back(v);
          queue.push_back(v);
        }
      }
    }
  }
  return res;
}

LinearMomentSystem assemble(const PropensityNetwork& net, const MomentBasis& basis) {
  LinearMomentSystem sys;
  sys.basis = basis;
  std::size_t n = basis.indices.size();
  sys.A.assign(n, RatVector(n, Rational(0)));
  sys.b.assign(n, Rational(0));
  std::map<MultiIndex, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos.emplace(basis.indices[i], i);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial d = moment_derivative(net, basis.indices[i]);
    for (const auto& [v, c] : d.terms()) {
      if (v.is_zero()) {
        sys.b[i] += c;
        continue;
      }
      auto it = pos.find(v);
      if (it == pos.end())
        throw NotClosedError("derivative of " + basis.indices[i].str() +
                             " produces moment " + v.str() +
                             " outside the basis");
      sys.A[i][it->second] += c;
    }
  }
  return sys;
}

SteadyState steady_state(const LinearMomentSystem& sys) {
  RatVector rhs(sys.b.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -sys.b[i];
  auto sol = solve_linear(sys.A, rhs);
  if (!sol.consistent)
    throw InconsistentError("A x + b = 0 has no solution");
  SteadyState ss;
  ss.values = std::move(sol.particular);
  ss.nullspace = std::move(sol.nullspace);
  ss.unique = ss.nullspace.empty();
  return ss;
}

std::vector<std::vector<double>> transient(const LinearMomentSystem& sys,
                                           const std::vector<double>& x0,
                                           const std::vector<double>& times) {
  const std::size_t n = sys.b.size();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = to_double(sys.A[i][j]);
    aug(i, n) = to_double(sys.b[i]);
  }
  Eigen::VectorXd v0(n + 1);
  for (std::size_t i = 0; i < n; ++i) v0(i) = x0.at(i);
  v0(n) = 1.0;
  std::vector<std::vector<double>> out;
  for (double t : times) {
    Eigen::MatrixXd e = (aug * t).exp();
    Eigen::VectorXd xt = e * v0;
    out.emplace_back(xt.data(), xt.data() + n);
  }
  return out;
}

}  // namespace crn
