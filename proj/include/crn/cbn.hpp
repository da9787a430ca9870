#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crn/network.hpp"

namespace crn {

struct FiberNotFiniteError : CrnError {
  using CrnError::CrnError;
};
struct EmptyFiberError : CrnError {
  using CrnError::CrnError;
};

struct BalanceCheck {
  bool balanced = false;
  std::vector<double> relative_defects;  // per complex
  std::size_t worst_complex = 0;
  double tolerance = 0.0;
};

/// Per-complex Kirchhoff balance with exact rationals (tolerance 0).
BalanceCheck verify_complex_balance(const ReactionNetwork& net,
                                    const std::vector<Rational>& lambda);

BalanceCheck verify_complex_balance(const ReactionNetwork& net,
                                    const std::vector<double>& lambda,
                                    double tol);

struct CbEquilibrium {
  std::vector<double> lambda;
  BalanceCheck check;
};

/// Weakly reversible deficiency-zero networks: per linkage class, the
/// positive kernel of the weighted complex Laplacian fixes complex weights,
/// and a minimum-norm log-linear solve recovers lambda. Other networks fall
/// back to damped Gauss-Newton on the balance defects. Empty result means
/// no certificate was found.
std::optional<CbEquilibrium> solve_complex_balance(const ReactionNetwork& net,
                                                   double tol = 1e-12);

namespace detail {
template <typename S>
S scalar_pow(const S& base, long long e) {
  S r(1);
  for (long long i = 0; i < e; ++i) r = r * base;
  return r;
}
template <typename S>
S scalar_factorial(long long n) {
  S r(1);
  for (long long i = 2; i <= n; ++i) r = r * S(static_cast<int>(i));
  return r;
}
}  // namespace detail

template <typename S>
struct ConditionalDistributionT {
  std::vector<std::size_t> species;                // constrained species indices
  std::vector<std::vector<long long>> support;     // counts for those species
  std::vector<S> probabilities;
};

template <typename S>
struct ConditionalMomentsT {
  S mean;
  S second_moment;
  S variance;
};

/// Memoized partition function Z(beta) = sum over the fiber {k >= 0 :
/// A k = beta} of prod lambda_i^{k_i} / k_i!. Species whose A-column is
/// zero contribute a separate e^{lambda_i} factor that cancels in every
/// conditional quantity and is therefore kept out of Z.
template <typename S>
class PartitionTableT {
 public:
  PartitionTableT(std::vector<std::vector<Integer>> a, std::vector<S> lambda)
      : a_(std::move(a)), lambda_(std::move(lambda)) {
    if (!a_.empty()) n_ = a_[0].size();
    m_ = a_.size();
    if (lambda_.size() != n_) throw CrnError("lambda length mismatch");
    for (const auto& row : a_)
      for (const auto& x : row)
        if (x < 0)
          throw FiberNotFiniteError("signed conservation matrix rejected");
    for (std::size_t j = 0; j < n_; ++j) {
      bool zero = true;
      for (std::size_t i = 0; i < m_; ++i)
        if (a_[i][j] != 0) zero = false;
      if (zero)
        unconstrained_.push_back(j);
      else
        constrained_.push_back(j);
    }
  }

  const std::vector<std::vector<Integer>>& basis() const { return a_; }
  const std::vector<S>& lambda() const { return lambda_; }
  const std::vector<std::size_t>& constrained_species() const { return constrained_; }
  const std::vector<std::size_t>& unconstrained_species() const { return unconstrained_; }
  const std::map<std::vector<long long>, S>& memo() const { return memo_; }

  /// Exponents of the e^{lambda_i} factors left out of Z.
  std::vector<S> unconstrained_factor_exponents() const {
    std::vector<S> e;
    for (auto j : unconstrained_) e.push_back(lambda_[j]);
    return e;
  }

  /// Recursion beta_m Z(beta) = sum_j lambda_j alpha_{mj} Z(beta - A_j),
  /// m = smallest coordinate with beta_m > 0.
  S z(const std::vector<long long>& beta) {
    if (beta.size() != m_) throw CrnError("beta length mismatch");
    for (long long b : beta)
      if (b < 0) return S(0);
    auto it = memo_.find(beta);
    if (it != memo_.end()) return it->second;
    bool all_zero = true;
    std::size_t m = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (beta[i] > 0) {
        all_zero = false;
        m = i;
        break;
      }
    S value(all_zero ? 1 : 0);
    if (!all_zero) {
      S sum(0);
      for (auto j : constrained_) {
        if (a_[m][j] == 0) continue;
        std::vector<long long> shifted = beta;
        bool neg = false;
        for (std::size_t i = 0; i < m_; ++i) {
          shifted[i] -= a_[i][j].convert_to<long long>();
          if (shifted[i] < 0) neg = true;
        }
        if (neg) continue;
        sum = sum + lambda_[j] * S(a_[m][j].convert_to<int>()) * z(shifted);
      }
      value = sum / S(static_cast<int>(beta[m]));
    }
    memo_.emplace(beta, value);
    return value;
  }

  /// Brute-force fiber enumeration over the constrained species.
  std::vector<std::vector<long long>> enumerate_fiber(
      const std::vector<long long>& beta) const {
    std::vector<std::vector<long long>> states;
    std::vector<long long> k(constrained_.size(), 0);
    enumerate_rec(beta, 0, k, states);
    return states;
  }

  /// Direct-sum oracle for Z, independent of the recursion.
  S z_by_enumeration(const std::vector<long long>& beta) const {
    S total(0);
    for (const auto& k : enumerate_fiber(beta)) total = total + weight(k);
    return total;
  }

  /// p_k = lambda^k / (k! Z(beta)) on the fiber.
  ConditionalDistributionT<S> stationary_distribution(
      const std::vector<long long>& beta) {
    ConditionalDistributionT<S> dist;
    dist.species = constrained_;
    dist.support = enumerate_fiber(beta);
    S norm = z(beta);
    if (norm == S(0)) throw EmptyFiberError("Z(beta) = 0: empty fiber");
    for (const auto& k : dist.support)
      dist.probabilities.push_back(weight(k) / norm);
    return dist;
  }

  /// lambda_j^r Z(beta - r A_j) / Z(beta); zero when some beta_i - r a_ij < 0.
  S conditional_factorial_moment(const std::vector<long long>& beta,
                                 std::size_t j, long long r) {
    S norm = z(beta);
    if (norm == S(0)) throw EmptyFiberError("Z(beta) = 0: empty fiber");
    std::vector<long long> shifted = beta;
    for (std::size_t i = 0; i < m_; ++i) {
      shifted[i] -= r * a_[i][j].convert_to<long long>();
      if (shifted[i] < 0) return S(0);
    }
    return detail::scalar_pow(lambda_[j], r) * z(shifted) / norm;
  }

  ConditionalMomentsT<S> conditional_moments(const std::vector<long long>& beta,
                                             std::size_t j) {
    ConditionalMomentsT<S> m;
    m.mean = conditional_factorial_moment(beta, j, 1);
    m.second_moment = conditional_factorial_moment(beta, j, 2) + m.mean;
    m.variance = m.second_moment - m.mean * m.mean;
    return m;
  }

  /// Distribution of S_j on the fiber; j must be a constrained species
  /// (unconstrained species are plain Poisson(lambda_j) marginals).
  std::vector<S> conditional_marginal(const std::vector<long long>& beta,
                                      std::size_t j) {
    std::size_t local = SIZE_MAX;
    for (std::size_t t = 0; t < constrained_.size(); ++t)
      if (constrained_[t] == j) local = t;
    if (local == SIZE_MAX)
      throw CrnError("conditional_marginal: species is unconstrained (Poisson)");
    auto dist = stationary_distribution(beta);
    long long max_k = 0;
    for (const auto& k : dist.support) max_k = std::max(max_k, k[local]);
    std::vector<S> marginal(static_cast<std::size_t>(max_k) + 1, S(0));
    for (std::size_t s = 0; s < dist.support.size(); ++s)
      marginal[static_cast<std::size_t>(dist.support[s][local])] =
          marginal[static_cast<std::size_t>(dist.support[s][local])] +
          dist.probabilities[s];
    return marginal;
  }

 private:
  S weight(const std::vector<long long>& k) const {
    S w(1);
    for (std::size_t t = 0; t < constrained_.size(); ++t) {
      std::size_t j = constrained_[t];
      w = w * detail::scalar_pow(lambda_[j], k[t]) /
          detail::scalar_factorial<S>(k[t]);
    }
    return w;
  }

  void enumerate_rec(const std::vector<long long>& beta, std::size_t t,
                     std::vector<long long>& k,
                     std::vector<std::vector<long long>>& out) const {
    if (t == constrained_.size()) {
      for (long long b : beta)
        if (b != 0) return;
      out.push_back(k);
      return;
    }
    std::size_t j = constrained_[t];
    long long ub = -1;
    for (std::size_t i = 0; i < m_; ++i) {
      if (a_[i][j] == 0) continue;
      long long lim = beta[i] / a_[i][j].convert_to<long long>();
      ub = (ub < 0) ? lim : std::min(ub, lim);
    }
    std::vector<long long> rest = beta;
    for (long long v = 0; v <= ub; ++v) {
      if (v > 0)
        for (std::size_t i = 0; i < m_; ++i)
          rest[i] -= a_[i][j].convert_to<long long>();
      bool neg = false;
      for (long long b : rest)
        if (b < 0) neg = true;
      if (neg) break;
      k[t] = v;
      enumerate_rec(rest, t + 1, k, out);
    }
    k[t] = 0;
  }

  std::vector<std::vector<Integer>> a_;  // m x n
  std::vector<S> lambda_;
  std::size_t n_ = 0, m_ = 0;
  std::vector<std::size_t> constrained_, unconstrained_;
  std::map<std::vector<long long>, S> memo_;
};

using PartitionTable = PartitionTableT<Rational>;

/// Z(p, n+2) = K/(n+2) Z(p,n) + (-Kn+Kp-K+1)/(n+2) Z(p,n+1) for the
/// binding network S1+S2 <-> S3 with lambda = (1,1,K).
bool verify_mvpoisson_recursion(PartitionTable& table, long long p, long long n);

}  // namespace crn
