#include <doctest.h>

#include <cmath>
#include <random>

#include "crn/cbn.hpp"
#include "helpers.hpp"

using namespace crn;
using namespace crn::testing;

namespace {

std::vector<std::vector<Integer>> binding_basis() {
  return {{1, 0, 1}, {0, 1, 1}};
}

Rational q_weight(const std::vector<Rational>& lambda,
                  const std::vector<long long>& k) {
  Rational w = 1;
  for (std::size_t i = 0; i < k.size(); ++i)
    w *= detail::scalar_pow(lambda[i], k[i]) / factorial(k[i]);
  return w;
}

Rational propensity_at(const ReactionNetwork& net, std::size_t j,
                       const std::vector<long long>& k) {
  Rational v = net.reactions[j].rate;
  for (std::size_t i = 0; i < k.size(); ++i) {
    int a = net.reactions[j].source[i];
    if (a == 0) continue;
    v *= Rational(falling_factorial(k[i], a)) / factorial(a);
  }
  return v;
}

// Steady-state master-equation residual at k for the unnormalized weights
// q_k = lambda^k / k!; zero at every k is the definitive balance check.
Rational sscme_residual(const ReactionNetwork& net,
                        const std::vector<Rational>& lambda,
                        const std::vector<long long>& k) {
  Rational r = 0;
  for (std::size_t j = 0; j < net.n_reactions(); ++j) {
    auto gamma = net.reactions[j].change();
    std::vector<long long> prev = k;
    bool ok = true;
    for (std::size_t i = 0; i < k.size(); ++i) {
      prev[i] -= gamma[i];
      if (prev[i] < 0) ok = false;
    }
    if (ok) r += propensity_at(net, j, prev) * q_weight(lambda, prev);
    r -= propensity_at(net, j, k) * q_weight(lambda, k);
  }
  return r;
}

Rational binom(long long n, long long r) {
  if (r < 0 || r > n) return 0;
  return Rational(falling_factorial(n, r)) / factorial(r);
}

}  // namespace

TEST_CASE("binding network balances at lambda = (1,1,K)") {
  Rational k1(5, 2), k2(7, 3);
  auto check = verify_complex_balance(binding_network(k1, k2),
                                      std::vector<Rational>{1, 1, k1 / k2});
  CHECK(check.balanced);
}

TEST_CASE("birth-binding network balances at the paper equilibrium") {
  Rational k1(3), k2(2), k3(5, 2), k4(7);
  Rational l = k1 / k2, mu = k1 * k3 / (k2 * k4);
  auto check = verify_complex_balance(birth_binding_network(k1, k2, k3, k4),
                                      std::vector<Rational>{l, 1, mu});
  CHECK(check.balanced);
}

TEST_CASE("perturbed equilibrium is rejected") {
  Rational k1(3), k2(2);
  auto check = verify_complex_balance(binding_network(k1, k2),
                                      std::vector<Rational>{1, 1, k1 / k2 + 1});
  CHECK_FALSE(check.balanced);
  CHECK(check.relative_defects[check.worst_complex] > 0);
}

TEST_CASE("solve recovers the binding equilibrium ratio") {
  auto eq = solve_complex_balance(binding_network(3, 2));
  REQUIRE(eq.has_value());
  CHECK(eq->check.balanced);
  CHECK(std::abs(eq->lambda[2] / (eq->lambda[0] * eq->lambda[1]) - 1.5) < 1e-9);
}

TEST_CASE("solve handles the birth-binding network") {
  auto eq = solve_complex_balance(birth_binding_network(1, 1, 1, 1));
  REQUIRE(eq.has_value());
  CHECK(eq->check.balanced);
  CHECK(std::abs(eq->lambda[0] - 1.0) < 1e-9);
  CHECK(std::abs(eq->lambda[2] / (eq->lambda[0] * eq->lambda[1]) - 1.0) < 1e-9);
}

TEST_CASE("one-way isomerization yields no certificate") {
  CHECK_FALSE(solve_complex_balance(parse_network("S1 -> S2 @ 1\n")).has_value());
}

TEST_CASE("binding partition function closed forms") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    Rational k = random_positive_rational(rng);
    PartitionTable t(binding_basis(), {1, 1, k});
    for (long long n = 0; n <= 6; ++n) {
      Rational nf = factorial(n);
      CHECK(t.z({0, n}) == 1 / nf);
      CHECK(t.z({1, n}) == (k * Rational(n) + 1) / nf);
      CHECK(t.z({2, n}) ==
            (k * k * Rational(n * n) + (2 * k - k * k) * Rational(n) + 1) /
                (2 * nf));
    }
  }
  PartitionTable t1(binding_basis(), {1, 1, 1});
  CHECK(t1.z({2, 2}) == Rational(7, 4));
}

TEST_CASE("binding partition function is symmetric") {
  PartitionTable t(binding_basis(), {1, 1, Rational(3, 2)});
  for (long long p = 0; p <= 8; ++p)
    for (long long n = 0; n <= 8; ++n) CHECK(t.z({p, n}) == t.z({n, p}));
}

TEST_CASE("birth-binding partition function factors the Poisson species") {
  Rational l(4, 3), mu(5, 7);
  // conservation S2 + S3 = n; S1 is unconstrained
  PartitionTable t({{0, 1, 1}}, {l, 1, mu});
  CHECK(t.unconstrained_species() == std::vector<std::size_t>{0});
  CHECK(t.unconstrained_factor_exponents() == std::vector<Rational>{l});
  for (long long n = 0; n <= 6; ++n)
    CHECK(t.z({n}) == detail::scalar_pow(Rational(1 + mu), n) / factorial(n));
}

TEST_CASE("signed conservation matrices are rejected") {
  CHECK_THROWS_AS(PartitionTable({{1, -1}}, {1, 1}), FiberNotFiniteError);
}

TEST_CASE("paper recursion on the binding table") {
  PartitionTable t1(binding_basis(), {1, 1, 1});
  CHECK(t1.z({2, 0}) == Rational(1, 2));
  CHECK(t1.z({2, 1}) == Rational(3, 2));
  CHECK(verify_mvpoisson_recursion(t1, 2, 0));
  for (Rational k : {Rational(1), Rational(2), Rational(1, 3)}) {
    PartitionTable t(binding_basis(), {1, 1, k});
    for (long long p = 0; p <= 5; ++p)
      for (long long n = 0; n <= 5; ++n) CHECK(verify_mvpoisson_recursion(t, p, n));
  }
}

TEST_CASE("a perturbed recursion coefficient breaks the identity") {
  Rational k(2);
  PartitionTable t(binding_basis(), {1, 1, k});
  long long p = 3, n = 2;
  Rational good = k / Rational(n + 2) * t.z({p, n}) +
                  (k * Rational(p - n - 1) + 1) / Rational(n + 2) * t.z({p, n + 1});
  Rational bad = k / Rational(n + 2) * t.z({p, n}) +
                 (k * Rational(p - n - 1) + 2) / Rational(n + 2) * t.z({p, n + 1});
  CHECK(t.z({p, n + 2}) == good);
  CHECK(t.z({p, n + 2}) != bad);
}

TEST_CASE("recursion agrees with enumeration on random tables") {
  std::mt19937 rng(90210);
  std::uniform_int_distribution<int> md(1, 3), nd(1, 5), ed(0, 2), bd(0, 4);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = static_cast<std::size_t>(md(rng));
    std::size_t n = static_cast<std::size_t>(nd(rng));
    std::vector<std::vector<Integer>> a(m, std::vector<Integer>(n));
    for (std::size_t j = 0; j < n; ++j) {
      bool nonzero = false;
      while (!nonzero)
        for (std::size_t i = 0; i < m; ++i) {
          a[i][j] = ed(rng);
          if (a[i][j] != 0) nonzero = true;
        }
    }
    std::vector<Rational> lambda(n);
    for (auto& l : lambda) l = random_positive_rational(rng);
    PartitionTable t(a, lambda);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<long long> beta(m);
      for (auto& b : beta) b = bd(rng);
      CHECK(t.z(beta) == t.z_by_enumeration(beta));
    }
  }
}

TEST_CASE("two-state fiber splits evenly at K = 1") {
  PartitionTable t(binding_basis(), {1, 1, 1});
  auto dist = t.stationary_distribution({1, 1});
  REQUIRE(dist.support.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(dist.probabilities[s] == Rational(1, 2));
    bool bound = dist.support[s] == std::vector<long long>{0, 0, 1};
    bool free_pair = dist.support[s] == std::vector<long long>{1, 1, 0};
    CHECK((bound || free_pair));
  }
}

TEST_CASE("stationary distributions are exactly normalized") {
  std::mt19937 rng(515);
  for (int trial = 0; trial < 20; ++trial) {
    PartitionTable t(binding_basis(),
                     {random_positive_rational(rng), random_positive_rational(rng),
                      random_positive_rational(rng)});
    auto dist = t.stationary_distribution({4, 3});
    Rational total = 0;
    for (const auto& p : dist.probabilities) total += p;
    CHECK(total == 1);
  }
}

TEST_CASE("isomerization marginal is binomial") {
  Rational k1(2), k2(5);
  Rational mu = k1 / k2;
  // balance kappa1 lambda1 = kappa2 lambda2
  PartitionTable t({{1, 1}}, {1, mu});
  long long beta = 7;
  auto marginal = t.conditional_marginal({beta}, 0);
  Rational p = 1 / (1 + mu);
  REQUIRE(marginal.size() == static_cast<std::size_t>(beta) + 1);
  for (long long r = 0; r <= beta; ++r)
    CHECK(marginal[static_cast<std::size_t>(r)] ==
          binom(beta, r) * detail::scalar_pow(p, r) *
              detail::scalar_pow(Rational(1 - p), beta - r));
}

TEST_CASE("empty fiber raises") {
  PartitionTable t({{2}}, {Rational(1)});
  CHECK(t.z({1}) == 0);
  CHECK_THROWS_AS(t.stationary_distribution({1}), EmptyFiberError);
  CHECK_THROWS_AS(t.conditional_factorial_moment({1}, 0, 1), EmptyFiberError);
}

TEST_CASE("binding conditional means match the closed forms") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    Rational k = random_positive_rational(rng);
    PartitionTable t(binding_basis(), {1, 1, k});
    for (long long n = 0; n <= 6; ++n) {
      CHECK(t.conditional_factorial_moment({1, n}, 0, 1) ==
            1 / (k * Rational(n) + 1));
      CHECK(t.conditional_factorial_moment({2, n}, 0, 1) ==
            2 * (k * Rational(n) + 1) /
                (k * k * Rational(n * n) + (2 * k - k * k) * Rational(n) + 1));
    }
  }
}

TEST_CASE("binding conditional moments at K=1, beta=(2,2)") {
  PartitionTable t(binding_basis(), {1, 1, 1});
  auto m = t.conditional_moments({2, 2}, 0);
  CHECK(m.mean == Rational(6, 7));
  CHECK(m.second_moment == Rational(8, 7));
  CHECK(m.variance == Rational(20, 49));
}

TEST_CASE("conditional moments agree with brute force") {
  std::mt19937 rng(717);
  for (int trial = 0; trial < 10; ++trial) {
    PartitionTable t(binding_basis(),
                     {random_positive_rational(rng), random_positive_rational(rng),
                      random_positive_rational(rng)});
    std::vector<long long> beta = {3, 4};
    auto dist = t.stationary_distribution(beta);
    for (std::size_t local = 0; local < 3; ++local) {
      Rational mean = 0, fact2 = 0, second = 0;
      for (std::size_t s = 0; s < dist.support.size(); ++s) {
        long long k = dist.support[s][local];
        mean += Rational(k) * dist.probabilities[s];
        fact2 += Rational(k * (k - 1)) * dist.probabilities[s];
        second += Rational(k * k) * dist.probabilities[s];
      }
      std::size_t j = dist.species[local];
      CHECK(t.conditional_factorial_moment(beta, j, 1) == mean);
      CHECK(t.conditional_factorial_moment(beta, j, 2) == fact2);
      auto m = t.conditional_moments(beta, j);
      CHECK(m.mean == mean);
      CHECK(m.second_moment == second);
      CHECK(m.variance == second - mean * mean);
    }
  }
}

TEST_CASE("moments on out-of-reach and degenerate fibers") {
  PartitionTable t(binding_basis(), {1, 1, Rational(5, 3)});
  // beta_1 < alpha_13: no state can hold a complex
  CHECK(t.conditional_factorial_moment({0, 4}, 2, 1) == 0);
  // single-state fiber
  auto m = t.conditional_moments({0, 0}, 0);
  CHECK(m.mean == 0);
  CHECK(m.variance == 0);
}

TEST_CASE("birth-binding conditional marginal is binomial") {
  SUBCASE("mu = 1, n = 2") {
    PartitionTable t({{0, 1, 1}}, {Rational(1), 1, Rational(1)});
    auto marginal = t.conditional_marginal({2}, 1);
    CHECK(marginal == std::vector<Rational>{Rational(1, 4), Rational(1, 2),
                                            Rational(1, 4)});
  }
  SUBCASE("general mu, n <= 6") {
    Rational k1(2), k2(3), k3(5), k4(7);
    Rational mu = k1 * k3 / (k2 * k4);
    PartitionTable t({{0, 1, 1}}, {k1 / k2, 1, mu});
    Rational p = 1 / (1 + mu);
    for (long long n = 0; n <= 6; ++n) {
      auto marginal = t.conditional_marginal({n}, 1);
      for (long long r = 0; r <= n; ++r)
        CHECK(marginal[static_cast<std::size_t>(r)] ==
              binom(n, r) * detail::scalar_pow(p, r) *
                  detail::scalar_pow(Rational(1 - p), n - r));
    }
  }
  SUBCASE("n = 0 is a point mass") {
    PartitionTable t({{0, 1, 1}}, {Rational(1), 1, Rational(2)});
    CHECK(t.conditional_marginal({0}, 1) == std::vector<Rational>{1});
  }
  SUBCASE("unconstrained species have no conditional marginal") {
    PartitionTable t({{0, 1, 1}}, {Rational(1), 1, Rational(2)});
    CHECK_THROWS_AS(t.conditional_marginal({2}, 0), CrnError);
  }
}

TEST_CASE("balanced weights solve the stationary master equation exactly") {
  SUBCASE("binding network on its fibers") {
    Rational k1(5, 2), k2(7, 3);
    auto net = binding_network(k1, k2);
    std::vector<Rational> lambda = {1, 1, k1 / k2};
    REQUIRE(verify_complex_balance(net, lambda).balanced);
    PartitionTable t(binding_basis(), lambda);
    for (long long p = 0; p <= 4; ++p)
      for (long long n = 0; n <= 4; ++n)
        for (const auto& k : t.enumerate_fiber({p, n}))
          CHECK(sscme_residual(net, lambda, k) == 0);
  }
  SUBCASE("birth-binding network over a state box") {
    Rational k1(3), k2(2), k3(5, 2), k4(7);
    auto net = birth_binding_network(k1, k2, k3, k4);
    std::vector<Rational> lambda = {k1 / k2, 1, k1 * k3 / (k2 * k4)};
    REQUIRE(verify_complex_balance(net, lambda).balanced);
    for (long long a = 0; a <= 5; ++a)
      for (long long b = 0; b <= 4; ++b)
        for (long long c = 0; c <= 4; ++c)
          CHECK(sscme_residual(net, lambda, {a, b, c}) == 0);
  }
  SUBCASE("an unbalanced lambda leaves a residual") {
    auto net = binding_network(3, 2);
    std::vector<Rational> lambda = {1, 1, 1};
    CHECK(sscme_residual(net, lambda, {1, 1, 0}) != 0);
  }
}

TEST_CASE("rescaling lambda within the conserved directions is invisible") {
  Rational k1(5, 2), k2(7, 3);
  Rational K = k1 / k2;
  auto net = binding_network(k1, k2);
  std::mt19937 rng(4711);
  for (int trial = 0; trial < 10; ++trial) {
    Rational s = random_positive_rational(rng), u = random_positive_rational(rng);
    std::vector<Rational> scaled = {s, u, K * s * u};
    REQUIRE(verify_complex_balance(net, scaled).balanced);
    PartitionTable base(binding_basis(), {1, 1, K});
    PartitionTable other(binding_basis(), scaled);
    auto d1 = base.stationary_distribution({3, 4});
    auto d2 = other.stationary_distribution({3, 4});
    CHECK(d1.support == d2.support);
    CHECK(d1.probabilities == d2.probabilities);
  }
}

TEST_CASE("double-precision tables track the rational ones") {
  Rational K(3, 2);
  PartitionTable exact(binding_basis(), {1, 1, K});
  PartitionTableT<double> approx(binding_basis(), {1.0, 1.0, 1.5});
  for (long long p = 0; p <= 20; ++p)
    for (long long n = 0; n <= 20; ++n) {
      double ref = to_double(exact.z({p, n}));
      CHECK(std::abs(approx.z({p, n}) - ref) <= 1e-10 * std::abs(ref));
    }
}
