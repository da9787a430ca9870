#include "crn/cbn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace crn {

namespace {

template <typename S>
S lambda_pow(const std::vector<S>& lambda, const MultiIndex& a) {
  S r(1);
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (int t = 0; t < a[i]; ++t) r = r * lambda[i];
  return r;
}

}  // namespace

BalanceCheck verify_complex_balance(const ReactionNetwork& net,
                                    const std::vector<Rational>& lambda) {
  for (const auto& l : lambda)
    if (l <= 0) throw CrnError("lambda must be positive");
  auto info = complexes(net);
  BalanceCheck check;
  check.tolerance = 0.0;
  check.relative_defects.assign(info.complexes.size(), 0.0);
  check.balanced = true;
  Rational worst = 0;
  for (std::size_t c = 0; c < info.complexes.size(); ++c) {
    Rational inflow = 0, outflow = 0;
    for (std::size_t j = 0; j < net.n_reactions(); ++j) {
      Rational flux = rescaled_rate(net.reactions[j]) *
                      lambda_pow(lambda, net.reactions[j].source);
      if (info.target_of[j] == c) inflow += flux;
      if (info.source_of[j] == c) outflow += flux;
    }
    Rational defect = inflow - outflow;
    Rational scale = std::max(inflow, outflow);
    Rational rel = Rational(abs(defect));
    if (scale > 0) rel /= scale;
    check.relative_defects[c] = to_double(rel);
    if (rel != 0) {
      check.balanced = false;
      if (rel > worst) {
        worst = rel;
        check.worst_complex = c;
      }
    }
  }
  return check;
}

BalanceCheck verify_complex_balance(const ReactionNetwork& net,
                                    const std::vector<double>& lambda,
                                    double tol) {
  for (double l : lambda)
    if (!(l > 0)) throw CrnError("lambda must be positive");
  auto info = complexes(net);
  BalanceCheck check;
  check.tolerance = tol;
  check.relative_defects.assign(info.complexes.size(), 0.0);
  check.balanced = true;
  for (std::size_t c = 0; c < info.complexes.size(); ++c) {
    double inflow = 0, outflow = 0;
    for (std::size_t j = 0; j < net.n_reactions(); ++j) {
      double flux = to_double(rescaled_rate(net.reactions[j])) *
                    lambda_pow(lambda, net.reactions[j].source);
      if (info.target_of[j] == c) inflow += flux;
      if (info.source_of[j] == c) outflow += flux;
    }
    double scale = std::max(inflow, outflow);
    double rel = scale > 0 ? std::abs(inflow - outflow) / scale
                           : std::abs(inflow - outflow);
    check.relative_defects[c] = rel;
    if (rel > check.relative_defects[check.worst_complex])
      check.worst_complex = c;
    if (rel > tol) check.balanced = false;
  }
  return check;
}

namespace {

std::vector<double> balance_defects(const ReactionNetwork& net,
                                    const ComplexInfo& info,
                                    const std::vector<double>& lambda) {
  std::vector<double> d(info.complexes.size(), 0.0);
  for (std::size_t j = 0; j < net.n_reactions(); ++j) {
    double flux = to_double(rescaled_rate(net.reactions[j])) *
                  lambda_pow(lambda, net.reactions[j].source);
    d[info.target_of[j]] += flux;
    d[info.source_of[j]] -= flux;
  }
  return d;
}

// Gauss-Newton on the balance defects in log-lambda coordinates.
std::optional<std::vector<double>> newton_balance(const ReactionNetwork& net,
                                                  const ComplexInfo& info,
                                                  double tol) {
  std::size_t n = net.n_species();
  std::size_t nc = info.complexes.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  auto lam = [&](const Eigen::VectorXd& v) {
    std::vector<double> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = std::exp(v(i));
    return l;
  };
  auto norm2 = [&](const std::vector<double>& d) {
    double s = 0;
    for (double v : d) s += v * v;
    return s;
  };
  for (int iter = 0; iter < 200; ++iter) {
    auto lambda = lam(x);
    auto d = balance_defects(net, info, lambda);
    if (std::sqrt(norm2(d)) < tol) return lambda;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nc, n);
    for (std::size_t j = 0; j < net.n_reactions(); ++j) {
      double flux = to_double(rescaled_rate(net.reactions[j])) *
                    lambda_pow(lambda, net.reactions[j].source);
      for (std::size_t i = 0; i < n; ++i) {
        double da = flux * net.reactions[j].source[i];
        jac(static_cast<long>(info.target_of[j]), static_cast<long>(i)) += da;
        jac(static_cast<long>(info.source_of[j]), static_cast<long>(i)) -= da;
      }
    }
    Eigen::VectorXd rhs(nc);
    for (std::size_t c = 0; c < nc; ++c) rhs(static_cast<long>(c)) = -d[c];
    Eigen::VectorXd step =
        jac.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    double f0 = norm2(d);
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      Eigen::VectorXd xn = x + alpha * step;
      if (norm2(balance_defects(net, info, lam(xn))) < f0) {
        x = xn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  auto lambda = lam(x);
  if (std::sqrt(norm2(balance_defects(net, info, lambda))) < tol) return lambda;
  return std::nullopt;
}

}  // namespace

std::optional<CbEquilibrium> solve_complex_balance(const ReactionNetwork& net,
                                                   double tol) {
  auto info = complexes(net);
  std::vector<double> lambda;

  if (weak_reversibility(net) && deficiency(net) == 0) {
    // Complex weights psi_c: kernel of the weighted Laplacian per linkage
    // class (1-dimensional and positive when the class is strongly
    // connected).
    std::size_t nc = info.complexes.size();
    RatMatrix lap(nc, RatVector(nc, Rational(0)));
    for (std::size_t j = 0; j < net.n_reactions(); ++j) {
      Rational kt = rescaled_rate(net.reactions[j]);
      lap[info.target_of[j]][info.source_of[j]] += kt;
      lap[info.source_of[j]][info.source_of[j]] -= kt;
    }
    auto classes = linkage_classes(net);
    std::vector<Rational> psi(nc, Rational(0));
    std::vector<std::size_t> class_of(nc, 0);
    for (std::size_t cl = 0; cl < classes.size(); ++cl) {
      const auto& members = classes[cl];
      RatMatrix sub(members.size(), RatVector(members.size()));
      for (std::size_t a = 0; a < members.size(); ++a) {
        class_of[members[a]] = cl;
        for (std::size_t b = 0; b < members.size(); ++b)
          sub[a][b] = lap[members[a]][members[b]];
      }
      auto kernel = nullspace(sub);
      if (kernel.size() != 1) return std::nullopt;
      bool all_pos = true, all_neg = true;
      for (const auto& v : kernel[0]) {
        if (v <= 0) all_pos = false;
        if (v >= 0) all_neg = false;
      }
      if (!all_pos && !all_neg) return std::nullopt;
      for (std::size_t a = 0; a < members.size(); ++a)
        psi[members[a]] = all_pos ? kernel[0][a] : -kernel[0][a];
    }
    // Minimum-norm least squares for a_c . log(lambda) - theta_class = log(psi_c).
    std::size_t n = net.n_species();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nc, n + classes.size());
    Eigen::VectorXd rhs(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t i = 0; i < n; ++i)
        m(static_cast<long>(c), static_cast<long>(i)) = info.complexes[c][i];
      m(static_cast<long>(c), static_cast<long>(n + class_of[c])) = -1.0;
      rhs(static_cast<long>(c)) = std::log(to_double(psi[c]));
    }
    Eigen::VectorXd sol =
        m.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = std::exp(sol(static_cast<long>(i)));
  } else {
    auto found = newton_balance(net, info, tol);
    if (!found) return std::nullopt;
    lambda = *found;
  }

  auto check = verify_complex_balance(net, lambda, tol);
  if (!check.balanced) return std::nullopt;
  return CbEquilibrium{std::move(lambda), std::move(check)};
}

bool verify_mvpoisson_recursion(PartitionTable& table, long long p, long long n) {
  // Binding-network shape: two conservation rows, one species constrained
  // by both (the complex), two species constrained by one row each.
  if (table.basis().size() != 2 || table.constrained_species().size() != 3)
    throw CrnError("MVPoisson recursion check requires the binding network");
  std::size_t bound = SIZE_MAX;
  for (auto j : table.constrained_species())
    if (table.basis()[0][j] != 0 && table.basis()[1][j] != 0) bound = j;
  if (bound == SIZE_MAX)
    throw CrnError("MVPoisson recursion check requires the binding network");
  Rational k = table.lambda()[bound];
  Rational lhs = table.z({p, n + 2});
  Rational rhs = k / Rational(n + 2) * table.z({p, n}) +
                 (k * Rational(-n) + k * Rational(p) - k + 1) / Rational(n + 2) *
                     table.z({p, n + 1});
  return lhs == rhs;
}

}  // namespace crn
