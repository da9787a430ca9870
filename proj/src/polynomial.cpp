#include "crn/polynomial.hpp"

namespace crn {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p;
  p.add_term(MultiIndex(nvars), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& u, const Rational& c) {
  Polynomial p;
  p.add_term(u, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  return monomial(MultiIndex::unit(nvars, i));
}

void Polynomial::add_term(const MultiIndex& u, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(u);
  if (it == terms_.end()) {
    terms_.emplace(u, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [u, c] : o.terms_) r.add_term(u, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [u, c] : o.terms_) r.add_term(u, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [u, cu] : terms_) {
    for (const auto& [v, cv] : o.terms_) {
      MultiIndex w(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i];
      r.add_term(w, cu * cv);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r;
  if (c == 0) return r;
  for (const auto& [u, cu] : terms_) r.add_term(u, cu * c);
  return r;
}

namespace {

// (k_i + g)^e expanded as a univariate table of coefficients on k_i^d.
std::vector<Rational> binomial_shift(int e, int g) {
  std::vector<Rational> coef(static_cast<std::size_t>(e) + 1, Rational(0));
  Rational binom = 1;  // C(e, d)
  Integer gpow = 1;
  // coefficient of k^d is C(e,d) g^{e-d}
  for (int d = e; d >= 0; --d) {
    Integer gp = 1;
    for (int t = 0; t < e - d; ++t) gp *= g;
    coef[static_cast<std::size_t>(d)] = binom * Rational(gp);
    // update C(e,d) -> C(e,d-1)
    if (d > 0) binom = binom * d / (e - d + 1);
  }
  (void)gpow;
  return coef;
}

}  // namespace

Polynomial Polynomial::shifted(const std::vector<int>& gamma) const {
  Polynomial r;
  for (const auto& [u, c] : terms_) {
    Polynomial term = Polynomial::constant(u.size(), c);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] == 0) continue;
      if (gamma[i] == 0) {
        MultiIndex m(u.size());
        m[i] = u[i];
        term = term * Polynomial::monomial(m);
        continue;
      }
      auto coef = binomial_shift(u[i], gamma[i]);
      Polynomial factor;
      for (std::size_t d = 0; d < coef.size(); ++d) {
        if (coef[d] == 0) continue;
        MultiIndex m(u.size());
        m[i] = static_cast<int>(d);
        factor.add_term(m, coef[d]);
      }
      term = term * factor;
    }
    r = r + term;
  }
  return r;
}

Polynomial Polynomial::substitute(std::size_t i, const Polynomial& replacement) const {
  Polynomial r;
  for (const auto& [u, c] : terms_) {
    MultiIndex rest = u;
    int e = rest[i];
    rest[i] = 0;
    Polynomial term = Polynomial::monomial(rest, c);
    for (int t = 0; t < e; ++t) term = term * replacement;
    r = r + term;
  }
  return r;
}

Polynomial Polynomial::drop_variable(std::size_t i) const {
  Polynomial r;
  for (const auto& [u, c] : terms_) {
    if (u[i] != 0) throw CrnError("drop_variable: variable still present");
    std::vector<int> e;
    e.reserve(u.size() - 1);
    for (std::size_t j = 0; j < u.size(); ++j)
      if (j != i) e.push_back(u[j]);
    r.add_term(MultiIndex(std::move(e)), c);
  }
  return r;
}

Rational Polynomial::eval(const std::vector<Rational>& k) const {
  Rational s = 0;
  for (const auto& [u, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (int e = 0; e < u[i]; ++e) t *= k[i];
    s += t;
  }
  return s;
}

Rational Polynomial::eval_at_counts(const std::vector<long long>& k) const {
  Rational s = 0;
  for (const auto& [u, c] : terms_) {
    Integer t = 1;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (int e = 0; e < u[i]; ++e) t *= k[i];
    s += c * Rational(t);
  }
  return s;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [u, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += rational_to_string(c);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] == 0) continue;
      s += "*" + names[i];
      if (u[i] > 1) s += "^" + std::to_string(u[i]);
    }
  }
  return s;
}

}  // namespace crn
