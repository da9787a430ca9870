#pragma once

#include <map>
#include <vector>

#include "crn/multi_index.hpp"
#include "crn/rational.hpp"

namespace crn {

/// Multivariate polynomial over species counts with exact rational
/// coefficients. Zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  Polynomial() = default;

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial monomial(const MultiIndex& u, const Rational& c = 1);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const MultiIndex& u, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial operator-() const { return *this * Rational(-1); }
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  /// p(k + gamma) expanded by the binomial theorem.
  Polynomial shifted(const std::vector<int>& gamma) const;

  /// Substitute variable i by `replacement` (which must not involve i).
  Polynomial substitute(std::size_t i, const Polynomial& replacement) const;

  /// Remove variable i from the index space; all terms must have exponent 0
  /// on i.
  Polynomial drop_variable(std::size_t i) const;

  Rational eval(const std::vector<Rational>& k) const;
  Rational eval_at_counts(const std::vector<long long>& k) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  TermMap terms_;
};

}  // namespace crn
