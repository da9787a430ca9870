#include "crn/linalg.hpp"

#include <boost/multiprecision/integer.hpp>

namespace crn {

std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && m[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[row]);
    Rational inv = m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rat_rank(RatMatrix m) { return rref(m).size(); }

std::vector<RatVector> nullspace(const RatMatrix& m) {
  std::vector<RatVector> basis;
  if (m.empty()) return basis;
  std::size_t cols = m[0].size();
  RatMatrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVector v(cols, Rational(0));
    v[free_col] = 1;
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      v[pivots[pr]] = -r[pr][free_col];
    basis.push_back(std::move(v));
  }
  return basis;
}

LinearSolution solve_linear(RatMatrix m, RatVector rhs) {
  LinearSolution sol;
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  RatMatrix aug = m;
  for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(rhs[i]);
  auto pivots = rref(aug);
  // A pivot in the rhs column means 0 = 1.
  if (!pivots.empty() && pivots.back() == cols) {
    sol.consistent = false;
    return sol;
  }
  sol.consistent = true;
  sol.particular.assign(cols, Rational(0));
  for (std::size_t pr = 0; pr < pivots.size(); ++pr)
    sol.particular[pivots[pr]] = aug[pr][cols];
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVector v(cols, Rational(0));
    v[free_col] = 1;
    for (std::size_t pr = 0; pr < pivots.size(); ++pr)
      v[pivots[pr]] = -aug[pr][free_col];
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

std::vector<Integer> primitive_integer_vector(const RatVector& v) {
  Integer lcm_den = 1;
  for (const auto& x : v)
    lcm_den = boost::multiprecision::lcm(lcm_den, denominator(x));
  std::vector<Integer> out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = numerator(v[i]) * (lcm_den / denominator(v[i]));
    g = boost::multiprecision::gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  for (const auto& x : out) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : out) y = -y;
    break;
  }
  return out;
}

}  // namespace crn
