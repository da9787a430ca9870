#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace crn {

/// Vector of nonnegative integer exponents / stoichiometric coefficients.
/// Houses source/target complexes, moment orders and count states alike.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : entries_(n, 0) {}
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {}

  static MultiIndex unit(std::size_t n, std::size_t i) {
    MultiIndex u(n);
    u.entries_[i] = 1;
    return u;
  }

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }

  long long order() const {
    long long s = 0;
    for (int e : entries_) s += e;
    return s;
  }

  bool is_zero() const {
    for (int e : entries_)
      if (e != 0) return false;
    return true;
  }

  /// Coordinatewise <=.
  bool dominated_by(const MultiIndex& other) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i] > other.entries_[i]) return false;
    return true;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(entries_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> entries_;
};

}  // namespace crn
