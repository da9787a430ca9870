#pragma once

#include <random>
#include <string>

#include "crn/parser.hpp"

namespace crn::testing {

// S1 + S2 <-> S3
inline ReactionNetwork binding_network(const Rational& k1 = 1,
                                       const Rational& k2 = 1) {
  return parse_network("S1 + S2 <-> S3 @ " + rational_to_string(k1) + ", " +
                       rational_to_string(k2) + "\n");
}

// Gene switching plus transcription/degradation of the product.
inline ReactionNetwork gene_network(const Rational& kappa, const Rational& delta,
                                    const Rational& rho, const Rational& eta) {
  return parse_network("S1 <-> S2 @ " + rational_to_string(kappa) + ", " +
                       rational_to_string(delta) +
                       "\n"
                       "S1 -> S1 + S3 @ " +
                       rational_to_string(rho) +
                       "\n"
                       "S3 -> 0 @ " +
                       rational_to_string(eta) + "\n");
}

// Three-layer feedforward cascade: S1 catalyzes S2, S1 and S2 catalyze S3.
inline ReactionNetwork cascade_network(const Rational& k1, const Rational& d1,
                                       const Rational& k2, const Rational& d2,
                                       const Rational& k3, const Rational& d3) {
  return parse_network("0 -> S1 @ " + rational_to_string(k1) +
                       "\n"
                       "S1 -> 0 @ " +
                       rational_to_string(d1) +
                       "\n"
                       "S1 -> S1 + S2 @ " +
                       rational_to_string(k2) +
                       "\n"
                       "S2 -> 0 @ " +
                       rational_to_string(d2) +
                       "\n"
                       "S1 + S2 -> S1 + S2 + S3 @ " +
                       rational_to_string(k3) +
                       "\n"
                       "S3 -> 0 @ " +
                       rational_to_string(d3) + "\n");
}

// Birth-death with creation and reversible binding: 0 <-> S1, S1+S2 <-> S3.
inline ReactionNetwork birth_binding_network(const Rational& k1, const Rational& k2,
                                             const Rational& k3, const Rational& k4) {
  return parse_network("0 -> S1 @ " + rational_to_string(k1) +
                       "\n"
                       "S1 -> 0 @ " +
                       rational_to_string(k2) +
                       "\n"
                       "S1 + S2 <-> S3 @ " +
                       rational_to_string(k3) + ", " + rational_to_string(k4) +
                       "\n");
}

inline ReactionNetwork isomerization(const Rational& k1, const Rational& k2) {
  return parse_network("S1 <-> S2 @ " + rational_to_string(k1) + ", " +
                       rational_to_string(k2) + "\n");
}

inline ReactionNetwork birth_death(const Rational& birth, const Rational& death) {
  return parse_network("0 -> S @ " + rational_to_string(birth) +
                       "\nS -> 0 @ " + rational_to_string(death) + "\n");
}

inline Rational random_positive_rational(std::mt19937& rng, int max_num = 9,
                                         int max_den = 4) {
  std::uniform_int_distribution<int> num(1, max_num), den(1, max_den);
  return Rational(num(rng), den(rng));
}

}  // namespace crn::testing
