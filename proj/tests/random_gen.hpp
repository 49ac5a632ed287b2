#pragma once

#include <random>

#include "liftlab/expoly.hpp"

namespace testgen {

// Small random exponential polynomials for property checks. Frequencies stay
// in {0, 1, -1, i} so products remain readable when a check fails.
inline liftlab::GaussianRational small_coeff(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<long> den(1, 3);
  long n = num(rng);
  if (n == 0) n = 1;
  if (rng() % 5 == 0) return {mpq_class(n, den(rng)), mpq_class(num(rng))};
  return {n, den(rng)};
}

inline liftlab::ExpPoly random_poly(std::mt19937& rng, bool with_u, bool with_exp, bool with_params = false,
                                    int max_terms = 3, int max_deg = 2) {
  using namespace liftlab;
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::vector<Term> terms;
  int n = nterms(rng);
  for (int k = 0; k < n; ++k) {
    Monomial m;
    m.x = deg(rng);
    m.y = deg(rng) / 2;
    if (with_u) m.u = deg(rng) / 2;
    if (with_params && rng() % 3 == 0) m.params.emplace_back(rng() % 2 == 0 ? "A" : "B", 1);
    if (with_exp) {
      switch (rng() % 5) {
        case 0: m.freq.x = 1; break;
        case 1: m.freq.x = -1; break;
        case 2: m.freq.x = GaussianRational::i(); break;
        case 3: m.freq.y = 1; break;
        default: break;
      }
    }
    terms.push_back(Term{small_coeff(rng), m});
  }
  return ExpPoly::from_terms(std::move(terms));
}

}  // namespace testgen
