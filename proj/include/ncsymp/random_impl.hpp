#pragma once

#include <random>

namespace ncsymp {

template <class Rng>
Vec random_vector(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = u(rng);
    const double im = u(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

template <class Rng>
Vec random_element(const Superalgebra& alg, Rng& rng, int parity) {
  Vec v = random_vector(alg.dim(), rng);
  if (parity >= 0)
    for (int i = 0; i < alg.dim(); ++i)
      if (alg.parity(i) != parity) v(i) = 0.0;
  return v;
}

}  // namespace ncsymp
