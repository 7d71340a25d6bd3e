#pragma once

#include <random>

#include "trispin/pauli.hpp"

namespace trispin::testutil {

// Random Hermitian Pauli-string sum: real coefficients on random strings.
inline HamiltonianSpec random_spec(int n_sites, int n_terms, std::mt19937_64& rng,
                                   int max_weight = 3) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> site(0, n_sites - 1);
    std::uniform_int_distribution<int> axis(0, 2);
    std::uniform_int_distribution<int> weight(1, max_weight);
    HamiltonianSpec h(n_sites, Boundary::periodic);
    for (int t = 0; t < n_terms; ++t) {
        PauliTerm term;
        term.coeff = coeff(rng);
        const int w = weight(rng);
        for (int j = 0; j < w; ++j) term.ops[site(rng)] = Axis(axis(rng));
        h.add(std::move(term));
    }
    return h;
}

inline StateVector random_state(int n_sites, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    StateVector v(std::int64_t(1) << n_sites);
    for (std::int64_t i = 0; i < v.size(); ++i) v[i] = cplx(g(rng), g(rng));
    v.normalize();
    return v;
}

} // namespace trispin::testutil
