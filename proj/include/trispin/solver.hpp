#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "trispin/pauli.hpp"

namespace trispin {

struct ConvergenceFailure : std::runtime_error {
    double residual;
    ConvergenceFailure(const std::string& msg, double r)
        : std::runtime_error(msg + " (residual " + std::to_string(r) + ")"), residual(r) {}
};

struct SpectrumResult {
    std::vector<double> eigenvalues;   // ascending
    StateVector ground_state;
    double gap = 0.0;                  // E_degeneracy - E_0
    int degeneracy = 1;
    double residual = 0.0;             // ||H v - E v|| of the ground pair
};

constexpr std::uint64_t kSolverSeed = 0x5EED;

namespace detail {

// Pre-compiled term list; apply() avoids re-walking the Pauli maps.
struct CompiledHamiltonian {
    int n_sites;
    std::int64_t dim;
    std::vector<CompiledTerm> terms;

    explicit CompiledHamiltonian(const HamiltonianSpec& h)
        : n_sites(h.n_sites), dim(std::int64_t(1) << h.n_sites) {
        terms.reserve(h.terms.size());
        for (auto& t : h.terms) terms.push_back(compile_term(t));
    }

    void apply(const StateVector& in, StateVector& out) const {
        out.setZero();
        static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (const auto& ct : terms) {
            const cplx base = ct.coeff * ipow[ct.y_count & 3];
            const cplx* src = in.data();
            cplx* dst = out.data();
            if (ct.flip_mask == 0 && ct.z_mask == 0) {
                for (std::int64_t i = 0; i < dim; ++i) dst[i] += base * src[i];
                continue;
            }
            for (std::int64_t i = 0; i < dim; ++i) {
                const int par = __builtin_parityll(std::uint64_t(i) & ct.z_mask);
                dst[std::int64_t(std::uint64_t(i) ^ ct.flip_mask)] += par ? -base * src[i] : base * src[i];
            }
        }
    }
};

inline int count_degeneracy(const std::vector<double>& eigs) {
    if (eigs.empty()) return 0;
    const double tol = 1e-8 * std::max(1.0, std::abs(eigs.front()));
    int d = 1;
    while (d < int(eigs.size()) && eigs[d] - eigs.front() <= tol) ++d;
    return d;
}

inline void finish_result(SpectrumResult& r) {
    r.degeneracy = count_degeneracy(r.eigenvalues);
    r.gap = r.degeneracy < int(r.eigenvalues.size())
                ? r.eigenvalues[r.degeneracy] - r.eigenvalues.front()
                : 0.0;
    if (r.ground_state.size() > 0) r.ground_state.normalize();
}

inline bool is_diagonal(const HamiltonianSpec& h) {
    for (auto& t : h.terms)
        for (auto& [s, a] : t.ops)
            if (a != Axis::Z) return false;
    return true;
}

inline double nth_smallest(std::vector<double> v, std::int64_t n) {
    std::nth_element(v.begin(), v.begin() + n, v.end());
    return v[n];
}

} // namespace detail

// Full dense spectrum (n <= 14 by the to_matrix contract; intended for small n).
inline SpectrumResult diagonalize_dense(const HamiltonianSpec& h, int k = -1) {
    MatrixXcd m = to_matrix(h);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    SpectrumResult r;
    const int dim = int(m.rows());
    const int keep = (k <= 0 || k > dim) ? dim : k;
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + keep);
    r.ground_state = es.eigenvectors().col(0);
    r.residual = (m * r.ground_state - r.eigenvalues.front() * r.ground_state).norm();
    detail::finish_result(r);
    return r;
}

// Z-only Hamiltonians are diagonal in the computational basis; read the
// spectrum off the diagonal. Ground state is the lowest minimizing basis
// state, so results are deterministic. Degeneracy is counted over the whole
// diagonal, not just the kept window.
inline SpectrumResult diagonalize_diagonal(const HamiltonianSpec& h, int k) {
    const std::int64_t dim = std::int64_t(1) << h.n_sites;
    std::vector<double> diag(dim, 0.0);
    for (auto& t : h.terms) {
        const auto ct = detail::compile_term(t);
        for (std::int64_t i = 0; i < dim; ++i)
            diag[i] += __builtin_parityll(std::uint64_t(i) & ct.z_mask) ? -t.coeff.real()
                                                                        : t.coeff.real();
    }
    std::int64_t imin = 0;
    for (std::int64_t i = 1; i < dim; ++i)
        if (diag[i] < diag[imin]) imin = i;
    std::vector<double> sorted = diag;
    std::sort(sorted.begin(), sorted.end());
    const double e0 = sorted.front();
    const double tol = 1e-8 * std::max(1.0, std::abs(e0));
    int d = 0;
    while (d < int(sorted.size()) && sorted[d] - e0 <= tol) ++d;

    SpectrumResult r;
    const std::int64_t keep = (k <= 0) ? std::min<std::int64_t>(dim, 64) : std::min<std::int64_t>(k, dim);
    sorted.resize(keep);
    r.eigenvalues = std::move(sorted);
    r.ground_state = StateVector::Zero(dim);
    r.ground_state[imin] = 1.0;
    r.residual = 0.0;
    r.degeneracy = d;
    r.gap = d < dim ? detail::nth_smallest(diag, d) - e0 : 0.0;
    return r;
}

namespace detail {

struct LanczosPair {
    double value;
    StateVector vector;
    double residual;
};

// Thick-restart Lanczos for the lowest eigenpair orthogonal to `locked`.
inline LanczosPair lanczos_lowest(const CompiledHamiltonian& ham,
                                  const std::vector<StateVector>& locked, std::uint64_t seed,
                                  double tol, int max_matvec) {
    const std::int64_t dim = ham.dim;
    const int m = int(std::min<std::int64_t>(34, dim - std::int64_t(locked.size())));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto random_vector = [&] {
        StateVector v(dim);
        for (std::int64_t i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
        return v;
    };
    auto orthogonalize = [&](StateVector& w, const std::vector<StateVector>& basis) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : locked) w -= b.dot(w) * b;
            for (const auto& b : basis) w -= b.dot(w) * b;
        }
    };

    std::vector<StateVector> basis;
    basis.reserve(m + 1);
    {
        StateVector v0 = random_vector();
        orthogonalize(v0, basis);
        v0.normalize();
        basis.push_back(std::move(v0));
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    StateVector w(dim);
    int matvecs = 0;
    bool exhausted = false;

    while (true) {
        // expand the basis to m+1 vectors, filling T (m x m) and the edge
        // coupling beta_m of basis[m] to the block
        double beta_m = 0.0;
        for (int j = int(basis.size()) - 1; j < m; ++j) {
            ham.apply(basis[j], w);
            ++matvecs;
            T(j, j) = std::real(basis[j].dot(w));
            orthogonalize(w, basis);
            double beta = w.norm();
            if (beta < 1e-13) {
                StateVector v = random_vector();
                orthogonalize(v, basis);
                const double nv = v.norm();
                if (nv < 1e-10 || std::int64_t(basis.size() + locked.size()) >= dim) {
                    exhausted = true;
                    break;
                }
                w = v / nv;
                beta = 0.0;
            } else {
                w /= beta;
            }
            if (j + 1 < m) {
                T(j, j + 1) = beta;
                T(j + 1, j) = beta;
            } else {
                beta_m = beta;
            }
            basis.push_back(w);
        }

        const int nT = std::min<int>(m, int(basis.size()) - (exhausted ? 0 : 1));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(nT, nT));
        const Eigen::VectorXd theta = es.eigenvalues();
        const Eigen::MatrixXd S = es.eigenvectors();

        StateVector ritz = StateVector::Zero(dim);
        for (int i = 0; i < nT; ++i) ritz += S(i, 0) * basis[i];
        ritz.normalize();
        ham.apply(ritz, w);
        ++matvecs;
        const double resid = (w - theta[0] * ritz).norm();

        if (resid <= tol || exhausted || matvecs >= max_matvec) {
            if (resid > tol && !exhausted)
                throw ConvergenceFailure("lanczos iteration budget exhausted", resid);
            return {theta[0], std::move(ritz), resid};
        }

        // thick restart: keep the l lowest Ritz vectors plus the edge vector
        const int l = std::min(12, nT - 2);
        StateVector edge = std::move(basis.back());
        std::vector<StateVector> kept;
        kept.reserve(l + 1);
        for (int c = 0; c < l; ++c) {
            StateVector y = StateVector::Zero(dim);
            for (int i = 0; i < nT; ++i) y += S(i, c) * basis[i];
            y.normalize();
            kept.push_back(std::move(y));
        }
        kept.push_back(std::move(edge));
        basis = std::move(kept);
        T.setZero();
        for (int c = 0; c < l; ++c) {
            T(c, c) = theta[c];
            T(c, l) = beta_m * S(nT - 1, c);
            T(l, c) = T(c, l);
        }
    }
}

} // namespace detail

// Lowest k eigenpairs by sequential deflation: each pair is the lowest in
// the orthogonal complement of the previous ones, so degenerate levels are
// resolved with their multiplicity. Deterministic for a given seed; residual
// contract ||H v - E v|| <= tol holds for every reported pair.
inline SpectrumResult diagonalize_lanczos(const HamiltonianSpec& h, int k,
                                          std::uint64_t seed = kSolverSeed,
                                          double tol = 1e-9, int max_matvec = 40000) {
    const detail::CompiledHamiltonian ham(h);
    k = std::max(1, std::min<int>(k, int(ham.dim)));
    std::vector<StateVector> locked;
    SpectrumResult r;
    for (int c = 0; c < k; ++c) {
        auto pair = detail::lanczos_lowest(ham, locked, seed + 7919ULL * std::uint64_t(c), tol,
                                           max_matvec);
        r.eigenvalues.push_back(pair.value);
        if (c == 0) {
            r.ground_state = pair.vector;
            r.residual = pair.residual;
        }
        locked.push_back(std::move(pair.vector));
    }
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    detail::finish_result(r);
    return r;
}

enum class SolveMethod { automatic, dense, iterative };

// k lowest eigenpairs. Dense for small systems, diagonal fast path for
// Z-only specs, thick-restart Lanczos otherwise.
inline SpectrumResult diagonalize(const HamiltonianSpec& h, int k = 4,
                                  SolveMethod method = SolveMethod::automatic,
                                  std::uint64_t seed = kSolverSeed, double tol = 1e-9) {
    if (h.n_sites > 20) throw DimensionLimit("diagonalize supports at most 20 sites");
    if (method == SolveMethod::dense) return diagonalize_dense(h, k);
    if (method == SolveMethod::iterative) return diagonalize_lanczos(h, k, seed, tol);
    if (detail::is_diagonal(h)) return diagonalize_diagonal(h, k);
    if (h.n_sites <= 10) return diagonalize_dense(h, k);
    return diagonalize_lanczos(h, k, seed, tol);
}

} // namespace trispin
