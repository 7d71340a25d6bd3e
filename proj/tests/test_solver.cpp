#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "trispin/builders.hpp"
#include "trispin/solver.hpp"

using namespace trispin;

TEST(Solver, ZeroHamiltonianIsFullyDegenerate) {
    HamiltonianSpec h(4, Boundary::periodic);
    auto r = diagonalize(h, 8);
    for (double e : r.eigenvalues) EXPECT_NEAR(e, 0.0, 1e-14);
    EXPECT_EQ(r.degeneracy, 16);
    EXPECT_EQ(r.gap, 0.0);
}

TEST(Solver, DenseAndLanczosAgree) {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 3; ++rep) {
        auto h = testutil::random_spec(8, 14, rng);
        auto dense = diagonalize_dense(h, 3);
        auto lan = diagonalize_lanczos(h, 3);
        EXPECT_NEAR(dense.eigenvalues[0], lan.eigenvalues[0], 1e-8);
        EXPECT_NEAR(dense.eigenvalues[1], lan.eigenvalues[1], 1e-7);
        EXPECT_LE(lan.residual, 1e-9);
    }
}

TEST(Solver, VariationalConsistency) {
    auto h = chain_hamiltonian(ChainModel::cluster, {{"b", 0.5}}, 12);
    auto r = diagonalize(h, 2);
    const cplx e = expectation(h, r.ground_state);
    EXPECT_NEAR(e.real(), r.eigenvalues[0], 1e-9);
    EXPECT_NEAR(e.imag(), 0.0, 1e-10);
    EXPECT_LE(r.residual, 1e-9);
}

TEST(Solver, ClusterChainGroundEnergyAndGap) {
    for (int n : {8, 10}) {
        auto h = chain_hamiltonian(ChainModel::cluster, {{"b", 0.0}}, n);
        auto r = diagonalize(h, 3, SolveMethod::dense);
        EXPECT_NEAR(r.eigenvalues[0], -double(n), 1e-10);
        EXPECT_EQ(r.degeneracy, 1);
        EXPECT_NEAR(r.gap, 2.0, 1e-10);
    }
}

TEST(Solver, DiagonalFastPathNeelChain) {
    auto h = chain_hamiltonian(ChainModel::ising3spin, {{"lam1", 1.0}}, 10);
    auto r = diagonalize(h, 4);
    EXPECT_NEAR(r.eigenvalues[0], -10.0, 1e-12);   // Neel state, -lam1 per site
    EXPECT_EQ(r.degeneracy, 2);                     // two staggered patterns
}

TEST(Solver, LanczosDeterministicForFixedSeed) {
    auto h = chain_hamiltonian(ChainModel::cluster, {{"b", 0.3}}, 11);
    auto a = diagonalize_lanczos(h, 1, kSolverSeed);
    auto b = diagonalize_lanczos(h, 1, kSolverSeed);
    EXPECT_EQ(a.eigenvalues[0], b.eigenvalues[0]);
    EXPECT_NEAR((a.ground_state - b.ground_state).norm(), 0.0, 0.0);
}
