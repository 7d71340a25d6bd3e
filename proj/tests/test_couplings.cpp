#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include <json.hpp>

#include "test_util.hpp"
#include "trispin/builders.hpp"
#include "trispin/couplings.hpp"

using namespace trispin;
using nlohmann::json;

namespace {

LatticeParams uniform_params(double ju, double jd, double u, Statistics st = Statistics::bosonic) {
    LatticeParams p;
    p.j_up = {ju, ju, ju};
    p.j_down = {jd, jd, jd};
    p.u_upup = p.u_downdown = p.u_updown = u;
    p.statistics = st;
    return p;
}

LatticeParams random_params(std::mt19937_64& rng, Statistics st) {
    std::uniform_real_distribution<double> j(-0.3, 0.3), u(0.5, 3.0);
    LatticeParams p;
    for (int i = 0; i < 3; ++i) {
        p.j_up[i] = j(rng);
        p.j_down[i] = j(rng);
    }
    p.u_upup = u(rng);
    p.u_downdown = u(rng);
    p.u_updown = u(rng);
    p.statistics = st;
    return p;
}

LatticeParams swapped_species(const LatticeParams& p) {
    LatticeParams q = p;
    std::swap(q.j_up, q.j_down);
    std::swap(q.u_upup, q.u_downdown);
    return q;
}

} // namespace

TEST(Couplings, SymbolicFixtures) {
    std::ifstream f(std::string(FIXTURE_DIR) + "/coupling_fixtures.json");
    ASSERT_TRUE(f.is_open());
    json cases = json::parse(f);
    ASSERT_GE(cases.size(), 52u);
    for (const auto& c : cases) {
        LatticeParams p;
        for (int i = 0; i < 3; ++i) {
            p.j_up[i] = c["j_up"][i].get<double>();
            p.j_down[i] = c["j_down"][i].get<double>();
        }
        p.u_updown = c["u_updown"].get<double>();
        CouplingSet got;
        if (c["kind"] == "bosonic") {
            p.u_upup = c["u_upup"].get<double>();
            p.u_downdown = c["u_downdown"].get<double>();
            p.statistics = Statistics::bosonic;
            got = bosonic_couplings(p);
        } else {
            p.statistics = Statistics::fermionic;
            got = fermionic_couplings(p);
        }
        for (auto& [name, ref] : c["couplings"].items()) {
            const double want = ref.get<double>();
            const double have = got.at(name).real();
            const double scale = std::max(1e-30, std::abs(want));
            EXPECT_LE(std::abs(have - want) / scale, 1e-12)
                << name << ": " << have << " vs " << want;
            EXPECT_NEAR(got.at(name).imag(), 0.0, 1e-15);
        }
    }
}

TEST(Couplings, IdenticalSpeciesKillThreeSpinTerms) {
    auto c = bosonic_couplings(uniform_params(0.1, 0.1, 1.0));
    EXPECT_NEAR(std::abs(c.at("lam3")), 0.0, 1e-16);
    for (int j = 1; j <= 3; ++j) EXPECT_NEAR(std::abs(c.value("lam4", j)), 0.0, 1e-16);
}

TEST(Couplings, NoTunnelingMeansNoCouplings) {
    auto c = bosonic_couplings(uniform_params(0.0, 0.0, 1.0));
    for (auto& [k, v] : c.values) EXPECT_NEAR(std::abs(v), 0.0, 1e-16) << k;
    auto f = fermionic_couplings(uniform_params(0.0, 0.0, 1.0, Statistics::fermionic));
    for (auto& [k, v] : f.values) EXPECT_NEAR(std::abs(v), 0.0, 1e-16) << k;
}

TEST(Couplings, FermionicSpinIndependentTunneling) {
    auto c = fermionic_couplings(uniform_params(0.12, 0.12, 1.3, Statistics::fermionic));
    EXPECT_NEAR(std::abs(c.at("mu3")), 0.0, 1e-16);
    for (int j = 1; j <= 3; ++j) EXPECT_NEAR(std::abs(c.value("mu4", j)), 0.0, 1e-16);
}

TEST(Couplings, FermionicSingleSpeciesClosedForm) {
    const double j = 0.12, u = 1.0;
    LatticeParams p = uniform_params(j, 0.0, u, Statistics::fermionic);
    auto c = fermionic_couplings(p);
    EXPECT_NEAR(c.value("mu1", 1).real(), -j * j / (2 * u), 1e-15);
    EXPECT_NEAR(std::abs(c.value("mu2", 2)), 0.0, 1e-16);
    EXPECT_NEAR(c.at("mu3").real(), -j * j * j / (2 * u * u), 1e-15);
    EXPECT_NEAR(std::abs(c.value("mu4", 3)), 0.0, 1e-16);
}

TEST(Couplings, FermionicExactThreeSpinIdentity) {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        auto p = random_params(rng, Statistics::fermionic);
        auto c = fermionic_couplings(p);
        const cplx want = -(p.j_up[0] * p.j_up[1] * p.j_up[2] -
                            p.j_down[0] * p.j_down[1] * p.j_down[2]) /
                          (2.0 * p.u_updown * p.u_updown);
        EXPECT_NEAR(std::abs(c.at("mu3") - want), 0.0, 1e-18);
    }
}

TEST(Couplings, SpeciesSwapSymmetry) {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto p = random_params(rng, Statistics::bosonic);
        const auto a = bosonic_couplings(p);
        const auto b = bosonic_couplings(swapped_species(p));
        for (int j = 1; j <= 3; ++j) {
            EXPECT_NEAR(std::abs(a.value("A", j) - b.value("A", j)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(a.value("lam1", j) - b.value("lam1", j)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(a.value("lam2", j) - b.value("lam2", j)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(a.value("B", j) + b.value("B", j)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(a.value("lam4", j) + b.value("lam4", j)), 0.0, 1e-14);
        }
        EXPECT_NEAR(std::abs(a.at("lam3") + b.at("lam3")), 0.0, 1e-14);

        auto pf = p, pfs = swapped_species(p);
        pf.statistics = pfs.statistics = Statistics::fermionic;
        const auto fa = fermionic_couplings(pf);
        const auto fb = fermionic_couplings(pfs);
        for (int j = 1; j <= 3; ++j) {
            EXPECT_NEAR(std::abs(fa.value("mu1", j) - fb.value("mu1", j)), 0.0, 1e-16);
            EXPECT_NEAR(std::abs(fa.value("mu2", j) - fb.value("mu2", j)), 0.0, 1e-16);
            EXPECT_NEAR(std::abs(fa.value("mu4", j) + fb.value("mu4", j)), 0.0, 1e-16);
        }
        EXPECT_NEAR(std::abs(fa.at("mu3") + fb.at("mu3")), 0.0, 1e-16);
    }
}

TEST(Couplings, CubicAndQuadraticScaling) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> sdist(0.3, 2.0);
    for (int rep = 0; rep < 1000; ++rep) {
        auto p = random_params(rng, Statistics::bosonic);
        const double s = sdist(rng);
        auto ps = p;
        for (int i = 0; i < 3; ++i) {
            ps.j_up[i] *= s;
            ps.j_down[i] *= s;
        }
        const auto a = bosonic_couplings(p), b = bosonic_couplings(ps);
        const double s3 = s * s * s;
        EXPECT_NEAR(std::abs(b.at("lam3") - s3 * a.at("lam3")), 0.0,
                    1e-13 * std::max(1.0, std::abs(a.at("lam3"))));
        for (int j = 1; j <= 3; ++j)
            EXPECT_NEAR(std::abs(b.value("lam4", j) - s3 * a.value("lam4", j)), 0.0, 1e-13);

        auto pf = p, pfs = ps;
        pf.statistics = pfs.statistics = Statistics::fermionic;
        const auto fa = fermionic_couplings(pf), fb = fermionic_couplings(pfs);
        EXPECT_NEAR(std::abs(fb.at("mu3") - s3 * fa.at("mu3")), 0.0, 1e-14);
        for (int j = 1; j <= 3; ++j) {
            EXPECT_NEAR(std::abs(fb.value("mu1", j) - s * s * fa.value("mu1", j)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(fb.value("mu2", j) - s * s * fa.value("mu2", j)), 0.0, 1e-14);
            EXPECT_NEAR(std::abs(fb.value("mu4", j) - s3 * fa.value("mu4", j)), 0.0, 1e-14);
        }

        auto c2a = complex_couplings(pf, ComplexOrder::second);
        auto c2b = complex_couplings(pfs, ComplexOrder::second);
        for (const char* k : {"A", "B", "C", "D"})
            EXPECT_NEAR(std::abs(c2b.at(k) - s * s * c2a.at(k)), 0.0, 1e-13);
        auto c3a = complex_couplings(pf, ComplexOrder::third);
        auto c3b = complex_couplings(pfs, ComplexOrder::third);
        EXPECT_NEAR(std::abs(c3b.at("E") - s3 * c3a.at("E")), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(c3b.at("F") - s3 * c3a.at("F")), 0.0, 1e-14);
    }
}

TEST(Couplings, ChiralPointHasOnlyF) {
    // purely imaginary opposite tunneling: J_down = -J_up = i kappa
    const double kappa = 0.2, u = 1.5;
    LatticeParams p;
    p.j_up = {cplx(0, -kappa), cplx(0, -kappa), cplx(0, -kappa)};
    p.j_down = {cplx(0, kappa), cplx(0, kappa), cplx(0, kappa)};
    p.u_updown = u;
    auto c = complex_couplings(p, ComplexOrder::third);
    EXPECT_NEAR(std::abs(c.at("E")), 0.0, 1e-16);
    EXPECT_NEAR(c.at("F").real(), kappa * kappa * kappa / (u * u), 1e-15);
    EXPECT_NEAR(c.at("F").imag(), 0.0, 1e-16);
    EXPECT_TRUE(c.all_real());
}

TEST(Couplings, EqualSpeciesKillF) {
    LatticeParams p = uniform_params(0.0, 0.0, 1.0);
    p.j_up = p.j_down = {cplx(0.1, 0.05), cplx(0.1, 0.05), cplx(0.1, 0.05)};
    auto c = complex_couplings(p, ComplexOrder::third);
    EXPECT_NEAR(std::abs(c.at("F")), 0.0, 1e-16);
}

TEST(Couplings, RealTunnelingSecondOrderD) {
    const double j = 0.17, u = 2.0;
    auto c = complex_couplings(uniform_params(j, j, u), ComplexOrder::second);
    EXPECT_NEAR(c.at("D").real(), j * j / u, 1e-15);
}

TEST(Couplings, TimeReversalNegatesEandF) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> d(-0.3, 0.3);
    for (int rep = 0; rep < 200; ++rep) {
        LatticeParams p;
        const cplx ju(0, d(rng)), jd(0, d(rng));   // imaginary tunneling
        p.j_up = {ju, ju, ju};
        p.j_down = {jd, jd, jd};
        p.u_upup = p.u_downdown = p.u_updown = 1.0 + std::abs(d(rng));
        auto pc = p;
        for (int i = 0; i < 3; ++i) {
            pc.j_up[i] = std::conj(pc.j_up[i]);
            pc.j_down[i] = std::conj(pc.j_down[i]);
        }
        auto a3 = complex_couplings(p, ComplexOrder::third);
        auto b3 = complex_couplings(pc, ComplexOrder::third);
        EXPECT_NEAR(std::abs(a3.at("E") + b3.at("E")), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(a3.at("F") + b3.at("F")), 0.0, 1e-15);
        auto a2 = complex_couplings(p, ComplexOrder::second);
        auto b2 = complex_couplings(pc, ComplexOrder::second);
        for (const char* k : {"A", "B", "C", "D"})
            EXPECT_NEAR(std::abs(a2.at(k) - b2.at(k)), 0.0, 1e-15);
    }
}

TEST(Couplings, ZeroCollisionRejected) {
    auto p = uniform_params(0.1, 0.1, 0.0);
    EXPECT_THROW(bosonic_couplings(p), ZeroCollision);
    p.statistics = Statistics::fermionic;
    EXPECT_THROW(fermionic_couplings(p), ZeroCollision);
    EXPECT_THROW(complex_couplings(p, ComplexOrder::third), ZeroCollision);
}

TEST(Couplings, MottWarningFlag) {
    EXPECT_FALSE(bosonic_couplings(uniform_params(0.1, 0.1, 1.0)).mott_warning);
    EXPECT_TRUE(bosonic_couplings(uniform_params(0.4, 0.1, 1.0)).mott_warning);
}

TEST(Raman, RotationMatrixIsUnitary) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> th(0, M_PI), ph(0, 2 * M_PI);
    for (int rep = 0; rep < 500; ++rep) {
        const RamanRotation r{th(rng), ph(rng)};
        const Eigen::Matrix2cd g = r.matrix();
        EXPECT_LE((g * g.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Raman, ZeroAnglesFixZTypeHamiltonians) {
    HamiltonianSpec h(3, Boundary::periodic);
    h.add(0.7, {{0, Axis::Z}});
    h.add(-0.3, {{0, Axis::Z}, {1, Axis::Z}, {2, Axis::Z}});
    auto out = raman_rotate(h, RamanRotation{0.0, 0.0});
    EXPECT_LE((to_matrix(out) - to_matrix(h)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Raman, QuarterTurnMapsZToX) {
    HamiltonianSpec h(2, Boundary::open);
    h.add(1.0, {{0, Axis::Z}});
    auto out = raman_rotate(h, RamanRotation{M_PI / 4, 0.0});
    ASSERT_EQ(out.terms.size(), 1u);
    EXPECT_EQ(out.terms[0].ops.size(), 1u);
    EXPECT_EQ(out.terms[0].ops.at(0), Axis::X);
    EXPECT_NEAR(std::abs(out.terms[0].coeff - cplx(1.0, 0.0)), 0.0, 1e-14);
}

TEST(Raman, ConjugationPreservesSpectrum) {
    std::mt19937_64 rng(67);
    auto h = testutil::random_spec(3, 8, rng);
    std::uniform_real_distribution<double> th(0, M_PI), ph(0, 2 * M_PI);
    auto out = raman_rotate(h, RamanRotation{th(rng), ph(rng)});
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ea(to_matrix(h)), eb(to_matrix(out));
    EXPECT_LE((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Raman, RotatedHamiltonianStaysHermitian) {
    std::mt19937_64 rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        auto h = testutil::random_spec(3, 6, rng);
        std::uniform_real_distribution<double> th(0, M_PI), ph(0, 2 * M_PI);
        auto out = raman_rotate(h, RamanRotation{th(rng), ph(rng)});
        const MatrixXcd m = to_matrix(out);
        EXPECT_LE((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        for (auto& t : out.terms) EXPECT_NEAR(t.coeff.imag(), 0.0, 1e-12);
    }
}
