#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "trispin/pauli.hpp"

namespace trispin {

struct ZeroCollision : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Statistics : std::uint8_t { bosonic, fermionic };

// Physical knobs of one triangle: per-species tunneling amplitudes on the
// three links and the on-site collisional couplings. Energies are in the
// caller's unit (hbar = 1).
struct LatticeParams {
    std::array<cplx, 3> j_up{};
    std::array<cplx, 3> j_down{};
    double u_upup = 1.0;
    double u_downdown = 1.0;
    double u_updown = 1.0;
    Statistics statistics = Statistics::bosonic;

    // Advisory validity check: the perturbative couplings assume tunneling
    // much weaker than collisions. The fermionic evaluator never reads
    // u_upup/u_downdown (they are treated as infinite).
    bool outside_mott_regime() const {
        double jmax = 0.0;
        for (auto& j : j_up) jmax = std::max(jmax, std::abs(j));
        for (auto& j : j_down) jmax = std::max(jmax, std::abs(j));
        double umin = std::abs(u_updown);
        if (statistics == Statistics::bosonic) {
            umin = std::min(umin, std::abs(u_upup));
            umin = std::min(umin, std::abs(u_downdown));
        }
        return jmax > 0.3 * umin;
    }
};

enum class CouplingVariant : std::uint8_t { bosonic, fermionic, complex2nd, complex3rd };

// Effective spin-Hamiltonian coefficients keyed by name ("A_1", "lam3",
// "mu4_2", "E", ...). Site-indexed entries use suffix _1.._3; the
// site-independent three-spin couplings lam3 / mu3 are stored without an
// index and returned for any j by value(name, j).
struct CouplingSet {
    CouplingVariant variant = CouplingVariant::bosonic;
    std::map<std::string, cplx> values;
    bool mott_warning = false;

    cplx at(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end()) throw std::out_of_range("no coupling named " + name);
        return it->second;
    }
    // Site-indexed lookup with the cyclic convention j+3 == j (1-based j).
    cplx value(const std::string& base, int j) const {
        auto it = values.find(base);
        if (it != values.end()) return it->second;   // site-independent scalar
        int jj = ((j - 1) % 3 + 3) % 3 + 1;
        return at(base + "_" + std::to_string(jj));
    }
    bool all_real(double tol = 1e-12) const {
        for (auto& [k, v] : values)
            if (std::abs(v.imag()) > tol) return false;
        return true;
    }
};

namespace detail {
inline int cyc(int j) { return (j % 3 + 3) % 3; }  // 0-based cyclic site index
}

// Third-order effective couplings for two bosonic species on a triangle.
// The species-interchanged partner of every printed term enters with the
// sign codified here: '+' for A and the two lambda exchange sets with
// symmetric roles (A, lam1, lam2), '-' for B, lam3, lam4.
inline CouplingSet bosonic_couplings(const LatticeParams& p) {
    if (p.statistics != Statistics::bosonic)
        throw std::invalid_argument("bosonic_couplings requires bosonic statistics");
    if (p.u_upup == 0.0 || p.u_downdown == 0.0 || p.u_updown == 0.0)
        throw ZeroCollision("collisional couplings must be nonzero");

    const double uu = p.u_upup, dd = p.u_downdown, ud = p.u_updown;
    const cplx pu = p.j_up[0] * p.j_up[1] * p.j_up[2];
    const cplx pd = p.j_down[0] * p.j_down[1] * p.j_down[2];

    CouplingSet c;
    c.variant = CouplingVariant::bosonic;
    c.mott_warning = p.outside_mott_regime();

    auto sq = [](cplx v) { return v * v; };
    for (int j = 0; j < 3; ++j) {
        const cplx ju = p.j_up[j], jd = p.j_down[j];
        const cplx ju2 = p.j_up[detail::cyc(j + 2)], jd2 = p.j_down[detail::cyc(j + 2)];
        const std::string sj = "_" + std::to_string(j + 1);

        const cplx a_up = -pu * (9.0 / (2 * uu * uu) + 3.0 / (2 * ud * ud) + 3.0 / (ud * uu))
                          - sq(ju) * (1.0 / uu + 1.0 / (2 * ud));
        const cplx a_dn = -pd * (9.0 / (2 * dd * dd) + 3.0 / (2 * ud * ud) + 3.0 / (ud * dd))
                          - sq(jd) * (1.0 / dd + 1.0 / (2 * ud));
        c.values["A" + sj] = a_up + a_dn;

        const cplx b_up = -(sq(ju) + sq(ju2)) / uu - (pu / uu) * (1.0 / ud + 9.0 / (2 * uu));
        const cplx b_dn = -(sq(jd) + sq(jd2)) / dd - (pd / dd) * (1.0 / ud + 9.0 / (2 * dd));
        c.values["B" + sj] = b_up - b_dn;

        const cplx l1_up = -pu * (9.0 / (2 * uu * uu) - 1.0 / (2 * ud * ud) - 1.0 / (ud * uu))
                           - sq(ju) * (1.0 / uu - 1.0 / (2 * ud));
        const cplx l1_dn = -pd * (9.0 / (2 * dd * dd) - 1.0 / (2 * ud * ud) - 1.0 / (ud * dd))
                           - sq(jd) * (1.0 / dd - 1.0 / (2 * ud));
        c.values["lam1" + sj] = l1_up + l1_dn;

        const cplx l2_up = -p.j_down[j] * p.j_up[detail::cyc(j + 1)] * p.j_up[detail::cyc(j + 2)] *
                               (3.0 / (2 * ud * ud) + 1.0 / (2 * uu * uu) + 1.0 / (ud * uu))
                           - ju * jd / (2 * ud);
        const cplx l2_dn = -p.j_up[j] * p.j_down[detail::cyc(j + 1)] * p.j_down[detail::cyc(j + 2)] *
                               (3.0 / (2 * ud * ud) + 1.0 / (2 * dd * dd) + 1.0 / (ud * dd))
                           - jd * ju / (2 * ud);
        c.values["lam2" + sj] = l2_up + l2_dn;

        const cplx l4_up = -(p.j_up[j] * p.j_up[detail::cyc(j + 1)] * p.j_down[detail::cyc(j + 2)] / uu) *
                           (1.0 / (2 * uu) + 1.0 / ud);
        const cplx l4_dn = -(p.j_down[j] * p.j_down[detail::cyc(j + 1)] * p.j_up[detail::cyc(j + 2)] / dd) *
                           (1.0 / (2 * dd) + 1.0 / ud);
        c.values["lam4" + sj] = l4_up - l4_dn;
    }
    const cplx l3_up = -(pu / uu) * (3.0 / (2 * uu) - 1.0 / ud);
    const cplx l3_dn = -(pd / dd) * (3.0 / (2 * dd) - 1.0 / ud);
    c.values["lam3"] = l3_up - l3_dn;
    return c;
}

// Third-order effective couplings for two fermionic species; the single
// collisional coupling is u_updown (same-species collisions are infinite
// and never read).
inline CouplingSet fermionic_couplings(const LatticeParams& p) {
    if (p.statistics != Statistics::fermionic)
        throw std::invalid_argument("fermionic_couplings requires fermionic statistics");
    const double u = p.u_updown;
    if (u == 0.0) throw ZeroCollision("u_updown must be nonzero");

    CouplingSet c;
    c.variant = CouplingVariant::fermionic;
    c.mott_warning = p.outside_mott_regime();

    const cplx pu = p.j_up[0] * p.j_up[1] * p.j_up[2];
    const cplx pd = p.j_down[0] * p.j_down[1] * p.j_down[2];
    for (int j = 0; j < 3; ++j) {
        const std::string sj = "_" + std::to_string(j + 1);
        const cplx ju = p.j_up[j], jd = p.j_down[j];
        c.values["mu1" + sj] = -(ju * ju + jd * jd) / (2 * u);
        c.values["mu2" + sj] = ju * jd / u;
        c.values["mu4" + sj] = 3.0 / (2 * u * u) *
            (p.j_up[j] * p.j_up[detail::cyc(j + 1)] * p.j_down[detail::cyc(j + 2)] -
             p.j_down[j] * p.j_down[detail::cyc(j + 1)] * p.j_up[detail::cyc(j + 2)]);
    }
    c.values["mu3"] = -(pu - pd) / (2 * u * u);
    return c;
}

enum class ComplexOrder : std::uint8_t { second, third };

// Effective couplings for complex (e.g. field-induced) tunneling phases on a
// uniform triangle: second order gives {A, B, C, D}, third order the
// time-reversal breaking pair {E, F}. Requires uniform per-species J.
inline CouplingSet complex_couplings(const LatticeParams& p, ComplexOrder order) {
    for (int j = 1; j < 3; ++j)
        if (std::abs(p.j_up[j] - p.j_up[0]) > 1e-14 || std::abs(p.j_down[j] - p.j_down[0]) > 1e-14)
            throw std::invalid_argument("complex_couplings requires uniform tunneling per species");
    const cplx ju = p.j_up[0], jd = p.j_down[0];

    CouplingSet c;
    c.mott_warning = p.outside_mott_regime();
    if (order == ComplexOrder::second) {
        const double uu = p.u_upup, dd = p.u_downdown, ud = p.u_updown;
        if (uu == 0.0 || dd == 0.0 || ud == 0.0)
            throw ZeroCollision("collisional couplings must be nonzero");
        c.variant = CouplingVariant::complex2nd;
        const double au = std::norm(ju), ad = std::norm(jd);
        c.values["A"] = -au / uu - ad / dd - (au + ad) / (2 * ud);
        c.values["B"] = -au / (2 * uu) + ad / (2 * dd);
        c.values["C"] = -au / uu - ad / dd + (au + ad) / (2 * ud);
        c.values["D"] = (ju * std::conj(jd) + std::conj(ju) * jd) / (2 * ud);
    } else {
        const double u = p.u_updown;
        if (u == 0.0) throw ZeroCollision("u_updown must be nonzero");
        c.variant = CouplingVariant::complex3rd;
        const cplx i(0.0, 1.0);
        c.values["E"] = i * ju * jd * (ju + jd) / (2 * u * u);
        c.values["F"] = i * ju * jd * (ju - jd) / (2 * u * u);
    }
    return c;
}

// Raman rotation angles; g(phi, theta) is the 2x2 unitary that mixes the two
// internal states during tunneling.
struct RamanRotation {
    double theta = 0.0;
    double phi = 0.0;

    Eigen::Matrix2cd matrix() const {
        const double ct = std::cos(theta), st = std::sin(theta);
        const cplx eip = std::exp(cplx(0.0, phi));
        Eigen::Matrix2cd g;
        g << ct, eip * st, st, -eip * ct;
        return g;
    }
};

// Conjugate every single-site Pauli operator of `h` by g(phi, theta) and
// expand back into Pauli strings. Coefficients of the merged strings have
// any imaginary residue below 1e-12 removed (the rotated operator is
// Hermitian, so they are real up to roundoff).
inline HamiltonianSpec raman_rotate(const HamiltonianSpec& h, const RamanRotation& r) {
    const Eigen::Matrix2cd g = r.matrix();
    const Eigen::Matrix2cd gd = g.adjoint();
    auto pauli2 = [](Axis a) {
        Eigen::Matrix2cd m;
        switch (a) {
            case Axis::X: m << 0, 1, 1, 0; break;
            case Axis::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
            default: m << 1, 0, 0, -1; break;
        }
        return m;
    };
    // decomposition coefficients of g sigma g^dag in the {I, X, Y, Z} basis
    std::array<std::array<cplx, 4>, 3> coef{};
    for (int a = 0; a < 3; ++a) {
        const Eigen::Matrix2cd rot = g * pauli2(Axis(a)) * gd;
        Eigen::Matrix2cd basis[4];
        basis[0].setIdentity();
        basis[1] = pauli2(Axis::X);
        basis[2] = pauli2(Axis::Y);
        basis[3] = pauli2(Axis::Z);
        for (int b = 0; b < 4; ++b) coef[a][b] = (basis[b] * rot).trace() / 2.0;
    }

    HamiltonianSpec out(h.n_sites, h.boundary);
    for (const auto& t : h.terms) {
        // product expansion over the term's sites
        std::vector<PauliTerm> partial{PauliTerm(t.coeff, {})};
        for (auto& [site, axis] : t.ops) {
            std::vector<PauliTerm> next;
            next.reserve(partial.size() * 4);
            for (auto& pt : partial) {
                for (int b = 0; b < 4; ++b) {
                    const cplx cb = coef[int(axis)][b];
                    if (std::abs(cb) < 1e-15) continue;
                    PauliTerm np = pt;
                    np.coeff *= cb;
                    if (b > 0) np.ops.emplace(site, Axis(b - 1));
                    next.push_back(std::move(np));
                }
            }
            partial = std::move(next);
        }
        for (auto& pt : partial) out.add(std::move(pt));
    }
    out.canonicalize();
    out.drop_imaginary_residue(1e-12);
    return out;
}

} // namespace trispin
