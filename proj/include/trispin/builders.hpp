#pragma once

#include <map>
#include <string>
#include <vector>

#include "trispin/couplings.hpp"
#include "trispin/pauli.hpp"

namespace trispin {

struct VariantMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TooFewSites : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BadTriple : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Three-site effective Hamiltonian from a bosonic or fermionic coupling set.
// The cyclic j-sums are emitted literally, one term per j (canonicalize()
// merges repeats such as the three copies of the zzz string).
inline HamiltonianSpec triangle_hamiltonian(const CouplingSet& c) {
    if (c.variant != CouplingVariant::bosonic && c.variant != CouplingVariant::fermionic)
        throw VariantMismatch("triangle_hamiltonian needs a bosonic or fermionic coupling set");
    HamiltonianSpec h(3, Boundary::periodic);
    auto s = [](int j) { return j % 3; };

    if (c.variant == CouplingVariant::bosonic) {
        for (int j = 0; j < 3; ++j) {
            const int j1 = j + 1;
            h.add(c.value("A", j1), {});
            h.add(c.value("B", j1), {{s(j), Axis::Z}});
            h.add(c.value("lam1", j1), {{s(j), Axis::Z}, {s(j + 1), Axis::Z}});
            h.add(c.value("lam2", j1), {{s(j), Axis::X}, {s(j + 1), Axis::X}});
            h.add(c.value("lam2", j1), {{s(j), Axis::Y}, {s(j + 1), Axis::Y}});
            h.add(c.value("lam3", j1), {{s(j), Axis::Z}, {s(j + 1), Axis::Z}, {s(j + 2), Axis::Z}});
            h.add(c.value("lam4", j1), {{s(j), Axis::X}, {s(j + 1), Axis::Z}, {s(j + 2), Axis::X}});
            h.add(c.value("lam4", j1), {{s(j), Axis::Y}, {s(j + 1), Axis::Z}, {s(j + 2), Axis::Y}});
        }
    } else {
        for (int j = 0; j < 3; ++j) {
            const int j1 = j + 1;
            // mu1 (I - zz), mu3 (z - zzz) enter as the printed combinations
            h.add(c.value("mu1", j1), {});
            h.add(-c.value("mu1", j1), {{s(j), Axis::Z}, {s(j + 1), Axis::Z}});
            h.add(c.value("mu3", j1), {{s(j), Axis::Z}});
            h.add(-c.value("mu3", j1), {{0, Axis::Z}, {1, Axis::Z}, {2, Axis::Z}});
            h.add(c.value("mu2", j1), {{s(j), Axis::X}, {s(j + 1), Axis::X}});
            h.add(c.value("mu2", j1), {{s(j), Axis::Y}, {s(j + 1), Axis::Y}});
            h.add(c.value("mu4", j1), {{s(j), Axis::X}, {s(j + 1), Axis::Z}, {s(j + 2), Axis::X}});
            h.add(c.value("mu4", j1), {{s(j), Axis::Y}, {s(j + 1), Axis::Z}, {s(j + 2), Axis::Y}});
        }
    }
    h.canonicalize();
    return h;
}

enum class ChainModel : std::uint8_t { ising3spin, cluster, general_ham1 };

// Chain builders. Open boundaries drop every term whose site set would wrap.
//   ising3spin: lam1 * zz + lam3 * zzz + bx * x  (params lam1, lam3, bx)
//   cluster:    x z x + b * z                    (params b)
//   general_ham1: full coupling map with keys A_j, B_j, lam1_j, lam2_j,
//                 lam3, lam4_j as produced by bosonic_couplings.
inline HamiltonianSpec chain_hamiltonian(ChainModel model,
                                         const std::map<std::string, double>& params, int n,
                                         Boundary boundary = Boundary::periodic) {
    if (n < 3) throw TooFewSites("chain models need at least 3 sites");
    HamiltonianSpec h(n, boundary);
    const bool open = boundary == Boundary::open;
    auto get = [&](const std::string& k, double dflt = 0.0) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    auto wraps = [&](int i, int span) { return i + span >= n; };

    switch (model) {
        case ChainModel::ising3spin: {
            const double l1 = get("lam1"), l3 = get("lam3"), bx = get("bx");
            for (int i = 0; i < n; ++i) {
                if (l1 != 0.0 && !(open && wraps(i, 1)))
                    h.add(l1, {{i, Axis::Z}, {(i + 1) % n, Axis::Z}});
                if (l3 != 0.0 && !(open && wraps(i, 2)))
                    h.add(l3, {{i, Axis::Z}, {(i + 1) % n, Axis::Z}, {(i + 2) % n, Axis::Z}});
                if (bx != 0.0) h.add(bx, {{i, Axis::X}});
            }
            break;
        }
        case ChainModel::cluster: {
            const double b = get("b");
            for (int i = 0; i < n; ++i) {
                if (!(open && wraps(i, 2)))
                    h.add(1.0, {{i, Axis::X}, {(i + 1) % n, Axis::Z}, {(i + 2) % n, Axis::X}});
                if (b != 0.0) h.add(b, {{i, Axis::Z}});
            }
            break;
        }
        case ChainModel::general_ham1: {
            auto idx = [](const std::string& base, int j) {
                return base + "_" + std::to_string(j % 3 + 1);
            };
            for (int i = 0; i < n; ++i) {
                h.add(get(idx("A", i)), {});
                h.add(get(idx("B", i)), {{i, Axis::Z}});
                if (!(open && wraps(i, 1))) {
                    h.add(get(idx("lam1", i)), {{i, Axis::Z}, {(i + 1) % n, Axis::Z}});
                    h.add(get(idx("lam2", i)), {{i, Axis::X}, {(i + 1) % n, Axis::X}});
                    h.add(get(idx("lam2", i)), {{i, Axis::Y}, {(i + 1) % n, Axis::Y}});
                }
                if (!(open && wraps(i, 2))) {
                    h.add(get("lam3"), {{i, Axis::Z}, {(i + 1) % n, Axis::Z}, {(i + 2) % n, Axis::Z}});
                    h.add(get(idx("lam4", i)), {{i, Axis::X}, {(i + 1) % n, Axis::Z}, {(i + 2) % n, Axis::X}});
                    h.add(get(idx("lam4", i)), {{i, Axis::Y}, {(i + 1) % n, Axis::Z}, {(i + 2) % n, Axis::Y}});
                }
            }
            break;
        }
    }
    h.canonicalize();
    return h;
}

// F * sum over triangles of sigma_i . (sigma_j x sigma_k), expanded into the
// six epsilon_{lmn} strings with coefficients +-F.
inline HamiltonianSpec chiral_hamiltonian(double f, const std::vector<std::array<int, 3>>& triangles,
                                          int n) {
    HamiltonianSpec h(n, Boundary::periodic);
    static const int eps[6][4] = {
        // l, m, n, sign with (l,m,n) in {0:X, 1:Y, 2:Z}
        {0, 1, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, +1},
        {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1},
    };
    for (auto& t : triangles) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || t[0] >= n || t[1] >= n || t[2] >= n ||
            t[0] < 0 || t[1] < 0 || t[2] < 0)
            throw BadTriple("triangle sites must be three distinct sites below n");
        if (f == 0.0) continue;
        for (auto& e : eps)
            h.add(f * double(e[3]),
                  {{t[0], Axis(e[0])}, {t[1], Axis(e[1])}, {t[2], Axis(e[2])}});
    }
    h.canonicalize();
    return h;
}

// Pair of lowest-sector chirality eigenstates on one triangle (total spin
// +-1/2), for the ground sector of +F * chirality with F > 0. omega is the
// cube root of unity exp(+2 pi i / 3).
inline std::pair<StateVector, StateVector> chiral_ground_pair() {
    const cplx om = std::exp(cplx(0.0, 2.0 * M_PI / 3.0));
    const double s3 = std::sqrt(3.0);
    // basis: bit j of the index = site j, bit 0 means up
    auto idx = [](int b0, int b1, int b2) { return b0 | (b1 << 1) | (b2 << 2); };
    StateVector plus_half = StateVector::Zero(8), minus_half = StateVector::Zero(8);
    plus_half[idx(0, 0, 1)] = 1.0 / s3;          // |up up down>
    plus_half[idx(0, 1, 0)] = om / s3;           // |up down up>
    plus_half[idx(1, 0, 0)] = om * om / s3;      // |down up up>
    minus_half[idx(1, 1, 0)] = -1.0 / s3;        // |down down up>
    minus_half[idx(1, 0, 1)] = -om / s3;         // |down up down>
    minus_half[idx(0, 1, 1)] = -om * om / s3;    // |up down down>
    return {plus_half, minus_half};
}

} // namespace trispin
