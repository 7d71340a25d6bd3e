#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "trispin/builders.hpp"
#include "trispin/correlations.hpp"
#include "trispin/solver.hpp"

namespace trispin {

struct GridEmpty : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Phase : std::uint8_t {
    ferromagnetic,
    neel_period2,
    period3_family,
    boundary_firstorder,
    polarized_x,
    unclassified,
};

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::ferromagnetic: return "ferromagnetic";
        case Phase::neel_period2: return "neel_period2";
        case Phase::period3_family: return "period3_family";
        case Phase::boundary_firstorder: return "boundary_firstorder";
        case Phase::polarized_x: return "polarized_x";
        default: return "unclassified";
    }
}

struct PhaseLabel {
    Phase phase = Phase::unclassified;
    std::map<std::string, double> order_parameters;   // candidate energies per site
};

// Classical (zero transverse field) ground-state classifier of the
// zz + zzz chain. Candidate energies per site:
//   Neel period-2:          -lam1
//   period-3 family:        -lam1/3 - |lam3|
//   ferromagnetic branch:    lam1 - |lam3|
// First-order boundary on the line 2 lam1 = 3 |lam3| (lam1 > 0).
inline PhaseLabel classify_classical_phase(double lam1, double lam3) {
    PhaseLabel out;
    const double e_neel = -lam1;
    const double e_p3 = -lam1 / 3.0 - std::abs(lam3);
    const double e_ferro = lam1 - std::abs(lam3);
    out.order_parameters = {
        {"e_neel", e_neel}, {"e_period3", e_p3}, {"e_ferro", e_ferro}};

    const double scale = std::max({1.0, std::abs(lam1), std::abs(lam3)});
    if (std::abs(lam1) <= 1e-12 * scale && std::abs(lam3) <= 1e-12 * scale) {
        out.phase = Phase::unclassified;   // zero Hamiltonian
        return out;
    }
    if (lam1 < 0.0) {
        // the ferromagnetic branch wins for any lam3 when the Ising term is
        // ferromagnetic (it undercuts the period-3 family by 4|lam1|/3)
        out.phase = Phase::ferromagnetic;
        return out;
    }
    if (lam1 <= 1e-12 * scale) {
        out.phase = Phase::period3_family;   // includes the ferromagnetic member
        return out;
    }
    const double line = 2.0 * lam1 - 3.0 * std::abs(lam3);
    if (std::abs(line) <= 1e-12 * scale)
        out.phase = Phase::boundary_firstorder;
    else if (line > 0.0)
        out.phase = Phase::neel_period2;
    else
        out.phase = Phase::period3_family;
    return out;
}

struct SweepRow {
    double bx;
    double e0;
    double gap;
    double sf_pi;      // period-2 structure factor
    double sf_2pi3;    // period-3 structure factor
    double mx;         // site-averaged <sigma_x>
};

// Ground-state scan of the zz + zzz chain in a transverse field. Order
// parameters come from two-point structure factors
//   S(q) = (1/n) sum_r e^{i q r} <sz_0 sz_r>
// which are basis independent (finite rings have <sz> = 0 by symmetry).
inline std::vector<SweepRow> order_parameter_sweep(double lam1, double lam3,
                                                   const std::vector<double>& bx_grid, int n,
                                                   std::uint64_t seed = kSolverSeed) {
    if (bx_grid.empty()) throw GridEmpty("empty transverse-field grid");
    std::vector<SweepRow> rows;
    rows.reserve(bx_grid.size());
    for (double bx : bx_grid) {
        auto h = chain_hamiltonian(ChainModel::ising3spin,
                                   {{"lam1", lam1}, {"lam3", lam3}, {"bx", bx}}, n);
        auto spec = diagonalize(h, 4, SolveMethod::automatic, seed);
        const auto& gs = spec.ground_state;
        double spi = 1.0, s2p3 = 1.0;   // r = 0 term of each sum
        for (int r = 1; r < n; ++r) {
            const double c = two_point(gs, n, 0, r, Axis::Z, Axis::Z, false);
            spi += std::cos(M_PI * r) * c;
            s2p3 += std::cos(2.0 * M_PI * r / 3.0) * c;
        }
        double mx = 0.0;
        for (int j = 0; j < n; ++j)
            mx += pauli_expectation(gs, n, {{j, Axis::X}}).real();
        rows.push_back({bx, spec.eigenvalues.front(), spec.gap, spi / n, s2p3 / n, mx / n});
    }
    return rows;
}

} // namespace trispin
