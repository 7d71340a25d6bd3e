#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "trispin/pauli.hpp"
#include "trispin/quadrature.hpp"

namespace trispin {

struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BadBlock : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// <gs| P |gs> for a single Pauli string on a normalized state.
inline cplx pauli_expectation(const StateVector& gs, int n_sites,
                              const std::map<int, Axis>& ops) {
    HamiltonianSpec h(n_sites, Boundary::periodic);
    h.add(PauliTerm(1.0, ops));
    return gs.dot(apply(h, gs));
}

// Two-point correlator <sigma_a^alpha sigma_b^beta>, optionally connected.
inline double two_point(const StateVector& gs, int n_sites, int a, int b, Axis alpha, Axis beta,
                        bool connected) {
    if (a < 0 || a >= n_sites || b < 0 || b >= n_sites)
        throw SiteOutOfRange("correlator site outside chain");
    if (a == b) throw std::invalid_argument("two_point needs distinct sites");
    const cplx raw = pauli_expectation(gs, n_sites, {{a, alpha}, {b, beta}});
    double value = raw.real();
    if (connected) {
        const cplx sa = pauli_expectation(gs, n_sites, {{a, alpha}});
        const cplx sb = pauli_expectation(gs, n_sites, {{b, beta}});
        value -= sa.real() * sb.real();
    }
    return value;
}

// The two lattice integrals behind the thermodynamic-limit correlators of the
// three-spin chain. Integrands are even in r, with square-root kinks pinned
// at r = 0, +-pi when |B| = 1; breakpoints are placed there unconditionally.
//   psi_ab = (1/4pi) Int_{-2pi}^{2pi} sin(r) sin((b-a) r / 2) / sqrt(B^2+1+2B cos r) dr
//   chi_ab = (1/4pi) Int_{-2pi}^{2pi} (B + cos r) cos((b-a) r / 2) / sqrt(...) dr
struct PsiChi {
    double psi;
    double chi;
};

inline PsiChi psi_chi_integrals(double b_field, int separation) {
    if (separation < 0) throw std::invalid_argument("separation must be >= 0");
    const double B = b_field;
    auto root = [B](double r) {
        return std::sqrt(std::max(0.0, B * B + 1.0 + 2.0 * B * std::cos(r)));
    };
    const double s = double(separation);
    auto fpsi = [&](double r) {
        const double d = root(r);
        if (d == 0.0) return 0.0;
        return std::sin(r) * std::sin(s * r / 2.0) / d;
    };
    auto fchi = [&](double r) {
        const double d = root(r);
        if (d == 0.0) return 0.0;   // integrable endpoint of the kink
        return (B + std::cos(r)) * std::cos(s * r / 2.0) / d;
    };
    const std::vector<double> brk{0.0, M_PI / 2, M_PI, 3 * M_PI / 2, 2 * M_PI};
    // even integrands: integrate [0, 2pi] and double
    const double psi = 2.0 * integrate_adaptive(fpsi, brk, 1e-12) / (4.0 * M_PI);
    const double chi = 2.0 * integrate_adaptive(fchi, brk, 1e-12) / (4.0 * M_PI);
    return {psi, chi};
}

// Connected zz correlator of the three-spin chain in the thermodynamic limit.
inline double czz_analytic(double b_field, int a, int b) {
    const auto pc = psi_chi_integrals(b_field, std::abs(b - a));
    return pc.psi * pc.psi - pc.chi * pc.chi;
}

struct LengthEstimate {
    double xi = 0.0;
    bool infinite = false;
    double slope = 0.0;
    double residual = 0.0;      // RMS of the log-linear fit
    int l_min = 0, l_max = 0;   // window actually used
    int excluded = 0;           // non-positive values dropped from the fit
};

enum class LengthKind : std::uint8_t { correlation, entanglement };

// Least-squares decay length from values(L): xi = -1 / slope of log|v| vs L.
// Flagged infinite when the slope is below `slope_threshold` in magnitude or
// the kept values never decrease. Values at or below `zero_tol` count as
// zeros and are excluded (recorded in `excluded`).
inline LengthEstimate correlation_length(const std::map<int, double>& values, LengthKind kind,
                                         double slope_threshold = 1e-3,
                                         double zero_tol = 1e-12) {
    (void)kind;
    std::vector<std::pair<int, double>> kept;
    int excluded = 0;
    for (auto& [l, v] : values) {
        if (v > zero_tol)
            kept.emplace_back(l, v);
        else
            ++excluded;
    }
    if (kept.size() < 4)
        throw InsufficientData("correlation_length needs at least 4 positive data points");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [l, v] : kept) {
        const double x = l, y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double npts = double(kept.size());
    const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / npts;
    double rss = 0.0;
    bool nondecreasing = true;
    for (size_t i = 0; i < kept.size(); ++i) {
        const double pred = intercept + slope * kept[i].first;
        rss += (std::log(kept[i].second) - pred) * (std::log(kept[i].second) - pred);
        if (i > 0 && kept[i].second < kept[i - 1].second) nondecreasing = false;
    }

    LengthEstimate e;
    e.slope = slope;
    e.residual = std::sqrt(rss / npts);
    e.l_min = kept.front().first;
    e.l_max = kept.back().first;
    e.excluded = excluded;
    e.infinite = std::abs(slope) <= slope_threshold || nondecreasing;
    e.xi = e.infinite ? std::numeric_limits<double>::infinity() : -1.0 / slope;
    return e;
}

// Von Neumann entropy (bits) of the first L sites of a pure state.
inline double block_entropy(const StateVector& gs, int n_sites, int l_block) {
    if (l_block < 1 || l_block >= n_sites) throw BadBlock("block length must be in [1, n)");
    const std::int64_t rows = std::int64_t(1) << l_block;
    const std::int64_t cols = std::int64_t(1) << (n_sites - l_block);
    // site j <-> bit j, so the first L sites are the low bits (fastest index)
    Eigen::MatrixXcd m(rows, cols);
    for (std::int64_t c = 0; c < cols; ++c)
        for (std::int64_t r = 0; r < rows; ++r) m(r, c) = gs[(c << l_block) | r];
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    double s = 0.0;
    for (double sv : svd.singularValues()) {
        const double p = sv * sv;
        if (p > 1e-12) s -= p * std::log2(p);
    }
    return s;
}

struct CensusResult {
    double fraction = 0.0;
    int nonvanishing = 0;
    int samples = 0;
};

// Fraction of random Pauli windows (letters I, X, Y, Z on n_window contiguous
// sites starting at site 0) with |expectation| above 1e-8.
inline CensusResult correlation_census(const StateVector& gs, int n_sites, int n_window,
                                       int samples, std::uint64_t seed) {
    if (n_window <= 4) throw std::invalid_argument("census window must exceed 4 sites");
    if (n_window > n_sites) throw std::invalid_argument("census window larger than chain");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, 3);
    CensusResult r;
    r.samples = samples;
    for (int s = 0; s < samples; ++s) {
        std::map<int, Axis> ops;
        for (int j = 0; j < n_window; ++j) {
            const int pick = dist(rng);
            if (pick > 0) ops.emplace(j, Axis(pick - 1));
        }
        const cplx v = ops.empty() ? cplx(1.0, 0.0) : pauli_expectation(gs, n_sites, ops);
        if (std::abs(v) > 1e-8) ++r.nonvanishing;
    }
    r.fraction = double(r.nonvanishing) / double(samples);
    return r;
}

// Exhaustive version over all 4^n_window windows (test oracle scale).
inline CensusResult correlation_census_exact(const StateVector& gs, int n_sites, int n_window) {
    if (n_window <= 4) throw std::invalid_argument("census window must exceed 4 sites");
    std::int64_t total = 1;
    for (int j = 0; j < n_window; ++j) total *= 4;
    CensusResult r;
    r.samples = int(total);
    for (std::int64_t code = 0; code < total; ++code) {
        std::map<int, Axis> ops;
        std::int64_t c = code;
        for (int j = 0; j < n_window; ++j, c /= 4) {
            const int pick = int(c % 4);
            if (pick > 0) ops.emplace(j, Axis(pick - 1));
        }
        const cplx v = ops.empty() ? cplx(1.0, 0.0) : pauli_expectation(gs, n_sites, ops);
        if (std::abs(v) > 1e-8) ++r.nonvanishing;
    }
    r.fraction = double(r.nonvanishing) / double(total);
    return r;
}

} // namespace trispin
