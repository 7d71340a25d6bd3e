#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace trispin {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

enum class Axis : std::uint8_t { X, Y, Z };

inline char axis_char(Axis a) {
    switch (a) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        default: return 'Z';
    }
}

inline Axis axis_from_char(char c) {
    switch (c) {
        case 'X': case 'x': return Axis::X;
        case 'Y': case 'y': return Axis::Y;
        case 'Z': case 'z': return Axis::Z;
        default: throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
    }
}

struct DimensionLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SiteOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// One weighted Pauli string. Sites absent from `ops` carry the identity.
// The map keeps sites ordered, so equal strings compare equal directly.
struct PauliTerm {
    cplx coeff{0.0, 0.0};
    std::map<int, Axis> ops;

    PauliTerm() = default;
    PauliTerm(cplx c, std::map<int, Axis> o) : coeff(c), ops(std::move(o)) {}

    bool same_string(const PauliTerm& other) const { return ops == other.ops; }
};

enum class Boundary : std::uint8_t { periodic, open };

// Sum of Pauli strings on n_sites qubits. Site indices are 0-based internally;
// all user-facing text output is 1-based.
struct HamiltonianSpec {
    int n_sites = 0;
    Boundary boundary = Boundary::periodic;
    std::vector<PauliTerm> terms;

    HamiltonianSpec() = default;
    HamiltonianSpec(int n, Boundary b) : n_sites(n), boundary(b) {}

    void add(cplx coeff, std::initializer_list<std::pair<int, Axis>> ops) {
        PauliTerm t;
        t.coeff = coeff;
        for (auto& [s, a] : ops) t.ops.emplace(s, a);
        validate_term(t);
        terms.push_back(std::move(t));
    }

    void add(PauliTerm t) {
        validate_term(t);
        terms.push_back(std::move(t));
    }

    void validate_term(const PauliTerm& t) const {
        for (auto& [s, a] : t.ops) {
            (void)a;
            if (s < 0 || s >= n_sites)
                throw SiteOutOfRange("site index " + std::to_string(s) + " outside [0, " +
                                     std::to_string(n_sites) + ")");
        }
    }

    // Merge duplicate strings, drop coefficients below `tol` in magnitude.
    void canonicalize(double tol = 1e-15) {
        std::map<std::map<int, Axis>, cplx> acc;
        for (auto& t : terms) acc[t.ops] += t.coeff;
        std::vector<PauliTerm> merged;
        merged.reserve(acc.size());
        for (auto& [ops, c] : acc) {
            if (std::abs(c) > tol) merged.emplace_back(c, ops);
        }
        terms = std::move(merged);
    }

    // Drop imaginary residue on coefficients (each Pauli string is Hermitian,
    // so a Hermitian operator has real coefficients after merging).
    void drop_imaginary_residue(double tol = 1e-12) {
        for (auto& t : terms) {
            if (std::abs(t.coeff.imag()) <= tol) t.coeff = cplx(t.coeff.real(), 0.0);
        }
    }
};

namespace detail {

// Per-term data for fast state application.
// Basis convention: site j maps to bit j of the index; bit 0 means |up> (Z = +1).
struct CompiledTerm {
    cplx coeff;
    std::uint64_t flip_mask = 0;   // X and Y sites
    std::uint64_t z_mask = 0;      // Z and Y sites contribute (1 - 2 bit) sign
    int y_count = 0;               // each Y contributes a factor i (on ket with bit 0)
};

inline CompiledTerm compile_term(const PauliTerm& t) {
    CompiledTerm c;
    c.coeff = t.coeff;
    for (auto& [s, a] : t.ops) {
        const std::uint64_t bit = std::uint64_t(1) << s;
        switch (a) {
            case Axis::X: c.flip_mask |= bit; break;
            case Axis::Y: c.flip_mask |= bit; c.z_mask |= bit; ++c.y_count; break;
            case Axis::Z: c.z_mask |= bit; break;
        }
    }
    return c;
}

} // namespace detail

// out += H_term |in>, term by term:  P|i> = phase * |i ^ flip>.
// For Y on bit b: Y|0> = i|1>, Y|1> = -i|0>; for Z: Z|b> = (1-2b)|b>.
inline void apply_accumulate(const HamiltonianSpec& h, const StateVector& in, StateVector& out) {
    const std::int64_t dim = std::int64_t(1) << h.n_sites;
    if (in.size() != dim)
        throw DimensionLimit("state vector size does not match 2^n_sites");
    if (out.size() != dim) out = StateVector::Zero(dim);
    for (const auto& t : h.terms) {
        const auto ct = detail::compile_term(t);
        // i^y_count from the Y factors
        static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const cplx base = ct.coeff * ipow[ct.y_count & 3];
        for (std::int64_t i = 0; i < dim; ++i) {
            const cplx a = in[i];
            if (a == cplx(0.0, 0.0)) continue;
            // sign from Z/Y sites: parity of set bits of (i & z_mask)
            const int par = __builtin_parityll(std::uint64_t(i) & ct.z_mask);
            // each Y with input bit 1 flips i -> -i, i.e. contributes -1 relative to bit 0;
            // that is exactly the same parity factor, so one popcount covers Z and Y.
            const cplx amp = par ? -base * a : base * a;
            out[std::int64_t(std::uint64_t(i) ^ ct.flip_mask)] += amp;
        }
    }
}

inline StateVector apply(const HamiltonianSpec& h, const StateVector& v) {
    if (h.n_sites > 24) throw DimensionLimit("apply supports at most 24 sites");
    StateVector out = StateVector::Zero(v.size());
    apply_accumulate(h, v, out);
    return out;
}

inline MatrixXcd to_matrix(const HamiltonianSpec& h) {
    if (h.n_sites > 14) throw DimensionLimit("to_matrix supports at most 14 sites");
    const std::int64_t dim = std::int64_t(1) << h.n_sites;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& t : h.terms) {
        const auto ct = detail::compile_term(t);
        const cplx base = ct.coeff * ipow[ct.y_count & 3];
        for (std::int64_t i = 0; i < dim; ++i) {
            const int par = __builtin_parityll(std::uint64_t(i) & ct.z_mask);
            m(std::int64_t(std::uint64_t(i) ^ ct.flip_mask), i) += par ? -base : base;
        }
    }
    return m;
}

// Expectation <v|H|v> (v need not be normalized; no normalization applied).
inline cplx expectation(const HamiltonianSpec& h, const StateVector& v) {
    StateVector hv = apply(h, v);
    return v.dot(hv);
}

// Line format: "coeff_re coeff_im site:P site:P ..." with 1-based sites.
inline std::string to_text(const HamiltonianSpec& h) {
    std::ostringstream os;
    os << "sites " << h.n_sites << ' '
       << (h.boundary == Boundary::periodic ? "periodic" : "open") << '\n';
    char buf[64];
    for (const auto& t : h.terms) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g", t.coeff.real(), t.coeff.imag());
        os << buf;
        for (auto& [s, a] : t.ops) os << ' ' << (s + 1) << ':' << axis_char(a);
        os << '\n';
    }
    return os.str();
}

inline HamiltonianSpec from_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    if (!(is >> word) || word != "sites")
        throw std::invalid_argument("hamiltonian text must start with 'sites <n> <boundary>'");
    int n = 0;
    std::string btext;
    is >> n >> btext;
    HamiltonianSpec h(n, btext == "open" ? Boundary::open : Boundary::periodic);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double re = 0, im = 0;
        ls >> re >> im;
        PauliTerm t;
        t.coeff = cplx(re, im);
        std::string tok;
        while (ls >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("bad term token: " + tok);
            int site = std::stoi(tok.substr(0, colon));
            t.ops.emplace(site - 1, axis_from_char(tok[colon + 1]));
        }
        h.add(std::move(t));
    }
    return h;
}

} // namespace trispin
