#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "trispin/pauli.hpp"

namespace trispin {

struct ScheduleShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct PointerLost : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProgramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accumulated coupling phases Lambda_i = integral of lambda^(i) dt, taken
// modulo 2 pi into the canonical range (-pi, pi].
struct LambdaSchedule {
    std::array<double, 5> lambda{};   // Lambda_0 .. Lambda_4

    static double canonical(double x) {
        x = std::fmod(x, 2.0 * M_PI);
        if (x <= -M_PI) x += 2.0 * M_PI;
        if (x > M_PI) x -= 2.0 * M_PI;
        return x;
    }
    LambdaSchedule canonicalized() const {
        LambdaSchedule s = *this;
        for (auto& v : s.lambda) v = canonical(v);
        return s;
    }

    static LambdaSchedule cp() { return {{-M_PI / 4, M_PI / 4, 0, 0, 0}}; }
    static LambdaSchedule c2p() { return {{M_PI / 8, -M_PI / 8, 0, M_PI / 8, 0}}; }
    static LambdaSchedule swap() { return {{0, 0, M_PI / 2, 0, 0}}; }
    static LambdaSchedule cswap() { return {{0, 0, M_PI / 4, 0, -M_PI / 4}}; }
};

namespace detail {

inline Eigen::Matrix2cd pauli_matrix(Axis a) {
    Eigen::Matrix2cd m;
    switch (a) {
        case Axis::X: m << 0, 1, 1, 0; break;
        case Axis::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

// exp(-i H) for Hermitian H via eigendecomposition.
inline Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (int i = 0; i < phases.size(); ++i)
        phases[i] = std::exp(cplx(0.0, -es.eigenvalues()[i]));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

// Generator shapes behind each Lambda channel, on a pair or a triangle with
// the middle site as the control vertex. Bit k of the matrix index is site k.
//   H0: sum_j Z_j                     H1: sum of zz bonds (one for a pair)
//   H2: (XX + YY)/2 on the target bond (sites 0,2 of a triangle)
//   H3: Z Z Z                         H4: (X Z X + Y Z Y)/2, Z on the control
// The exchange channels carry the flip-flop normalization (s+ s- + s- s+);
// the z channels enter as-is. These are the shapes under which the
// CP / C2P / SWAP / cSWAP schedule table closes.
inline Eigen::MatrixXcd schedule_to_unitary(const LambdaSchedule& sched, int sites) {
    const auto s = sched.canonicalized();
    if (sites != 2 && sites != 3)
        throw ScheduleShapeMismatch("schedules act on 2 or 3 sites");
    if (sites == 2 && (s.lambda[3] != 0.0 || s.lambda[4] != 0.0))
        throw ScheduleShapeMismatch("Lambda_3 / Lambda_4 need 3 sites");

    HamiltonianSpec h(sites, Boundary::open);
    if (sites == 2) {
        h.add(s.lambda[0], {{0, Axis::Z}});
        h.add(s.lambda[0], {{1, Axis::Z}});
        h.add(s.lambda[1], {{0, Axis::Z}, {1, Axis::Z}});
        h.add(0.5 * s.lambda[2], {{0, Axis::X}, {1, Axis::X}});
        h.add(0.5 * s.lambda[2], {{0, Axis::Y}, {1, Axis::Y}});
    } else {
        for (int j = 0; j < 3; ++j) h.add(s.lambda[0], {{j, Axis::Z}});
        h.add(s.lambda[1], {{0, Axis::Z}, {1, Axis::Z}});
        h.add(s.lambda[1], {{1, Axis::Z}, {2, Axis::Z}});
        h.add(s.lambda[1], {{0, Axis::Z}, {2, Axis::Z}});
        h.add(0.5 * s.lambda[2], {{0, Axis::X}, {2, Axis::X}});
        h.add(0.5 * s.lambda[2], {{0, Axis::Y}, {2, Axis::Y}});
        h.add(s.lambda[3], {{0, Axis::Z}, {1, Axis::Z}, {2, Axis::Z}});
        h.add(0.5 * s.lambda[4], {{0, Axis::X}, {1, Axis::Z}, {2, Axis::X}});
        h.add(0.5 * s.lambda[4], {{0, Axis::Y}, {1, Axis::Z}, {2, Axis::Y}});
    }
    h.canonicalize();
    return detail::unitary_exp(to_matrix(h));
}

// Reference gates in the same bit convention (bit k = site k, bit value 1 is
// the logical |1> = spin-down state). Control of the three-site gates is the
// middle site (site 1), targets are sites 0 and 2.
inline Eigen::MatrixXcd gate_cp() {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(4, 4);
    g(3, 3) = -1.0;
    return g;
}
inline Eigen::MatrixXcd gate_c2p() {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(8, 8);
    g(7, 7) = -1.0;
    return g;
}
inline Eigen::MatrixXcd gate_swap() {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4, 4);
    g(0, 0) = g(3, 3) = 1.0;
    g(1, 2) = g(2, 1) = 1.0;
    return g;
}
inline Eigen::MatrixXcd gate_cswap() {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(8, 8);
    // swap bits 0 and 2 when bit 1 (control) is set
    const int i = 0b011, j = 0b110;   // |site0=1, site1=1> <-> |site1=1, site2=1>
    g(i, i) = g(j, j) = 0.0;
    g(i, j) = g(j, i) = 1.0;
    return g;
}

struct GateFit {
    double distance = 0.0;                 // max entrywise deviation after stripping
    double global_phase = 0.0;
    std::vector<double> local_z;           // per-qubit fitted z phases
    Eigen::VectorXcd extra_diagonal;       // fitted diagonal phase gate (swap rows)
    bool pass = false;
};

// U == e^{i a} G up to `tol`.
inline GateFit fit_global_phase(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& g,
                                double tol = 1e-9) {
    GateFit f;
    const cplx tr = (g.adjoint() * u).trace();
    f.global_phase = std::arg(tr);
    f.distance = (u - std::exp(cplx(0, f.global_phase)) * g).cwiseAbs().maxCoeff();
    f.pass = f.distance <= tol;
    return f;
}

// U == e^{i a} (product of per-qubit diagonal z phases) G. Works for any G
// with non-vanishing diagonal of U G^dagger on the fitted entries.
inline GateFit fit_local_z(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& g,
                           double tol = 1e-9) {
    const Eigen::MatrixXcd d = u * g.adjoint();
    const int dim = int(d.rows());
    int qubits = 0;
    while ((1 << qubits) < dim) ++qubits;
    GateFit f;
    f.global_phase = std::arg(d(0, 0));
    f.local_z.assign(qubits, 0.0);
    for (int q = 0; q < qubits; ++q)
        f.local_z[q] = std::arg(d(1 << q, 1 << q)) - f.global_phase;
    Eigen::VectorXcd diag(dim);
    for (int i = 0; i < dim; ++i) {
        double ph = f.global_phase;
        for (int q = 0; q < qubits; ++q)
            if (i & (1 << q)) ph += f.local_z[q];
        diag[i] = std::exp(cplx(0, ph));
    }
    f.distance = (u - diag.asDiagonal() * g).cwiseAbs().maxCoeff();
    f.pass = f.distance <= tol;
    return f;
}

// U == D G with D an arbitrary diagonal phase gate (the "extra phase gate"
// left over by the exchange-channel rows); D is reported.
inline GateFit fit_diagonal_phase(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& g,
                                  double tol = 1e-9) {
    const Eigen::MatrixXcd d = u * g.adjoint();
    const int dim = int(d.rows());
    GateFit f;
    f.extra_diagonal = d.diagonal();
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j)
            if (i != j) worst = std::max(worst, std::abs(d(i, j)));
        worst = std::max(worst, std::abs(std::abs(d(i, i)) - 1.0));
    }
    f.distance = worst;
    f.global_phase = std::arg(d(0, 0));
    f.pass = f.distance <= tol;
    return f;
}

enum class GateRow : std::uint8_t { cp, c2p, swap, cswap };

inline const char* gate_row_name(GateRow r) {
    switch (r) {
        case GateRow::cp: return "CP";
        case GateRow::c2p: return "C2P";
        case GateRow::swap: return "SWAP";
        default: return "CSWAP";
    }
}

// Verify one schedule-table row against its reference gate under the declared
// equivalence: CP and C2P strip a global phase and per-qubit z phases; the
// exchange rows additionally leave a diagonal phase gate, which is fitted and
// reported rather than stripped silently.
inline GateFit verify_gate_row(GateRow row, double tol = 1e-9) {
    switch (row) {
        case GateRow::cp:
            return fit_global_phase(schedule_to_unitary(LambdaSchedule::cp(), 2), gate_cp(), tol);
        case GateRow::c2p:
            return fit_local_z(schedule_to_unitary(LambdaSchedule::c2p(), 3), gate_c2p(), tol);
        case GateRow::swap:
            return fit_diagonal_phase(schedule_to_unitary(LambdaSchedule::swap(), 2), gate_swap(),
                                      tol);
        default:
            return fit_diagonal_phase(schedule_to_unitary(LambdaSchedule::cswap(), 3), gate_cswap(),
                                      tol);
    }
}

// ---------------------------------------------------------------------------
// Triangle-ladder simulator with global addressing.
//
// Geometry (one row of up/down triangles): register qubits r_0..r_{m-1} on
// the bottom line, auxiliary qubits a_0..a_{m-1} on the top line; column c
// forms the up-triangle (r_c, a_c, r_{c+1}). Register qubit c is state bit c,
// auxiliary qubit c is bit m + c.
// ---------------------------------------------------------------------------

enum class MaskKind : std::uint8_t {
    link_left,    // pairs (a_c, r_c) for every c
    link_right,   // pairs (a_c, r_{c+1})
    up_even,      // triangles (r_c, a_c, r_{c+1}) for even c
    up_odd,       // same for odd c
};

enum class SwapMask : std::uint8_t { alpha, beta };   // aux pairs (0,1)(2,3)... / (1,2)(3,4)...

enum class RowMask : std::uint8_t { register_row, auxiliary_row };

struct ScheduleOp {
    LambdaSchedule schedule;
    MaskKind mask;
};
struct GlobalSwap {
    SwapMask mask;
};
struct GlobalRotation {
    Axis axis;
    double angle;        // exp(-i angle/2 sigma_axis) on every qubit of the row
    RowMask row;
};
struct PointerInit {
    int column;
};
struct MeasureSyndrome {};   // reads every other auxiliary qubit (classical)

using Instruction = std::variant<ScheduleOp, GlobalSwap, GlobalRotation, PointerInit, MeasureSyndrome>;

struct PulseProgram {
    std::vector<Instruction> instructions;
};

struct LadderState {
    int n_columns = 0;
    StateVector state;

    static LadderState blank(int n_columns) {
        if (n_columns < 2 || n_columns > 8)
            throw std::invalid_argument("ladder supports 2..8 columns");
        LadderState l;
        l.n_columns = n_columns;
        l.state = StateVector::Zero(std::int64_t(1) << (2 * n_columns));
        l.state[0] = 1.0;
        return l;
    }

    int register_bit(int c) const { return c; }
    int aux_bit(int c) const { return n_columns + c; }

    // The auxiliary row must stay a one-hot computational-basis state; returns
    // the pointer column, throws PointerLost otherwise.
    int pointer_column(double tol = 1e-9) const {
        const std::int64_t dim = state.size();
        const std::uint64_t aux_mask = ((std::uint64_t(1) << n_columns) - 1) << n_columns;
        std::int64_t pattern = -1;
        for (std::int64_t i = 0; i < dim; ++i) {
            if (std::norm(state[i]) <= tol * tol) continue;
            const std::int64_t p = std::int64_t((std::uint64_t(i) & aux_mask) >> n_columns);
            if (pattern < 0)
                pattern = p;
            else if (pattern != p)
                throw PointerLost("auxiliary row left the computational basis");
        }
        if (pattern < 0) throw PointerLost("state vanished");
        if (__builtin_popcountll(pattern) != 1)
            throw PointerLost("auxiliary row is not one-hot");
        return __builtin_ctzll(std::uint64_t(pattern));
    }

    // Register-row pure state conditioned on the (classical) auxiliary row.
    StateVector register_state() const {
        const int p = pointer_column();
        const std::int64_t reg_dim = std::int64_t(1) << n_columns;
        const std::uint64_t aux_pattern = std::uint64_t(1) << (n_columns + p);
        StateVector reg(reg_dim);
        for (std::int64_t r = 0; r < reg_dim; ++r)
            reg[r] = state[std::int64_t(std::uint64_t(r) | aux_pattern)];
        return reg;
    }
};

namespace detail {

inline void apply_1q(StateVector& psi, const Eigen::Matrix2cd& u, int q) {
    const std::int64_t dim = psi.size();
    const std::int64_t bit = std::int64_t(1) << q;
    for (std::int64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cplx a = psi[i], b = psi[i | bit];
        psi[i] = u(0, 0) * a + u(0, 1) * b;
        psi[i | bit] = u(1, 0) * a + u(1, 1) * b;
    }
}

inline void apply_2q(StateVector& psi, const Eigen::MatrixXcd& u, int qa, int qb) {
    // matrix index convention: bit 0 = first listed qubit
    const std::int64_t dim = psi.size();
    const std::int64_t ba = std::int64_t(1) << qa, bb = std::int64_t(1) << qb;
    for (std::int64_t i = 0; i < dim; ++i) {
        if (i & (ba | bb)) continue;
        std::array<std::int64_t, 4> idx{i, i | ba, i | bb, i | ba | bb};
        std::array<cplx, 4> v{psi[idx[0]], psi[idx[1]], psi[idx[2]], psi[idx[3]]};
        for (int r = 0; r < 4; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < 4; ++c) acc += u(r, c) * v[c];
            psi[idx[r]] = acc;
        }
    }
}

inline void apply_3q(StateVector& psi, const Eigen::MatrixXcd& u, int q0, int q1, int q2) {
    const std::int64_t dim = psi.size();
    const std::int64_t b0 = std::int64_t(1) << q0, b1 = std::int64_t(1) << q1,
                       b2 = std::int64_t(1) << q2;
    for (std::int64_t i = 0; i < dim; ++i) {
        if (i & (b0 | b1 | b2)) continue;
        std::array<std::int64_t, 8> idx;
        for (int k = 0; k < 8; ++k)
            idx[k] = i | ((k & 1) ? b0 : 0) | ((k & 2) ? b1 : 0) | ((k & 4) ? b2 : 0);
        std::array<cplx, 8> v;
        for (int k = 0; k < 8; ++k) v[k] = psi[idx[k]];
        for (int r = 0; r < 8; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < 8; ++c) acc += u(r, c) * v[c];
            psi[idx[r]] = acc;
        }
    }
}

} // namespace detail

inline void apply_instruction(LadderState& l, const Instruction& ins) {
    const int m = l.n_columns;
    if (auto* sch = std::get_if<ScheduleOp>(&ins)) {
        switch (sch->mask) {
            case MaskKind::link_left: {
                const auto u = schedule_to_unitary(sch->schedule, 2);
                for (int c = 0; c < m; ++c)
                    detail::apply_2q(l.state, u, l.aux_bit(c), l.register_bit(c));
                break;
            }
            case MaskKind::link_right: {
                const auto u = schedule_to_unitary(sch->schedule, 2);
                for (int c = 0; c + 1 < m; ++c)
                    detail::apply_2q(l.state, u, l.aux_bit(c), l.register_bit(c + 1));
                break;
            }
            case MaskKind::up_even:
            case MaskKind::up_odd: {
                const auto u = schedule_to_unitary(sch->schedule, 3);
                const int start = sch->mask == MaskKind::up_even ? 0 : 1;
                // non-overlapping triangles: step 2 keeps shared register
                // qubits out of simultaneously pulsed triangles
                for (int c = start; c + 1 < m; c += 2)
                    detail::apply_3q(l.state, u, l.register_bit(c), l.aux_bit(c),
                                     l.register_bit(c + 1));
                break;
            }
        }
    } else if (auto* sw = std::get_if<GlobalSwap>(&ins)) {
        const auto u = gate_swap();
        const int start = sw->mask == SwapMask::alpha ? 0 : 1;
        for (int c = start; c + 1 < m; c += 2)
            detail::apply_2q(l.state, u, l.aux_bit(c), l.aux_bit(c + 1));
    } else if (auto* rot = std::get_if<GlobalRotation>(&ins)) {
        const Eigen::Matrix2cd u =
            detail::unitary_exp(0.5 * rot->angle * detail::pauli_matrix(rot->axis));
        for (int c = 0; c < m; ++c)
            detail::apply_1q(l.state, u,
                             rot->row == RowMask::register_row ? l.register_bit(c) : l.aux_bit(c));
    } else if (auto* pi = std::get_if<PointerInit>(&ins)) {
        if (pi->column < 0 || pi->column >= m)
            throw ProgramError("pointer column out of range");
        // requires an all-zero auxiliary row (fresh ladder)
        const std::uint64_t aux_mask = ((std::uint64_t(1) << m) - 1) << m;
        for (std::int64_t i = 0; i < l.state.size(); ++i)
            if ((std::uint64_t(i) & aux_mask) && std::norm(l.state[i]) > 1e-18)
                throw ProgramError("pointer_init needs a cleared auxiliary row");
        Eigen::Matrix2cd x;
        x << 0, 1, 1, 0;
        detail::apply_1q(l.state, x, l.aux_bit(pi->column));
    } else if (std::get_if<MeasureSyndrome>(&ins)) {
        l.pointer_column();   // classical-auxiliary check is the measurement's guard
    }
}

struct StepStatus {
    int index;
    bool aux_classical;
    int pointer_column;   // -1 when lost
};

// Read every other auxiliary qubit, skipping the slot where the pointer is
// supposed to sit. A set bit means the pointer strayed onto a measured site.
inline std::vector<int> syndrome_bits(const LadderState& l, int expected_pointer) {
    const int p = l.pointer_column();
    std::vector<int> bits;
    for (int c = 0; c < l.n_columns; c += 2)
        if (c != expected_pointer) bits.push_back(c == p ? 1 : 0);
    return bits;
}

inline LadderState run_program(const PulseProgram& prog, LadderState initial,
                               std::vector<StepStatus>* log = nullptr) {
    int idx = 0;
    for (const auto& ins : prog.instructions) {
        apply_instruction(initial, ins);
        StepStatus st;
        st.index = idx++;
        try {
            st.pointer_column = initial.pointer_column();
            st.aux_classical = true;
        } catch (const PointerLost&) {
            st.aux_classical = false;
            st.pointer_column = -1;
            if (log) log->push_back(st);
            throw;
        }
        if (log) log->push_back(st);
    }
    return initial;
}

// ---------------------------------------------------------------------------
// Targeted operations compiled to global pulses. Every helper appends the
// pulses it used to `trace` and leaves the ladder with the pointer parked
// where it finished.
// ---------------------------------------------------------------------------

inline void move_pointer_to(LadderState& l, int target, std::vector<Instruction>& trace) {
    int p = l.pointer_column();
    if (target < 0 || target >= l.n_columns) throw ProgramError("pointer target out of range");
    while (p != target) {
        const bool forward = target > p;
        SwapMask mask;
        if (forward)
            mask = (p % 2 == 0) ? SwapMask::alpha : SwapMask::beta;
        else
            mask = (p % 2 == 0) ? SwapMask::beta : SwapMask::alpha;
        Instruction ins = GlobalSwap{mask};
        apply_instruction(l, ins);
        trace.push_back(ins);
        const int q = l.pointer_column();
        if (q == p) throw ProgramError("pointer cannot move past the ladder edge");
        p = q;
    }
}

// sigma_z on register qubit `col`: a CP-row pulse on the link mask touching
// the pointer acts as Z exactly at the pointer's neighbour and as the
// identity elsewhere (all other auxiliaries are |0>).
inline void targeted_z(LadderState& l, int col, std::vector<Instruction>& trace) {
    const int p = l.pointer_column();
    if (p == col) {
        Instruction ins = ScheduleOp{LambdaSchedule::cp(), MaskKind::link_left};
        apply_instruction(l, ins);
        trace.push_back(ins);
    } else if (p == col - 1) {
        Instruction ins = ScheduleOp{LambdaSchedule::cp(), MaskKind::link_right};
        apply_instruction(l, ins);
        trace.push_back(ins);
    } else {
        move_pointer_to(l, col, trace);
        targeted_z(l, col, trace);
    }
}

// CP between the two register qubits of the pointer's triangle, via the
// C2P row masked to alternate triangles (control auxiliaries elsewhere are
// |0>, so those triangles see the identity).
inline void targeted_cp_adjacent(LadderState& l, int col, std::vector<Instruction>& trace) {
    if (col + 1 >= l.n_columns) throw ProgramError("triangle column out of range");
    move_pointer_to(l, col, trace);
    Instruction ins = ScheduleOp{LambdaSchedule::c2p(),
                                 col % 2 == 0 ? MaskKind::up_even : MaskKind::up_odd};
    apply_instruction(l, ins);
    trace.push_back(ins);
}

// Exact controlled-SWAP of (r_col, r_col+1) on the pointer's triangle: the
// cSWAP row plus the z-channel pulses that negate its leftover phase gate.
inline void targeted_cswap(LadderState& l, int col, std::vector<Instruction>& trace) {
    if (col + 1 >= l.n_columns) throw ProgramError("triangle column out of range");
    move_pointer_to(l, col, trace);
    const MaskKind tri = col % 2 == 0 ? MaskKind::up_even : MaskKind::up_odd;
    const std::array<Instruction, 4> seq{
        Instruction{ScheduleOp{LambdaSchedule::cswap(), tri}},
        Instruction{ScheduleOp{LambdaSchedule{{-M_PI / 8, M_PI / 8, 0, -M_PI / 8, 0}}, tri}},
        Instruction{ScheduleOp{LambdaSchedule{{M_PI / 8, -M_PI / 8, 0, 0, 0}}, MaskKind::link_left}},
        Instruction{ScheduleOp{LambdaSchedule{{M_PI / 8, -M_PI / 8, 0, 0, 0}}, MaskKind::link_right}},
    };
    for (const auto& ins : seq) {
        apply_instruction(l, ins);
        trace.push_back(ins);
    }
}

// CP between arbitrary register columns. Adjacent pairs use the pointer
// triangle directly; separated pairs walk the left qubit next to the right
// one with controlled-SWAP steps and walk it back afterwards, so pairs with
// an odd number of qubits in between always cross a cSWAP re-parity step.
inline void targeted_cp(LadderState& l, int col_a, int col_b, std::vector<Instruction>& trace) {
    int a = std::min(col_a, col_b), b = std::max(col_a, col_b);
    if (a == b) throw ProgramError("targeted_cp needs distinct columns");
    for (int c = a; c + 1 < b; ++c) targeted_cswap(l, c, trace);
    targeted_cp_adjacent(l, b - 1, trace);
    for (int c = b - 2; c >= a; --c) targeted_cswap(l, c, trace);
}

// U sigma_z U^dagger on register qubit `col` through global register-row
// rotations around the targeted z pulse.
inline void targeted_rotated_z(LadderState& l, int col, Axis axis, double angle,
                               std::vector<Instruction>& trace) {
    Instruction fwd = GlobalRotation{axis, angle, RowMask::register_row};
    Instruction bwd = GlobalRotation{axis, -angle, RowMask::register_row};
    apply_instruction(l, fwd);
    trace.push_back(fwd);
    targeted_z(l, col, trace);
    apply_instruction(l, bwd);
    trace.push_back(bwd);
}

// ---------------------------------------------------------------------------
// Superlattice offset potential and standing-wave period helper.
// ---------------------------------------------------------------------------

inline double superlattice_offset(double x, double y, double k) {
    const double u = k * y / std::sqrt(3.0);
    return std::cos(k * x) * std::sin(u) * std::sin(u - k * x) * std::sin(u + k * x);
}

struct FieldSample {
    double x, y, value;
};

inline std::vector<FieldSample> superlattice_pattern(double x0, double x1, int nx, double y0,
                                                     double y1, int ny, double k) {
    std::vector<FieldSample> out;
    out.reserve(std::size_t(nx) * std::size_t(ny));
    for (int iy = 0; iy < ny; ++iy) {
        const double y = ny == 1 ? y0 : y0 + (y1 - y0) * iy / (ny - 1);
        for (int ix = 0; ix < nx; ++ix) {
            const double x = nx == 1 ? x0 : x0 + (x1 - x0) * ix / (nx - 1);
            out.push_back({x, y, superlattice_offset(x, y, k)});
        }
    }
    return out;
}

// Standing-wave period from the angle between the interfering beams.
inline double standing_wave_period(double wavelength, double theta) {
    return wavelength / (2.0 * std::sin(theta / 2.0));
}

// ---------------------------------------------------------------------------
// Program text format, one instruction per line:
//   POINTER <column>
//   SCHEDULE <l0> <l1> <l2> <l3> <l4> MASK <link_left|link_right|up_even|up_odd>
//   SWAP <alpha|beta>
//   ROTATE <x|y|z> <angle> <register|auxiliary>
//   MEASURE
// ---------------------------------------------------------------------------

inline std::string program_to_text(const PulseProgram& p) {
    std::ostringstream os;
    for (const auto& ins : p.instructions) {
        if (auto* s = std::get_if<ScheduleOp>(&ins)) {
            os << "SCHEDULE";
            char buf[32];
            for (double v : s->schedule.lambda) {
                std::snprintf(buf, sizeof buf, " %.17g", v);
                os << buf;
            }
            os << " MASK ";
            switch (s->mask) {
                case MaskKind::link_left: os << "link_left"; break;
                case MaskKind::link_right: os << "link_right"; break;
                case MaskKind::up_even: os << "up_even"; break;
                case MaskKind::up_odd: os << "up_odd"; break;
            }
            os << '\n';
        } else if (auto* w = std::get_if<GlobalSwap>(&ins)) {
            os << "SWAP " << (w->mask == SwapMask::alpha ? "alpha" : "beta") << '\n';
        } else if (auto* r = std::get_if<GlobalRotation>(&ins)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", r->angle);
            os << "ROTATE " << axis_char(r->axis) << ' ' << buf << ' '
               << (r->row == RowMask::register_row ? "register" : "auxiliary") << '\n';
        } else if (auto* q = std::get_if<PointerInit>(&ins)) {
            os << "POINTER " << q->column << '\n';
        } else {
            os << "MEASURE\n";
        }
    }
    return os.str();
}

inline PulseProgram program_from_text(const std::string& text) {
    PulseProgram p;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op) || op.empty() || op[0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw ProgramError("line " + std::to_string(lineno) + ": " + why);
        };
        if (op == "SCHEDULE") {
            ScheduleOp s;
            for (auto& v : s.schedule.lambda)
                if (!(ls >> v)) fail("expected five schedule values");
            std::string kw, mask;
            if (!(ls >> kw >> mask) || kw != "MASK") fail("expected MASK <name>");
            if (mask == "link_left") s.mask = MaskKind::link_left;
            else if (mask == "link_right") s.mask = MaskKind::link_right;
            else if (mask == "up_even") s.mask = MaskKind::up_even;
            else if (mask == "up_odd") s.mask = MaskKind::up_odd;
            else fail("unknown mask " + mask);
            p.instructions.push_back(s);
        } else if (op == "SWAP") {
            std::string mask;
            if (!(ls >> mask)) fail("expected alpha or beta");
            if (mask == "alpha") p.instructions.push_back(GlobalSwap{SwapMask::alpha});
            else if (mask == "beta") p.instructions.push_back(GlobalSwap{SwapMask::beta});
            else fail("unknown swap mask " + mask);
        } else if (op == "ROTATE") {
            char ax;
            double angle;
            std::string row;
            if (!(ls >> ax >> angle >> row)) fail("expected ROTATE <axis> <angle> <row>");
            p.instructions.push_back(GlobalRotation{
                axis_from_char(ax), angle,
                row == "auxiliary" ? RowMask::auxiliary_row : RowMask::register_row});
        } else if (op == "POINTER") {
            int c;
            if (!(ls >> c)) fail("expected column");
            p.instructions.push_back(PointerInit{c});
        } else if (op == "MEASURE") {
            p.instructions.push_back(MeasureSyndrome{});
        } else {
            fail("unknown instruction " + op);
        }
    }
    return p;
}

} // namespace trispin
