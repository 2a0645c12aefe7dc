#include "vdnet/gates.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vdnet {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI(0.0, 1.0);
}  // namespace

NativeGate rx(int q, double angle) { return NativeGate{GateKind::Rx, angle, q, -1, true}; }
NativeGate ry(int q, double angle) { return NativeGate{GateKind::Ry, angle, q, -1, true}; }
NativeGate rz(int q, double angle) { return NativeGate{GateKind::Rz, angle, q, -1, false}; }
NativeGate rzz(int a, int b, double angle) {
    if (a == b) throw std::invalid_argument("Rzz needs two distinct targets");
    return NativeGate{GateKind::Rzz, angle, a, b, true};
}

double gate_duration(const NativeGate& g, const Durations& d) {
    switch (g.kind) {
        case GateKind::Rz: return 0.0;
        case GateKind::Rx:
        case GateKind::Ry: return d.singleQubit;
        case GateKind::Rzz: return d.twoQubit;
    }
    return 0.0;
}

Matrix gate_matrix(const NativeGate& g) {
    double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
    Matrix m;
    switch (g.kind) {
        case GateKind::Rx:
            m.resize(2, 2);
            m << c, -kI * s, -kI * s, c;
            return m;
        case GateKind::Ry:
            m.resize(2, 2);
            m << c, -s, s, c;
            return m;
        case GateKind::Rz:
            m.resize(2, 2);
            m << std::exp(-kI * (g.angle / 2.0)), 0.0, 0.0, std::exp(kI * (g.angle / 2.0));
            return m;
        case GateKind::Rzz: {
            m = Matrix::Zero(4, 4);
            Complex e0 = std::exp(-kI * (g.angle / 2.0));
            Complex e1 = std::exp(kI * (g.angle / 2.0));
            m(0, 0) = e0;  // ZZ = +1
            m(1, 1) = e1;
            m(2, 2) = e1;
            m(3, 3) = e0;
            return m;
        }
    }
    throw std::logic_error("unreachable");
}

int GateSequence::physicalGateCount() const {
    int n = 0;
    for (const auto& g : gates)
        if (g.kind != GateKind::Rz) ++n;
    return n;
}

int GateSequence::rzzCount() const {
    int n = 0;
    for (const auto& g : gates)
        if (g.kind == GateKind::Rzz) ++n;
    return n;
}

Matrix sequence_unitary(const GateSequence& seq, int width) {
    std::size_t dim = std::size_t(1) << width;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& g : seq.gates) {
        std::vector<int> targets{g.q0};
        if (g.kind == GateKind::Rzz) targets.push_back(g.q1);
        for (int t : targets)
            if (t < 0 || t >= width) throw std::invalid_argument("gate target outside width");
        // applies the gate to every column at once
        apply_on_array(u.data(), dim * dim, gate_matrix(g), targets);
    }
    return u;
}

GateSequence decompose_hadamard(int q) {
    return GateSequence{{rz(q, kPi / 2), rx(q, kPi / 2), rz(q, kPi / 2)}};
}

GateSequence decompose_controlled_pauli(char p, int control, int target) {
    if (control == target) throw std::invalid_argument("control must differ from target");
    int c = control, q = target;
    GateSequence s;
    switch (p) {
        case 'X':
            s.gates = {rz(c, kPi / 2), rz(q, kPi / 2), rx(q, kPi / 2), rz(q, kPi),
                       rzz(c, q, -kPi / 2)};
            for (const auto& g : decompose_hadamard(q).gates) s.gates.push_back(g);
            return s;
        case 'Y':
            s.gates = {rz(c, kPi / 2), rx(q, kPi / 2), rz(q, 3 * kPi / 2),
                       rzz(c, q, -kPi / 2), rx(q, kPi / 2), rz(q, kPi)};
            return s;
        case 'Z':
            s.gates = {rz(c, kPi / 2), rz(q, kPi / 2), rzz(c, q, -kPi / 2)};
            return s;
        default:
            throw std::invalid_argument("controlled Pauli must be X, Y or Z");
    }
}

namespace {

// Frozen C-SWAP compilation: six Rzz gates, all angles integer multiples of
// pi/4, equal to the Fredkin gate up to global phase (verified by the 8x8
// oracle test).  Roles: 0 = control, 1 = first target, 2 = second target;
// Rzz rows store both targets.
struct CswapRow {
    char op;   // 'z' = Rz, 'y' = Ry, 'Z' = Rzz
    int a, b;  // role indices (b unused for single-qubit rows)
    int units; // angle in multiples of pi/4
};

constexpr CswapRow kCswapTable[] = {
    {'z', 0, -1, 1}, {'y', 0, -1, 1}, {'z', 0, -1, 2},
    {'z', 1, -1, 1}, {'y', 1, -1, 2}, {'z', 1, -1, 3},
    {'z', 2, -1, -1}, {'y', 2, -1, 1},
    {'Z', 1, 2, 2},
    {'z', 0, -1, 2}, {'y', 0, -1, 1}, {'z', 0, -1, 1},
    {'y', 1, -1, 2},
    {'y', 2, -1, 1}, {'z', 2, -1, 3},
    {'Z', 0, 1, 3},
    {'z', 1, -1, 3}, {'y', 1, -1, 4}, {'z', 1, -1, -3},
    {'z', 2, -1, -3}, {'y', 2, -1, -3}, {'z', 2, -1, 3},
    {'Z', 0, 2, -3},
    {'z', 0, -1, -2}, {'y', 0, -1, -2}, {'z', 0, -1, 2},
    {'z', 1, -1, -3}, {'y', 1, -1, 2}, {'z', 1, -1, -1},
    {'z', 2, -1, 1},
    {'Z', 1, 2, -2},
    {'z', 0, -1, -2}, {'y', 0, -1, 2}, {'z', 0, -1, 4},
    {'z', 1, -1, -1}, {'y', 1, -1, 2}, {'z', 1, -1, 1},
    {'z', 2, -1, 1}, {'y', 2, -1, -2}, {'z', 2, -1, 3},
    {'Z', 0, 1, 1},
    {'z', 0, -1, 3}, {'y', 0, -1, 1}, {'z', 0, -1, -3},
    {'z', 1, -1, 2}, {'y', 1, -1, -2}, {'z', 1, -1, 4},
    {'z', 2, -1, -1}, {'y', 2, -1, -2}, {'z', 2, -1, 4},
    {'Z', 1, 2, 2},
    {'z', 0, -1, -1}, {'y', 0, -1, 1}, {'z', 0, -1, 2},
    {'z', 1, -1, -1}, {'y', 1, -1, 2}, {'z', 1, -1, 3},
    {'z', 2, -1, 2}, {'y', 2, -1, 1}, {'z', 2, -1, 1},
};

}  // namespace

GateSequence decompose_cswap(int control, int t1, int t2) {
    if (control == t1 || control == t2 || t1 == t2)
        throw std::invalid_argument("C-SWAP needs three distinct qubits");
    int role[3] = {control, t1, t2};
    GateSequence s;
    for (const auto& row : kCswapTable) {
        double angle = row.units * kPi / 4.0;
        switch (row.op) {
            case 'z': s.gates.push_back(rz(role[row.a], angle)); break;
            case 'y': s.gates.push_back(ry(role[row.a], angle)); break;
            case 'Z': s.gates.push_back(rzz(role[row.a], role[row.b], angle)); break;
        }
    }
    return s;
}

std::string to_text(const GateSequence& seq) {
    std::ostringstream os;
    for (const auto& g : seq.gates) {
        switch (g.kind) {
            case GateKind::Rx: os << "RX"; break;
            case GateKind::Ry: os << "RY"; break;
            case GateKind::Rz: os << "RZ"; break;
            case GateKind::Rzz: os << "RZZ"; break;
        }
        os << ' ' << g.angle << ' ' << g.q0;
        if (g.kind == GateKind::Rzz) os << ' ' << g.q1;
        os << '\n';
    }
    return os.str();
}

double phase_aligned_deviation(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("shape mismatch");
    Eigen::Index r = 0, c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    Complex phase = a(r, c) / b(r, c);
    double mag = std::abs(phase);
    if (mag < 1e-12) throw std::invalid_argument("degenerate phase reference entry");
    phase /= mag;
    return (a - phase * b).cwiseAbs().maxCoeff();
}

// Convention for the fixed matrices: local qubit 0 (the least significant
// bit) is the first target passed to apply_unitary.
Matrix cnot_matrix() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(2, 2) = 1;
    m(3, 1) = 1;
    m(1, 3) = 1;
    return m;
}

Matrix cswap_matrix() {
    Matrix m = Matrix::Identity(8, 8);
    m(3, 3) = 0;
    m(5, 5) = 0;
    m(3, 5) = 1;
    m(5, 3) = 1;
    return m;
}

Matrix toffoli_matrix() {
    Matrix m = Matrix::Identity(8, 8);
    m(3, 3) = 0;
    m(7, 7) = 0;
    m(3, 7) = 1;
    m(7, 3) = 1;
    return m;
}

Matrix hadamard_matrix() {
    Matrix m(2, 2);
    double r = 1.0 / std::sqrt(2.0);
    m << r, r, r, -r;
    return m;
}

}  // namespace vdnet
