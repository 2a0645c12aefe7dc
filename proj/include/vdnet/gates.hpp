#pragma once

#include <string>
#include <vector>

#include "vdnet/state.hpp"

namespace vdnet {

enum class GateKind { Rx, Ry, Rz, Rzz };

// Durations in microseconds.  Rz is a virtual frame update: instantaneous
// and noiseless.
struct Durations {
    double singleQubit = 1.0;
    double twoQubit = 10.0;
    double detection = 100.0;
    double midPrep = 1.0;
    double bellPair = 100.0;
};

struct NativeGate {
    GateKind kind = GateKind::Rz;
    double angle = 0.0;
    int q0 = 0;
    int q1 = -1;  // second target for Rzz, otherwise -1
    bool noisy = false;

    int numTargets() const { return kind == GateKind::Rzz ? 2 : 1; }
};

NativeGate rx(int q, double angle);
NativeGate ry(int q, double angle);
NativeGate rz(int q, double angle);
NativeGate rzz(int a, int b, double angle);

double gate_duration(const NativeGate& g, const Durations& d = Durations{});

// 2x2 (or 4x4 for Rzz) unitary; Rzz(t) = exp(-i t/2 Z(x)Z).
Matrix gate_matrix(const NativeGate& g);

struct GateSequence {
    std::vector<NativeGate> gates;  // temporal order: front applied first

    int physicalGateCount() const;
    int rzzCount() const;
};

// Composite unitary over qubits 0..width-1.
Matrix sequence_unitary(const GateSequence& seq, int width);

// H = Rz(pi/2) Rx(pi/2) Rz(pi/2): one physical gate.
GateSequence decompose_hadamard(int q);

// Controlled X/Y/Z with exactly one Rzz(-pi/2).
GateSequence decompose_controlled_pauli(char p, int control, int target);

// C-SWAP with exactly six Rzz gates, every angle a multiple of pi/4.
GateSequence decompose_cswap(int control, int t1, int t2);

// Line-oriented debug listing: one gate per line (kind angle targets).
std::string to_text(const GateSequence& seq);

// Max entrywise deviation after aligning global phase on the largest entry.
double phase_aligned_deviation(const Matrix& a, const Matrix& b);

Matrix cnot_matrix();
Matrix cswap_matrix();
Matrix toffoli_matrix();
Matrix hadamard_matrix();

}  // namespace vdnet
