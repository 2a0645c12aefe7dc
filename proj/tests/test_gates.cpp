#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdnet/gates.hpp"

#include <cmath>

using namespace vdnet;

TEST_CASE("hadamard decomposition: one physical gate, oracle match") {
    GateSequence h = decompose_hadamard(0);
    CHECK(h.physicalGateCount() == 1);

    Matrix u = sequence_unitary(h, 1);
    CHECK(phase_aligned_deviation(u, hadamard_matrix()) < 1e-12);

    QuantumState s = QuantumState::zero_state(1, StateKind::Statevector);
    apply_unitary(s, u, {0});
    CHECK(std::abs(s.vec(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(s.vec(1)) == doctest::Approx(1.0 / std::sqrt(2.0)));

    // involution up to global phase
    CHECK(phase_aligned_deviation(u * u, Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("controlled Paulis use exactly one Rzz") {
    for (char p : {'X', 'Y', 'Z'}) {
        GateSequence seq = decompose_controlled_pauli(p, 0, 1);
        CHECK(seq.rzzCount() == 1);
    }
    // CZ needs no physical single-qubit gates at all
    GateSequence cz = decompose_controlled_pauli('Z', 0, 1);
    CHECK(cz.physicalGateCount() == 1);  // the Rzz itself
    for (const NativeGate& g : cz.gates)
        if (g.kind != GateKind::Rzz) CHECK(g.kind == GateKind::Rz);
}

TEST_CASE("controlled Pauli unitaries match their oracles") {
    Matrix cx = cnot_matrix();
    CHECK(phase_aligned_deviation(sequence_unitary(decompose_controlled_pauli('X', 0, 1), 2), cx) <
          1e-12);

    // CY oracle: |1><1| (x) Y on the control (little-endian: control = qubit 0)
    Matrix cy = Matrix::Identity(4, 4);
    cy(1, 1) = 0; cy(3, 3) = 0;
    cy(3, 1) = Complex(0, 1); cy(1, 3) = Complex(0, -1);
    CHECK(phase_aligned_deviation(sequence_unitary(decompose_controlled_pauli('Y', 0, 1), 2), cy) <
          1e-12);

    Matrix cz = Matrix::Identity(4, 4);
    cz(3, 3) = -1;
    CHECK(phase_aligned_deviation(sequence_unitary(decompose_controlled_pauli('Z', 0, 1), 2), cz) <
          1e-12);
}

TEST_CASE("CX acts on basis states") {
    GateSequence seq = decompose_controlled_pauli('X', 0, 1);
    Matrix u = sequence_unitary(seq, 2);
    QuantumState s = QuantumState::zero_state(2, StateKind::Statevector);
    apply_unitary(s, pauli_matrix('X'), {0});  // |10> (control set)
    apply_unitary(s, u, {0, 1});
    CHECK(std::abs(s.vec(3)) == doctest::Approx(1.0));
}

TEST_CASE("C-SWAP decomposition: six Rzz, angles in pi/4 multiples, oracle match") {
    GateSequence seq = decompose_cswap(0, 1, 2);
    CHECK(seq.rzzCount() == 6);
    for (const NativeGate& g : seq.gates) {
        double k = g.angle / (M_PI / 4.0);
        CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
    Matrix u = sequence_unitary(seq, 3);
    CHECK(phase_aligned_deviation(u, cswap_matrix()) < 1e-10);
}

TEST_CASE("C-SWAP on basis states") {
    Matrix u = sequence_unitary(decompose_cswap(0, 1, 2), 3);
    // control on: |1>|01> -> |1>|10>   (qubit 0 control, qubits 1,2 targets)
    QuantumState s = QuantumState::zero_state(3, StateKind::Statevector);
    apply_unitary(s, pauli_matrix('X'), {0});
    apply_unitary(s, pauli_matrix('X'), {1});
    apply_unitary(s, u, {0, 1, 2});
    CHECK(std::abs(s.vec(0b101)) == doctest::Approx(1.0));
    // control off: identity
    QuantumState t = QuantumState::zero_state(3, StateKind::Statevector);
    apply_unitary(t, pauli_matrix('X'), {1});
    apply_unitary(t, u, {0, 1, 2});
    CHECK(std::abs(t.vec(0b010)) == doctest::Approx(1.0));
}

TEST_CASE("gate durations") {
    CHECK(gate_duration(rz(0, 0.3)) == doctest::Approx(0.0));
    CHECK(gate_duration(rzz(0, 1, M_PI / 2)) == doctest::Approx(10.0));
    CHECK(gate_duration(rx(0, M_PI / 2)) == doctest::Approx(1.0));
    CHECK(gate_duration(ry(0, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("virtual Rz is noiseless, physical rotations are noisy") {
    CHECK_FALSE(rz(0, 1.0).noisy);
    CHECK(rx(0, 1.0).noisy);
    CHECK(ry(0, 1.0).noisy);
    CHECK(rzz(0, 1, 1.0).noisy);
}

TEST_CASE("Rzz matrix convention") {
    Matrix u = gate_matrix(rzz(0, 1, 0.8));
    Complex em = std::exp(Complex(0, -0.4)), ep = std::exp(Complex(0, 0.4));
    CHECK(std::abs(u(0, 0) - em) < 1e-14);
    CHECK(std::abs(u(1, 1) - ep) < 1e-14);
    CHECK(std::abs(u(2, 2) - ep) < 1e-14);
    CHECK(std::abs(u(3, 3) - em) < 1e-14);
}
