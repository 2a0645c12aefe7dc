#pragma once

#include "vdnet/circuit.hpp"

namespace vdnet {

// Random-field Heisenberg chain with periodic boundaries:
//   H = J sum_j S_j.S_{j+1} + sum_j h_j Z_j
// Trotterised into XX / YY / ZZ bond layers plus a virtual Rz field layer.
struct HeisenbergParams {
    int N = 4;
    double J = 1.0;
    std::vector<double> h;
    double deltaT = 0.01;
    int K = 1;
    int initSite = 3;  // 1-based excited site; wraps as ((site-1) mod N)+1 for small N

    void validate() const;
    int initQubit() const;  // 0-based qubit index of the excited site
};

// The fixed field vectors (three decimal places) shipped as presets.
std::vector<double> preset_h(int N);  // N in {4,5,6}

// K = floor(1 / (3 N p2Q)): tunes the per-copy circuit error rate to ~1
// (each Trotter step contains 3N two-qubit gates).
int trotter_steps_for_budget(int N, double p2Q);

// Native-gate circuit over N qubits, |0..0> input.  The initial basis-state
// preparation is merged into the first Ry basis-change layer.
TimedCircuit build_trotter_circuit(const HeisenbergParams& p);

// Exact Trotterised reference (product of dense layer exponentials), the
// zero-noise target state.
Vector ideal_state(const HeisenbergParams& p);

// Bond index lists; for odd N the leftover periodic bond joins the odd layer.
std::vector<std::pair<int, int>> even_bonds(int N);
std::vector<std::pair<int, int>> odd_bonds(int N);

}  // namespace vdnet
