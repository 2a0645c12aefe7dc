#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "vdnet/rng.hpp"

namespace vdnet {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Qubit ordering is little-endian throughout: qubit 0 is the least
// significant bit of the amplitude index.
constexpr int kStatevectorWidthCap = 26;
constexpr int kDensityWidthCap = 14;

// One term of a Pauli decomposition.  ops[i] in {I,X,Y,Z} acts on qubit i.
struct PauliString {
    std::string ops;
    double coefficient = 1.0;

    int width() const { return static_cast<int>(ops.size()); }
};

PauliString identity_string(int width);
Matrix pauli_matrix(char p);

enum class StateKind { Statevector, Density };

struct QuantumState {
    StateKind kind = StateKind::Statevector;
    int width = 0;
    Vector vec;    // statevector amplitudes, length 2^width
    Matrix rho;    // density matrix, 2^width x 2^width
    std::vector<double> clocks;  // per-qubit elapsed time, microseconds

    static QuantumState zero_state(int width, StateKind kind);
    static QuantumState from_vector(Vector v);
    static QuantumState from_density(Matrix m);

    std::size_t dim() const { return std::size_t(1) << width; }
    // Throws std::runtime_error when a structural invariant is violated.
    void validate(double tol = 1e-10) const;
    QuantumState to_density() const;
};

// --- primitive evolution ---------------------------------------------------

// U on the listed target qubits (matrix dimension 2^|targets|).
void apply_unitary(QuantumState& state, const Matrix& u, const std::vector<int>& targets);

// rho -> sum_k p_k P_k rho P_k ; density mode only.
void apply_pauli_channel(QuantumState& state, const std::vector<std::pair<double, PauliString>>& terms);

// Closed-form channels (density mode); used heavily, so they avoid the
// generic Kraus sum.
void apply_depolarizing1(QuantumState& state, int q, double p);
void apply_depolarizing2(QuantumState& state, int q1, int q2, double p);
void apply_dephasing(QuantumState& state, int q, double lambda);   // Z w.p. lambda
void apply_bitflip(QuantumState& state, int q, double p);          // X w.p. p

// Applies a Pauli string as a unitary (works in both modes).
void apply_pauli(QuantumState& state, const PauliString& p);

enum class MeasureBasis { X, Z };

// Projective measurement; collapses and renormalises.  The qubit clock is
// advanced by `detectionTime`.
int measure_qubit(QuantumState& state, int q, MeasureBasis basis, Rng& rng,
                  double detectionTime = 100.0);

// Measure-and-flip reset to |0>; clock advanced by `prepTime`.
void reset_qubit(QuantumState& state, int q, Rng& rng, double prepTime = 1.0);

// Exact <obs> = sum_i c_i <sigma_i> for either state kind.
double expectation(const QuantumState& state, const std::vector<PauliString>& obs);
double expectation(const QuantumState& state, const PauliString& p);

// Probability of outcome 1 when measuring q in the Z basis (no collapse).
double prob_one(const QuantumState& state, int q);

// --- composition helpers ---------------------------------------------------

// Keeps the listed qubits (in their current order mapped to 0..k-1).
QuantumState partial_trace(const QuantumState& state, const std::vector<int>& keep);

// Tensor product; `a` occupies the low qubits of the result.
QuantumState kron(const QuantumState& a, const QuantumState& b);

double purity(const QuantumState& state);
double fidelity_pure(const QuantumState& state, const Vector& psi);
double trace_distance(const Matrix& a, const Matrix& b);

// Raw kernel: applies u to `targets` of a 2^n-dim complex array.
void apply_on_array(Complex* data, std::size_t dim, const Matrix& u, const std::vector<int>& targets);

}  // namespace vdnet
