#pragma once

#include "vdnet/network.hpp"

namespace vdnet {

struct VDPlan {
    Impl impl = Impl::CR;
    int n = 2;                 // copies
    int N = 1;                 // data qubits per copy
    PauliString sigma;         // one numerator term (identity for denominator)
    TimedCircuit statePrep;    // one copy, width N; events tagged "prep"
    NetworkMode mode = NetworkMode::Folded;
    bool chargeNetworkIdle = false;  // charge Bell-generation time to waiting qubits

    void validate() const;
};

struct DepthExpression {
    int dRho = 0, dS = 0, dB = 0, dSigma = 0;
    std::string str() const;
};

enum class ResourceMode { Table, AsBuilt };

struct ResourceReport {
    Impl impl = Impl::CR;
    int n = 0, N = 0;
    ResourceMode mode = ResourceMode::Table;
    int registers = 0, qubits = 0, cswapCount = 0, bsmCount = 0, bellPairs = 0;
    DepthExpression depth;

    std::string csv_row() const;  // impl,n,N,mode,registers,qubits,cswap,bsm,bellpairs,depth
};

// Classical post-processing: sample sign = (prod over ancillas of +-1)
// x (prod over BSM pairs of -1 iff both group parities are odd).
struct ShotRule {
    std::vector<int> ancillaQubits;
    std::vector<int> ancillaBits;
    struct BsmPair {
        std::vector<int> bits1, bits2;  // parity groups (single bits when local)
        int q1 = -1, q2 = -1;
    };
    std::vector<BsmPair> bsmPairs;
    std::string parityConvention;
    int numBits = 0;
};

double shot_value(const ShotRule& rule, const std::vector<int>& bits);

// CNOT(q1->q2) then X-measure q1, Z-measure q2 (compiled to native gates;
// remote folding roles are attached so schedule_noise can add the Bell error
// as detection bit-flips).
TimedCircuit build_bsm(int q1, int q2, int bit1, int bit2, const std::string& tag);

std::pair<TimedCircuit, ShotRule> build_cr(const VDPlan& plan);
std::pair<TimedCircuit, ShotRule> build_qecr(const VDPlan& plan);
std::pair<TimedCircuit, ShotRule> build_bw(const VDPlan& plan);
std::pair<TimedCircuit, ShotRule> build_plan(const VDPlan& plan);

// Replaces measurements by their detection bit-flip channels and appends
// noiseless zero-duration Toffolis flipping an ancilla when a BSM pair reads
// 1,1; the returned observable is the single Pauli string Z on the ancillas.
std::pair<TimedCircuit, PauliString> insert_artificial_gates(const TimedCircuit& c,
                                                             const ShotRule& rule);

ResourceReport count_resources(Impl impl, int n, int N, ResourceMode mode);

// Internal program form shared by the builders and the estimators: the full
// circuit without the controlled-sigma gates, plus the positions where they
// may be inserted (before the derangement, or just before the final BSM
// layer; the two placements give the same estimator).
struct VdProgram {
    TimedCircuit circuit;
    std::size_t sigmaEarlyPos = 0;
    std::size_t sigmaLatePos = 0;
    std::size_t prepEnd = 0;             // end of the copy preparations
    std::vector<std::size_t> cycleEnds;  // CR/QECR: prefix length realising l copies (l=2..n)
    int ancControl = -1;                 // control qubit for controlled-sigma
    int dataOffset = 0;                  // first qubit of copy 1
    ShotRule rule;
};

VdProgram build_vd_program(const VDPlan& plan);

// Controlled-sigma: one controlled Pauli per non-identity letter.
std::vector<Event> controlled_sigma_events(const PauliString& sigma, int control, int dataOffset);

}  // namespace vdnet
