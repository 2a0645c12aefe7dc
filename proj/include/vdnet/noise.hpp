#pragma once

#include "vdnet/circuit.hpp"

namespace vdnet {

struct NoiseModel {
    double p1Q = 1e-4;       // depolarising per 1-qubit physical gate
    double p2Q = 1e-3;       // per 2-qubit gate
    double pBell = 1e-2;     // remote Bell-pair error
    double pDetect = 1e-3;   // measurement bit-flip
    double pMidPrep = 1e-3;  // mid-circuit preparation bit-flip
    double idleRate = 1e-5;  // dephasing probability per microsecond
    Durations durations;

    static NoiseModel reference() { return NoiseModel{}; }
    static NoiseModel zero() {
        NoiseModel m;
        m.p1Q = m.p2Q = m.pBell = m.pDetect = m.pMidPrep = m.idleRate = 0.0;
        return m;
    }
    void validate() const;
};

// Scales a declared subset of {p1Q, p2Q, pBell} by c; idle and detection
// errors stay fixed.  Scaled probabilities are clamped to <= 1.
struct ScaledModel {
    NoiseModel base;
    double c = 1.0;
    bool scaleP1Q = true;
    bool scaleP2Q = true;
    bool scalePBell = true;

    NoiseModel apply() const;
};

// lambda(t) = 1 - (1 - idleRate)^t
double idle_error_probability(double t, const NoiseModel& model);

// Attaches noise channels to a circuit:
//  - every noisy 1q (2q) gate is followed by depolarising(p1Q) (p2Q)
//  - measurements pick up flipProb = pDetect (plus folded remote-BSM terms)
//  - physical resets are followed by bit-flip(pMidPrep)
//  - per-qubit idle gaps insert dephasing(idle_error_probability(gap))
//  - channels tagged "fold:bell" get prob = pBell, "fold:bellidle" the
//    idle probability of one Bell generation
// Events tagged "prep..." draw their probabilities from prepModel (defaults
// to the main model).  `clocks` threads per-qubit time across calls.
TimedCircuit schedule_noise(const TimedCircuit& c, const NoiseModel& model);
TimedCircuit schedule_noise(const TimedCircuit& c, const NoiseModel& model,
                            const NoiseModel& prepModel, std::vector<double>* clocks);

// (1-pBell)|Phi+><Phi+| + pBell/3 (other three Bell projectors); the error
// sits on qubit 1 (the transmitted half).
QuantumState noisy_bell_pair(const NoiseModel& model);

}  // namespace vdnet
