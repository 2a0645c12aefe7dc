#pragma once

#include <string>
#include <vector>

#include "vdnet/gates.hpp"
#include "vdnet/state.hpp"

namespace vdnet {

enum class EventKind { Gate, Unitary, Channel, Measure, Reset, ClockSet };
enum class ChannelKind { Depol1, Depol2, Dephase, BitFlip, Generic };

// Remote-BSM folding: which extra detection error a measurement inherits.
enum class FoldRole { None, BsmControl, BsmTarget };

// ClockSet semantics: Absolute sets the target clocks to clockTo; Relative
// sets them to (max clock over all qubits) - clockTo.  Save stashes the
// current clocks and restarts the targets at clockTo; the matching Restore
// adds the stashed value back, so a subcircuit can run on a fresh local
// clock and still account its duration on the wall clock.
enum class ClockMode { Absolute, Relative, Save, Restore };

struct Event {
    EventKind kind = EventKind::Gate;

    NativeGate gate{};                 // Gate
    Matrix matrix;                     // Unitary
    std::vector<int> targets;          // Unitary / Channel / Reset / ClockSet
    bool artificial = false;           // instantaneous and noiseless

    ChannelKind channel = ChannelKind::Generic;
    double prob = 0.0;                 // channel parameter
    std::vector<std::pair<double, PauliString>> terms;  // Generic channel

    int bit = -1;                      // Measure: classical bit index (Z basis)
    double flipProb = 0.0;             // classical bit-flip on the outcome
    FoldRole foldRole = FoldRole::None;

    std::vector<int> condBits;         // apply Unitary iff XOR of these bits = 1

    double clockTo = 0.0;              // ClockSet target value
    ClockMode clockMode = ClockMode::Absolute;

    std::string tag;
};

struct TimedCircuit {
    int width = 0;
    int numBits = 0;
    std::vector<Event> events;
};

Event make_gate(NativeGate g, std::string tag = {});
Event make_unitary(Matrix m, std::vector<int> targets, bool artificial = true,
                   std::string tag = {});
Event make_channel(ChannelKind kind, std::vector<int> targets, double prob,
                   std::string tag = {});
Event make_measure(int q, int bit, FoldRole role = FoldRole::None, std::string tag = {});
Event make_reset(int q, bool artificial, std::string tag = {});
Event make_clockset(std::vector<int> targets, double value, bool relative = false);
Event make_clocksave(std::vector<int> targets);
Event make_clockrestore(std::vector<int> targets);

std::vector<int> event_targets(const Event& e);

// Shared ClockSet bookkeeping; `saved` holds the Save/Restore stash.
void apply_clockset(const Event& e, std::vector<double>& clocks, std::vector<double>& saved);
double event_duration(const Event& e, const Durations& d);

// Appends src's events with qubit indices shifted by qubitOffset and bit
// indices shifted by bitOffset.
void append_circuit(TimedCircuit& dst, const TimedCircuit& src, int qubitOffset,
                    int bitOffset = 0);

// Clock bookkeeping: each event starts at the max clock over its targets and
// advances all targets to start + duration.  Returns final clocks.
std::vector<double> final_clocks(const TimedCircuit& c, const Durations& d,
                                 std::vector<double> clocks = {});
double circuit_makespan(const TimedCircuit& c, const Durations& d);

// Executes a measurement-free scheduled circuit on a density matrix.
void run_density(const TimedCircuit& c, QuantumState& state);

// Executes a scheduled circuit on a statevector; channels and measurements
// are sampled.  Measured bits land in `bits` (indexed by Event::bit).
// Returns the number of stochastic error events that fired (non-identity
// channel outcomes and detection flips); measurement/reset outcomes are not
// errors.
int run_trajectory(const TimedCircuit& c, QuantumState& state, Rng& rng,
                   std::vector<int>& bits);

struct Branch {
    std::vector<int> bits;
    double prob = 1.0;
    QuantumState state;
};

// Exhaustive branch enumeration over measurement outcomes (and detection
// flips); density-matrix input, intended for small validation fragments.
std::vector<Branch> enumerate_branches(const TimedCircuit& c, const QuantumState& initial);

// Extended line-oriented listing (gates plus CHANNEL/MEASURE/RESET/... lines).
std::string to_text(const TimedCircuit& c);

}  // namespace vdnet
