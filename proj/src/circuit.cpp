#include "vdnet/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vdnet {

Event make_gate(NativeGate g, std::string tag) {
    Event e;
    e.kind = EventKind::Gate;
    e.gate = g;
    e.tag = std::move(tag);
    return e;
}

Event make_unitary(Matrix m, std::vector<int> targets, bool artificial, std::string tag) {
    Event e;
    e.kind = EventKind::Unitary;
    e.matrix = std::move(m);
    e.targets = std::move(targets);
    e.artificial = artificial;
    e.tag = std::move(tag);
    return e;
}

Event make_channel(ChannelKind kind, std::vector<int> targets, double prob, std::string tag) {
    Event e;
    e.kind = EventKind::Channel;
    e.channel = kind;
    e.targets = std::move(targets);
    e.prob = prob;
    e.tag = std::move(tag);
    return e;
}

Event make_measure(int q, int bit, FoldRole role, std::string tag) {
    Event e;
    e.kind = EventKind::Measure;
    e.targets = {q};
    e.bit = bit;
    e.foldRole = role;
    e.tag = std::move(tag);
    return e;
}

Event make_reset(int q, bool artificial, std::string tag) {
    Event e;
    e.kind = EventKind::Reset;
    e.targets = {q};
    e.artificial = artificial;
    e.tag = std::move(tag);
    return e;
}

Event make_clockset(std::vector<int> targets, double value, bool relative) {
    Event e;
    e.kind = EventKind::ClockSet;
    e.targets = std::move(targets);
    e.clockTo = value;
    e.clockMode = relative ? ClockMode::Relative : ClockMode::Absolute;
    return e;
}

Event make_clocksave(std::vector<int> targets) {
    Event e;
    e.kind = EventKind::ClockSet;
    e.targets = std::move(targets);
    e.clockMode = ClockMode::Save;
    return e;
}

Event make_clockrestore(std::vector<int> targets) {
    Event e;
    e.kind = EventKind::ClockSet;
    e.targets = std::move(targets);
    e.clockMode = ClockMode::Restore;
    return e;
}

void apply_clockset(const Event& e, std::vector<double>& clocks, std::vector<double>& saved) {
    if (saved.size() < clocks.size()) saved.resize(clocks.size(), 0.0);
    switch (e.clockMode) {
        case ClockMode::Absolute:
            for (int t : e.targets) clocks[t] = e.clockTo;
            break;
        case ClockMode::Relative: {
            double v = *std::max_element(clocks.begin(), clocks.end()) - e.clockTo;
            for (int t : e.targets) clocks[t] = v;
            break;
        }
        case ClockMode::Save:
            for (int t : e.targets) {
                saved[t] = clocks[t];
                clocks[t] = e.clockTo;
            }
            break;
        case ClockMode::Restore:
            for (int t : e.targets) clocks[t] += saved[t];
            break;
    }
}

std::vector<int> event_targets(const Event& e) {
    if (e.kind == EventKind::Gate) {
        if (e.gate.kind == GateKind::Rzz) return {e.gate.q0, e.gate.q1};
        return {e.gate.q0};
    }
    return e.targets;
}

double event_duration(const Event& e, const Durations& d) {
    if (e.artificial) return 0.0;
    switch (e.kind) {
        case EventKind::Gate: return gate_duration(e.gate, d);
        case EventKind::Unitary: return 0.0;
        case EventKind::Channel: return 0.0;
        case EventKind::Measure: return d.detection;
        case EventKind::Reset: return d.midPrep;
        case EventKind::ClockSet: return 0.0;
    }
    return 0.0;
}

void append_circuit(TimedCircuit& dst, const TimedCircuit& src, int qubitOffset, int bitOffset) {
    for (Event e : src.events) {
        if (e.kind == EventKind::Gate) {
            e.gate.q0 += qubitOffset;
            if (e.gate.q1 >= 0) e.gate.q1 += qubitOffset;
        }
        for (int& t : e.targets) t += qubitOffset;
        if (e.bit >= 0) e.bit += bitOffset;
        for (int& b : e.condBits) b += bitOffset;
        dst.events.push_back(std::move(e));
    }
    dst.width = std::max(dst.width, src.width + qubitOffset);
    dst.numBits = std::max(dst.numBits, src.numBits + bitOffset);
}

std::vector<double> final_clocks(const TimedCircuit& c, const Durations& d,
                                 std::vector<double> clocks) {
    if (clocks.empty()) clocks.assign(c.width, 0.0);
    std::vector<double> saved(clocks.size(), 0.0);
    for (const Event& e : c.events) {
        if (e.kind == EventKind::ClockSet) {
            apply_clockset(e, clocks, saved);
            continue;
        }
        if (e.kind == EventKind::Channel || e.artificial) continue;
        double dur = event_duration(e, d);
        if (e.kind == EventKind::Gate && dur == 0.0) continue;  // virtual Rz
        auto ts = event_targets(e);
        double start = 0.0;
        for (int t : ts) start = std::max(start, clocks[t]);
        for (int t : ts) clocks[t] = start + dur;
    }
    return clocks;
}

double circuit_makespan(const TimedCircuit& c, const Durations& d) {
    auto clocks = final_clocks(c, d);
    return clocks.empty() ? 0.0 : *std::max_element(clocks.begin(), clocks.end());
}

namespace {

void apply_channel_density(const Event& e, QuantumState& state) {
    switch (e.channel) {
        case ChannelKind::Depol1:
            apply_depolarizing1(state, e.targets[0], e.prob);
            break;
        case ChannelKind::Depol2:
            apply_depolarizing2(state, e.targets[0], e.targets[1], e.prob);
            break;
        case ChannelKind::Dephase:
            apply_dephasing(state, e.targets[0], e.prob);
            break;
        case ChannelKind::BitFlip:
            apply_bitflip(state, e.targets[0], e.prob);
            break;
        case ChannelKind::Generic:
            apply_pauli_channel(state, e.terms);
            break;
    }
}

// Samples one Pauli realisation of a channel; empty string means identity.
// Letters index e.targets.
std::string sample_channel(const Event& e, Rng& rng) {
    static const char xyz[3] = {'X', 'Y', 'Z'};
    switch (e.channel) {
        case ChannelKind::Depol1:
            if (rng.uniform() < e.prob) return std::string(1, xyz[rng.uniform_int(3)]);
            return {};
        case ChannelKind::Depol2: {
            if (rng.uniform() < e.prob) {
                int k = rng.uniform_int(15) + 1;  // 1..15, skip II
                const char* letters = "IXYZ";
                return {letters[k & 3], letters[(k >> 2) & 3]};
            }
            return {};
        }
        case ChannelKind::Dephase:
            return rng.uniform() < e.prob ? "Z" : "";
        case ChannelKind::BitFlip:
            return rng.uniform() < e.prob ? "X" : "";
        case ChannelKind::Generic: {
            double r = rng.uniform();
            double acc = 0.0;
            for (const auto& [p, str] : e.terms) {
                acc += p;
                if (r < acc) return str.ops;
            }
            return e.terms.empty() ? std::string{} : e.terms.back().second.ops;
        }
    }
    return {};
}

void apply_sampled_pauli(QuantumState& state, const Event& e, const std::string& letters) {
    if (letters.empty()) return;
    PauliString p = identity_string(state.width);
    for (std::size_t i = 0; i < letters.size(); ++i) {
        int q = e.channel == ChannelKind::Generic ? static_cast<int>(i) : e.targets[i];
        p.ops[q] = letters[i];
    }
    bool nontrivial = false;
    for (char ch : p.ops) nontrivial |= ch != 'I';
    if (nontrivial) apply_pauli(state, p);
}

}  // namespace

void run_density(const TimedCircuit& c, QuantumState& state) {
    if (state.kind != StateKind::Density)
        throw std::invalid_argument("run_density needs a density-matrix state");
    Rng dummy(0);
    for (const Event& e : c.events) {
        switch (e.kind) {
            case EventKind::Gate:
                apply_unitary(state, gate_matrix(e.gate), event_targets(e));
                break;
            case EventKind::Unitary:
                if (!e.condBits.empty())
                    throw std::invalid_argument(
                        "conditional unitary in deterministic density run; use enumerate_branches");
                apply_unitary(state, e.matrix, e.targets);
                break;
            case EventKind::Channel:
                apply_channel_density(e, state);
                break;
            case EventKind::Measure:
                throw std::invalid_argument(
                    "measurement in density run; defer measurements or enumerate branches");
            case EventKind::Reset:
                reset_qubit(state, e.targets[0], dummy, 0.0);
                break;
            case EventKind::ClockSet:
                break;
        }
    }
}

int run_trajectory(const TimedCircuit& c, QuantumState& state, Rng& rng,
                   std::vector<int>& bits) {
    if (state.kind != StateKind::Statevector)
        throw std::invalid_argument("run_trajectory needs a statevector state");
    if (static_cast<int>(bits.size()) < c.numBits) bits.resize(c.numBits, 0);
    int fired = 0;
    for (const Event& e : c.events) {
        switch (e.kind) {
            case EventKind::Gate:
                apply_unitary(state, gate_matrix(e.gate), event_targets(e));
                break;
            case EventKind::Unitary: {
                if (!e.condBits.empty()) {
                    int parity = 0;
                    for (int b : e.condBits) parity ^= bits[b];
                    if (!parity) break;
                }
                apply_unitary(state, e.matrix, e.targets);
                break;
            }
            case EventKind::Channel: {
                std::string letters = sample_channel(e, rng);
                if (letters.find_first_not_of('I') != std::string::npos) ++fired;
                apply_sampled_pauli(state, e, letters);
                break;
            }
            case EventKind::Measure: {
                int m = measure_qubit(state, e.targets[0], MeasureBasis::Z, rng, 0.0);
                if (e.flipProb > 0.0 && rng.uniform() < e.flipProb) {
                    m ^= 1;
                    ++fired;
                }
                bits[e.bit] = m;
                break;
            }
            case EventKind::Reset:
                reset_qubit(state, e.targets[0], rng, 0.0);
                break;
            case EventKind::ClockSet:
                break;
        }
    }
    return fired;
}

std::vector<Branch> enumerate_branches(const TimedCircuit& c, const QuantumState& initial) {
    std::vector<Branch> branches;
    branches.push_back(Branch{std::vector<int>(c.numBits, 0), 1.0,
                              initial.kind == StateKind::Density ? initial
                                                                 : initial.to_density()});
    for (const Event& e : c.events) {
        switch (e.kind) {
            case EventKind::Gate:
                for (auto& br : branches)
                    apply_unitary(br.state, gate_matrix(e.gate), event_targets(e));
                break;
            case EventKind::Unitary:
                for (auto& br : branches) {
                    if (!e.condBits.empty()) {
                        int parity = 0;
                        for (int b : e.condBits) parity ^= br.bits[b];
                        if (!parity) continue;
                    }
                    apply_unitary(br.state, e.matrix, e.targets);
                }
                break;
            case EventKind::Channel:
                for (auto& br : branches) apply_channel_density(e, br.state);
                break;
            case EventKind::Measure: {
                std::vector<Branch> next;
                for (auto& br : branches) {
                    double p1 = prob_one(br.state, e.targets[0]);
                    for (int m = 0; m < 2; ++m) {
                        double pm = m ? p1 : 1.0 - p1;
                        if (pm < 1e-14) continue;
                        Branch nb = br;
                        // project without renormalising; fold probability into weight
                        std::size_t s = std::size_t(1) << e.targets[0];
                        std::size_t sc = s << nb.state.width;
                        std::size_t dim2 = nb.state.dim() * nb.state.dim();
                        Complex* d = nb.state.rho.data();
                        for (std::size_t i = 0; i < dim2; ++i) {
                            bool rs = (i & s) != 0, cs = (i & sc) != 0;
                            if (rs != (m == 1) || cs != (m == 1)) d[i] = 0.0;
                        }
                        nb.state.rho /= pm;
                        nb.prob = br.prob * pm;
                        if (e.flipProb > 0.0) {
                            Branch fb = nb;
                            fb.prob *= e.flipProb;
                            fb.bits[e.bit] = m ^ 1;
                            nb.prob *= 1.0 - e.flipProb;
                            nb.bits[e.bit] = m;
                            next.push_back(std::move(nb));
                            next.push_back(std::move(fb));
                        } else {
                            nb.bits[e.bit] = m;
                            next.push_back(std::move(nb));
                        }
                    }
                }
                branches = std::move(next);
                break;
            }
            case EventKind::Reset: {
                Rng dummy(0);
                for (auto& br : branches) reset_qubit(br.state, e.targets[0], dummy, 0.0);
                break;
            }
            case EventKind::ClockSet:
                break;
        }
    }
    return branches;
}

std::string to_text(const TimedCircuit& c) {
    std::ostringstream os;
    for (const Event& e : c.events) {
        switch (e.kind) {
            case EventKind::Gate: {
                GateSequence s{{e.gate}};
                std::string line = vdnet::to_text(s);
                os << line;
                break;
            }
            case EventKind::Unitary: {
                os << (e.artificial ? "ARTIFICIAL-UNITARY" : "UNITARY");
                for (int t : e.targets) os << ' ' << t;
                if (!e.condBits.empty()) {
                    os << " COND";
                    for (int b : e.condBits) os << ' ' << b;
                }
                os << '\n';
                break;
            }
            case EventKind::Channel: {
                const char* names[] = {"DEPOL1", "DEPOL2", "DEPHASE", "BITFLIP", "GENERIC"};
                os << "CHANNEL " << names[static_cast<int>(e.channel)] << ' ' << e.prob;
                for (int t : e.targets) os << ' ' << t;
                os << '\n';
                break;
            }
            case EventKind::Measure:
                os << "MEASURE Z " << e.targets[0] << " -> bit " << e.bit << '\n';
                break;
            case EventKind::Reset:
                os << "RESET " << e.targets[0] << (e.artificial ? " artificial" : "") << '\n';
                break;
            case EventKind::ClockSet: {
                const char* modes[] = {"", " (relative)", " (save)", " (restore)"};
                os << "CLOCKSET";
                for (int t : e.targets) os << ' ' << t;
                os << " to " << e.clockTo << modes[static_cast<int>(e.clockMode)] << '\n';
                break;
            }
        }
    }
    return os.str();
}

}  // namespace vdnet
