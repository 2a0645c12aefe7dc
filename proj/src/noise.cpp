#include "vdnet/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vdnet {

namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

// Two independent bit-flip sources acting on the same classical bit.
double compose_flips(double a, double b) { return a + b - 2.0 * a * b; }

bool has_prefix(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

void NoiseModel::validate() const {
    if (!in_unit(p1Q) || !in_unit(p2Q) || !in_unit(pBell) || !in_unit(pDetect) ||
        !in_unit(pMidPrep))
        throw std::invalid_argument("noise probabilities must lie in [0,1]");
    if (idleRate < 0.0) throw std::invalid_argument("idleRate must be >= 0");
}

NoiseModel ScaledModel::apply() const {
    if (c <= 0.0) throw std::invalid_argument("scale factor must be positive");
    NoiseModel m = base;
    auto scale = [&](double p) { return std::min(1.0, c * p); };
    if (scaleP1Q) m.p1Q = scale(m.p1Q);
    if (scaleP2Q) m.p2Q = scale(m.p2Q);
    if (scalePBell) m.pBell = scale(m.pBell);
    return m;
}

double idle_error_probability(double t, const NoiseModel& model) {
    if (t < 0.0) throw std::invalid_argument("idle time must be >= 0");
    if (t == 0.0 || model.idleRate == 0.0) return 0.0;
    return 1.0 - std::pow(1.0 - model.idleRate, t);
}

TimedCircuit schedule_noise(const TimedCircuit& c, const NoiseModel& model) {
    return schedule_noise(c, model, model, nullptr);
}

TimedCircuit schedule_noise(const TimedCircuit& c, const NoiseModel& model,
                            const NoiseModel& prepModel, std::vector<double>* clocksInOut) {
    model.validate();
    prepModel.validate();
    const Durations& dur = model.durations;
    std::vector<double> clocks =
        clocksInOut && !clocksInOut->empty() ? *clocksInOut : std::vector<double>(c.width, 0.0);

    TimedCircuit out;
    out.width = c.width;
    out.numBits = c.numBits;
    std::vector<double> saved(clocks.size(), 0.0);

    auto model_for = [&](const Event& e) -> const NoiseModel& {
        return has_prefix(e.tag, "prep") ? prepModel : model;
    };

    auto flush_idle = [&](const std::vector<int>& ts, double start, const NoiseModel& m) {
        for (int t : ts) {
            double gap = start - clocks[t];
            if (gap > 1e-12) {
                double lam = idle_error_probability(gap, m);
                if (lam > 0.0)
                    out.events.push_back(make_channel(ChannelKind::Dephase, {t}, lam, "idle"));
            }
        }
    };

    for (const Event& e : c.events) {
        if (e.kind == EventKind::ClockSet) {
            apply_clockset(e, clocks, saved);
            out.events.push_back(e);
            continue;
        }
        const NoiseModel& m = model_for(e);
        if (e.kind == EventKind::Channel) {
            Event ch = e;
            if (ch.tag == "fold:bell") ch.prob = m.pBell;
            if (ch.tag == "fold:bellidle")
                ch.prob = idle_error_probability(dur.bellPair, m);
            if (ch.prob > 0.0 || ch.channel == ChannelKind::Generic)
                out.events.push_back(std::move(ch));
            continue;
        }
        if (e.artificial) {
            out.events.push_back(e);
            continue;
        }
        double d = event_duration(e, dur);
        if (e.kind == EventKind::Gate && d == 0.0) {
            // virtual Rz: no time, no noise, and it commutes with the idle
            // dephasing so the gap stays whole
            out.events.push_back(e);
            continue;
        }
        auto ts = event_targets(e);
        double start = 0.0;
        for (int t : ts) start = std::max(start, clocks[t]);
        flush_idle(ts, start, m);

        switch (e.kind) {
            case EventKind::Gate: {
                out.events.push_back(e);
                if (e.gate.noisy) {
                    if (e.gate.kind == GateKind::Rzz) {
                        if (m.p2Q > 0.0)
                            out.events.push_back(make_channel(ChannelKind::Depol2, ts, m.p2Q));
                    } else if (m.p1Q > 0.0) {
                        out.events.push_back(make_channel(ChannelKind::Depol1, ts, m.p1Q));
                    }
                }
                break;
            }
            case EventKind::Unitary:
                out.events.push_back(e);
                break;
            case EventKind::Measure: {
                Event me = e;
                double extra = 0.0;
                if (e.foldRole == FoldRole::BsmControl) extra = m.pBell / 3.0;
                if (e.foldRole == FoldRole::BsmTarget) extra = 2.0 * m.pBell / 3.0;
                me.flipProb = compose_flips(m.pDetect, extra);
                out.events.push_back(std::move(me));
                break;
            }
            case EventKind::Reset: {
                out.events.push_back(e);
                if (m.pMidPrep > 0.0)
                    out.events.push_back(
                        make_channel(ChannelKind::BitFlip, ts, m.pMidPrep, "midprep"));
                break;
            }
            default:
                break;
        }
        for (int t : ts) clocks[t] = start + d;
    }
    if (clocksInOut) *clocksInOut = clocks;
    return out;
}

QuantumState noisy_bell_pair(const NoiseModel& model) {
    Vector phi = Vector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    QuantumState s = QuantumState::from_vector(phi).to_density();
    apply_depolarizing1(s, 1, model.pBell);
    return s;
}

}  // namespace vdnet
