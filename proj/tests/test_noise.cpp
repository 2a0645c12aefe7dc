#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdnet/gates.hpp"
#include "vdnet/noise.hpp"

#include <cmath>

using namespace vdnet;

namespace {

int count_channels(const TimedCircuit& c, ChannelKind kind) {
    int k = 0;
    for (const Event& e : c.events)
        if (e.kind == EventKind::Channel && e.channel == kind) ++k;
    return k;
}

}  // namespace

TEST_CASE("idle error probability") {
    NoiseModel m;
    CHECK(idle_error_probability(0.0, m) == doctest::Approx(0.0));
    CHECK(idle_error_probability(1.0, m) == doctest::Approx(1e-5));
    CHECK(idle_error_probability(100.0, m) ==
          doctest::Approx(1.0 - std::pow(1.0 - 1e-5, 100.0)).epsilon(1e-12));
    // monotone in t
    CHECK(idle_error_probability(50.0, m) < idle_error_probability(100.0, m));
}

TEST_CASE("zero model leaves a circuit unchanged") {
    TimedCircuit c;
    c.width = 2;
    c.numBits = 1;
    c.events.push_back(make_gate(rx(0, 0.5)));
    c.events.push_back(make_gate(rzz(0, 1, 0.3)));
    c.events.push_back(make_measure(1, 0));
    TimedCircuit out = schedule_noise(c, NoiseModel::zero());
    CHECK(out.events.size() == c.events.size());
    for (const Event& e : out.events) CHECK(e.kind != EventKind::Channel);
    CHECK(out.events[2].flipProb == doctest::Approx(0.0));
}

TEST_CASE("a single Rx gets exactly one depolarising channel") {
    TimedCircuit c;
    c.width = 1;
    c.events.push_back(make_gate(rx(0, 1.2)));
    TimedCircuit out = schedule_noise(c, NoiseModel::reference());
    CHECK(count_channels(out, ChannelKind::Depol1) == 1);
    CHECK(count_channels(out, ChannelKind::Dephase) == 0);
    for (const Event& e : out.events)
        if (e.kind == EventKind::Channel) CHECK(e.prob == doctest::Approx(1e-4));
}

TEST_CASE("two-qubit gates get two-qubit depolarising, virtual Rz gets nothing") {
    TimedCircuit c;
    c.width = 2;
    c.events.push_back(make_gate(rz(0, 0.4)));
    c.events.push_back(make_gate(rzz(0, 1, 0.9)));
    TimedCircuit out = schedule_noise(c, NoiseModel::reference());
    CHECK(count_channels(out, ChannelKind::Depol2) == 1);
    CHECK(count_channels(out, ChannelKind::Depol1) == 0);
}

TEST_CASE("clock gaps insert dephasing with the hand-derived probability") {
    // q0 acts at t=0..1, then q1 runs a 10us Rzz-free gate... build it simply:
    // Rx(q0) [0..1], Rzz(q0,q1) would sync clocks, so instead:
    // Rx(q0) [0..1]; Rzz(q1,q2)... width 2 suffices with an Rx chain on q1.
    TimedCircuit c;
    c.width = 2;
    c.events.push_back(make_gate(rx(0, 0.5)));       // q0 0..1
    c.events.push_back(make_gate(rx(1, 0.5)));       // q1 0..1
    for (int i = 0; i < 10; ++i) c.events.push_back(make_gate(rx(1, 0.1)));  // q1 to 11
    c.events.push_back(make_gate(rzz(0, 1, 0.3)));   // q0 idles 1..11 first
    NoiseModel m = NoiseModel::reference();
    TimedCircuit out = schedule_noise(c, m);
    double want = idle_error_probability(10.0, m);
    bool found = false;
    for (const Event& e : out.events)
        if (e.kind == EventKind::Channel && e.channel == ChannelKind::Dephase &&
            e.targets == std::vector<int>{0}) {
            found = true;
            CHECK(e.prob == doctest::Approx(want).epsilon(1e-12));
        }
    CHECK(found);
}

TEST_CASE("measurements carry the detection flip, resets the mid-prep flip") {
    TimedCircuit c;
    c.width = 1;
    c.numBits = 1;
    c.events.push_back(make_measure(0, 0));
    c.events.push_back(make_reset(0, false));
    TimedCircuit out = schedule_noise(c, NoiseModel::reference());
    bool sawMeasure = false;
    for (const Event& e : out.events)
        if (e.kind == EventKind::Measure) {
            sawMeasure = true;
            CHECK(e.flipProb == doctest::Approx(1e-3));
        }
    CHECK(sawMeasure);
    CHECK(count_channels(out, ChannelKind::BitFlip) == 1);
    for (const Event& e : out.events)
        if (e.kind == EventKind::Channel && e.channel == ChannelKind::BitFlip)
            CHECK(e.prob == doctest::Approx(1e-3));
}

TEST_CASE("prep-tagged events draw from the prep model") {
    TimedCircuit c;
    c.width = 1;
    Event g = make_gate(rx(0, 0.5));
    g.tag = "prep";
    c.events.push_back(g);
    c.events.push_back(make_gate(rx(0, 0.5)));
    NoiseModel zero = NoiseModel::zero();
    NoiseModel ref = NoiseModel::reference();
    std::vector<double> clocks;
    TimedCircuit out = schedule_noise(c, zero, ref, &clocks);
    // only the prep gate is noisy here
    CHECK(count_channels(out, ChannelKind::Depol1) == 1);
}

TEST_CASE("noisy Bell pairs") {
    QuantumState ideal = noisy_bell_pair(NoiseModel::zero());
    Vector phi(4);
    phi.setZero();
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    Matrix proj = phi * phi.adjoint();
    CHECK((ideal.rho - proj).cwiseAbs().maxCoeff() < 1e-14);

    NoiseModel m;  // pBell = 0.01
    QuantumState pair = noisy_bell_pair(m);
    double fid = (phi.adjoint() * pair.rho * phi)(0).real();
    CHECK(fid == doctest::Approx(0.99));

    // equals one-sided depolarising(pBell) on half of the ideal pair
    QuantumState dep = QuantumState::from_density(proj);
    apply_depolarizing1(dep, 1, m.pBell);
    CHECK((pair.rho - dep.rho).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("scaled models clamp and leave idle/detection fixed") {
    ScaledModel s;
    s.base = NoiseModel::reference();
    s.c = 4.0;
    NoiseModel m = s.apply();
    CHECK(m.p1Q == doctest::Approx(4e-4));
    CHECK(m.p2Q == doctest::Approx(4e-3));
    CHECK(m.pBell == doctest::Approx(4e-2));
    CHECK(m.idleRate == doctest::Approx(1e-5));
    CHECK(m.pDetect == doctest::Approx(1e-3));

    s.c = 1e4;  // would push pBell past 1
    NoiseModel big = s.apply();
    CHECK(big.pBell == doctest::Approx(1.0));

    s.c = 2.0;
    s.scaleP1Q = false;
    s.scalePBell = false;
    NoiseModel partial = s.apply();
    CHECK(partial.p1Q == doctest::Approx(1e-4));
    CHECK(partial.p2Q == doctest::Approx(2e-3));
    CHECK(partial.pBell == doctest::Approx(1e-2));
}

TEST_CASE("scaling commutes with scheduling") {
    TimedCircuit c;
    c.width = 2;
    c.events.push_back(make_gate(rx(0, 0.5)));
    c.events.push_back(make_gate(rzz(0, 1, 0.3)));
    ScaledModel s;
    s.base = NoiseModel::reference();
    s.c = 3.0;
    TimedCircuit scaledFirst = schedule_noise(c, s.apply());
    TimedCircuit plain = schedule_noise(c, s.base);
    // scale each gate channel of the plain schedule by hand
    std::size_t i = 0, j = 0;
    REQUIRE(scaledFirst.events.size() == plain.events.size());
    for (; i < plain.events.size(); ++i, ++j) {
        const Event& a = scaledFirst.events[i];
        const Event& b = plain.events[j];
        CHECK(a.kind == b.kind);
        if (a.kind == EventKind::Channel &&
            (a.channel == ChannelKind::Depol1 || a.channel == ChannelKind::Depol2))
            CHECK(a.prob == doctest::Approx(3.0 * b.prob));
    }
}

TEST_CASE("model validation rejects out-of-range probabilities") {
    NoiseModel m;
    m.p2Q = 1.5;
    CHECK_THROWS(m.validate());
    NoiseModel neg;
    neg.pBell = -0.1;
    CHECK_THROWS(neg.validate());
}
