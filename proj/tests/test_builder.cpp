#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdnet/builder.hpp"
#include "vdnet/estimator.hpp"
#include "vdnet/gates.hpp"

#include <cmath>

using namespace vdnet;

namespace {

double expected_shot(const TimedCircuit& c, const ShotRule& rule, const QuantumState& init) {
    double e = 0.0;
    for (const auto& b : enumerate_branches(c, init))
        e += b.prob * shot_value(rule, b.bits);
    return e;
}

// small non-trivial single-copy preparation, width 2
TimedCircuit tilted_prep() {
    TimedCircuit prep;
    prep.width = 2;
    prep.events.push_back(make_gate(rx(0, 0.7), "prep"));
    prep.events.push_back(make_gate(ry(1, 0.4), "prep"));
    prep.events.push_back(make_gate(rzz(0, 1, 0.3), "prep"));
    return prep;
}

int count_measures(const TimedCircuit& c) {
    int k = 0;
    for (const Event& e : c.events)
        if (e.kind == EventKind::Measure) ++k;
    return k;
}

}  // namespace

TEST_CASE("resource table rows") {
    ResourceReport cr = count_resources(Impl::CR, 4, 6, ResourceMode::Table);
    CHECK(cr.registers == 4);
    CHECK(cr.qubits == 25);
    CHECK(cr.cswapCount == 18);
    CHECK(cr.bsmCount == 6);
    CHECK(cr.depth.dRho == 1);
    CHECK(cr.depth.dS == 2);
    CHECK(cr.depth.dB == 1);
    CHECK(cr.depth.dSigma == 1);

    ResourceReport qe = count_resources(Impl::QECR, 5, 4, ResourceMode::Table);
    CHECK(qe.registers == 2);
    CHECK(qe.qubits == 9);
    CHECK(qe.cswapCount == 16);
    CHECK(qe.bsmCount == 4);
    CHECK(qe.depth.dRho == 4);
    CHECK(qe.depth.dS == 3);
    CHECK(qe.depth.dSigma == 0);

    ResourceReport bw = count_resources(Impl::BW, 7, 3, ResourceMode::Table);
    CHECK(bw.qubits == 24);
    CHECK(bw.cswapCount == 9);
    CHECK(bw.bsmCount == 9);

    ResourceReport bw4 = count_resources(Impl::BW, 4, 6, ResourceMode::Table);
    CHECK(bw4.qubits == 25);
    CHECK(bw4.cswapCount == 6);
    CHECK(bw4.bsmCount == 12);

    ResourceReport one = count_resources(Impl::CR, 1, 5, ResourceMode::Table);
    CHECK(one.registers == 1);
    CHECK(one.cswapCount == 0);
    CHECK(one.bsmCount == 0);
    CHECK(one.depth.dRho == 1);
    CHECK(one.depth.dS == 0);

    CHECK_THROWS(count_resources(Impl::CR, 0, 3, ResourceMode::Table));
}

TEST_CASE("as-built counts differ from the table only where the circuit does") {
    ResourceReport ab = count_resources(Impl::CR, 4, 6, ResourceMode::AsBuilt);
    CHECK(ab.cswapCount == 12);  // (n-2) N once the last layer is a BSM
    CHECK(ab.bsmCount == 6);
    CHECK(ab.registers == 2);    // registers 2..n are teleported in, reusing one
    CHECK(ab.qubits == 13);      // 2N + 1

    ResourceReport qe = count_resources(Impl::QECR, 5, 4, ResourceMode::AsBuilt);
    CHECK(qe.cswapCount == 12);
    CHECK(qe.qubits == 9);

    // BW brickwork is the same circuit either way
    ResourceReport bwT = count_resources(Impl::BW, 5, 3, ResourceMode::Table);
    ResourceReport bwA = count_resources(Impl::BW, 5, 3, ResourceMode::AsBuilt);
    CHECK(bwT.cswapCount == bwA.cswapCount);
    CHECK(bwT.bsmCount == bwA.bsmCount);
}

TEST_CASE("depth row is constant for BW and n=1") {
    for (int n : {3, 5, 8}) {
        DepthExpression d = count_resources(Impl::BW, n, 2, ResourceMode::Table).depth;
        CHECK(d.dRho == 1);
        CHECK(d.dS == 1);
        CHECK(d.dB == 1);
        CHECK(d.dSigma == 1);
    }
}

TEST_CASE("resource csv rows carry all columns") {
    std::string row = count_resources(Impl::QECR, 3, 2, ResourceMode::Table).csv_row();
    CHECK(row.find("QECR") != std::string::npos);
    CHECK(row.find("table") != std::string::npos);
}

TEST_CASE("shot_value sign rules") {
    ShotRule rule;
    rule.ancillaBits = {0};
    rule.bsmPairs.push_back({{1}, {2}, 1, 2});
    rule.bsmPairs.push_back({{3}, {4}, 3, 4});
    rule.numBits = 5;
    CHECK(shot_value(rule, {0, 0, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(shot_value(rule, {0, 1, 1, 0, 0}) == doctest::Approx(-1.0));
    CHECK(shot_value(rule, {0, 1, 1, 1, 1}) == doctest::Approx(1.0));
    CHECK(shot_value(rule, {1, 0, 0, 0, 0}) == doctest::Approx(-1.0));
    CHECK_THROWS(shot_value(rule, {0, 0}));  // missing bits
}

TEST_CASE("destructive BSM statistics") {
    TimedCircuit bsm = build_bsm(0, 1, 0, 1, "bsm");
    ShotRule rule;
    rule.bsmPairs.push_back({{0}, {1}, 0, 1});
    rule.numBits = 2;

    // |00>: never both-1
    CHECK(expected_shot(bsm, rule, QuantumState::zero_state(2, StateKind::Density)) ==
          doctest::Approx(1.0));

    // |0>|1>: orthogonal states, expected sign 0
    QuantumState sv = QuantumState::zero_state(2, StateKind::Statevector);
    apply_unitary(sv, pauli_matrix('X'), {1});
    CHECK(expected_shot(bsm, rule, sv.to_density()) == doctest::Approx(0.0).epsilon(1e-10));

    // mixed (x) mixed: expected sign Tr[rho1 rho2] = 1/2
    QuantumState mixed = QuantumState::from_density(Matrix::Identity(4, 4) / 4.0);
    CHECK(expected_shot(bsm, rule, mixed) == doctest::Approx(0.5));
}

TEST_CASE("CR n=2 on |0><0| with sigma=Z estimates 1") {
    EstimatorSpec spec;
    spec.impl = Impl::CR;
    spec.n = 2;
    spec.N = 1;
    spec.statePrep.width = 1;
    spec.observable.terms = {PauliString{"Z"}};
    spec.vdModel = NoiseModel::zero();
    spec.prepModel = NoiseModel::zero();
    EstimateReport rep = run_exact(spec);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("CR and QECR coincide at n=2") {
    for (Impl impl : {Impl::CR, Impl::QECR}) {
        VDPlan plan;
        plan.impl = impl;
        plan.n = 2;
        plan.N = 2;
        plan.sigma = PauliString{"ZI"};
        plan.statePrep = tilted_prep();
        auto [c, rule] = build_plan(plan);
        CHECK(rule.bsmPairs.size() == 2);
        CHECK(rule.ancillaBits.size() == 1);
    }
    // same estimator either way
    EstimatorSpec spec;
    spec.n = 2;
    spec.N = 2;
    spec.statePrep = tilted_prep();
    spec.observable.terms = {PauliString{"ZI"}};
    spec.vdModel = NoiseModel::zero();
    spec.prepModel = NoiseModel::zero();
    spec.impl = Impl::CR;
    double a = run_exact(spec).ratio;
    spec.impl = Impl::QECR;
    double b = run_exact(spec).ratio;
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("BW structure at n=2: one ancilla, no C-SWAPs, N BSMs") {
    VDPlan plan;
    plan.impl = Impl::BW;
    plan.n = 2;
    plan.N = 3;
    plan.sigma = identity_string(3);
    plan.statePrep.width = 3;
    auto [c, rule] = build_bw(plan);
    CHECK(rule.ancillaQubits.size() == 1);
    CHECK(rule.bsmPairs.size() == 3);
    ResourceReport rep = count_resources(Impl::BW, 2, 3, ResourceMode::Table);
    CHECK(rep.cswapCount == 0);
    CHECK(rep.bsmCount == 3);
    CHECK(rep.qubits == 6);  // nN + floor((n-1)/2)
    // as built there is still one ancilla even when no C-SWAP needs it
    ResourceReport built = count_resources(Impl::BW, 2, 3, ResourceMode::AsBuilt);
    CHECK(built.qubits == 7);
}

TEST_CASE("builders reject n < 2") {
    VDPlan plan;
    plan.n = 1;
    plan.N = 1;
    plan.sigma = identity_string(1);
    plan.statePrep.width = 1;
    for (Impl impl : {Impl::CR, Impl::QECR, Impl::BW}) {
        plan.impl = impl;
        CHECK_THROWS(build_plan(plan));
    }
}

TEST_CASE("artificial-gate reduction reproduces the shot average") {
    VDPlan plan;
    plan.impl = Impl::CR;
    plan.n = 2;
    plan.N = 2;
    plan.sigma = PauliString{"ZI"};
    plan.statePrep = tilted_prep();
    auto [c, rule] = build_plan(plan);

    double byShots =
        expected_shot(c, rule, QuantumState::zero_state(c.width, StateKind::Density));

    auto [reduced, obs] = insert_artificial_gates(c, rule);
    CHECK(count_measures(reduced) == 0);
    QuantumState s = QuantumState::zero_state(reduced.width, StateKind::Density);
    run_density(reduced, s);
    double byObservable = expectation(s, obs);
    CHECK(byObservable == doctest::Approx(byShots).epsilon(1e-10));

    // the reduced observable is a lone Pauli string supported on ancillas
    CHECK(obs.ops.find('Z') != std::string::npos);
    for (char ch : obs.ops) CHECK((ch == 'I' || ch == 'Z'));
}

TEST_CASE("controlled-sigma placement does not change the estimator") {
    VDPlan plan;
    plan.impl = Impl::CR;
    plan.n = 2;
    plan.N = 2;
    plan.sigma = PauliString{"XZ"};
    plan.statePrep = tilted_prep();
    VdProgram prog = build_vd_program(plan);

    auto with_sigma_at = [&](std::size_t pos) {
        TimedCircuit c = prog.circuit;
        std::vector<Event> sig =
            controlled_sigma_events(plan.sigma, prog.ancControl, prog.dataOffset);
        c.events.insert(c.events.begin() + pos, sig.begin(), sig.end());
        return expected_shot(c, prog.rule,
                             QuantumState::zero_state(c.width, StateKind::Density));
    };
    double early = with_sigma_at(prog.sigmaEarlyPos);
    double late = with_sigma_at(prog.sigmaLatePos);
    CHECK(early == doctest::Approx(late).epsilon(1e-10));
}

TEST_CASE("QECR serialises re-preparations: held-register idle grows steadily") {
    auto idle_of_q0 = [](int n) {
        VDPlan plan;
        plan.impl = Impl::QECR;
        plan.n = n;
        plan.N = 1;
        plan.sigma = identity_string(1);
        plan.statePrep.width = 1;
        plan.statePrep.events.push_back(make_gate(rx(0, 0.5), "prep"));
        auto [c, rule] = build_plan(plan);
        Durations d;
        std::vector<double> clocks = final_clocks(c, d);
        double busy = 0.0;
        for (const Event& e : c.events) {
            bool onQ0 = false;
            for (int q : event_targets(e))
                if (q == 0) onQ0 = true;  // data qubit of the held register
            if (onQ0) busy += event_duration(e, d);
        }
        return clocks[0] - busy;
    };
    double d32 = idle_of_q0(3) - idle_of_q0(2);
    double d43 = idle_of_q0(4) - idle_of_q0(3);
    CHECK(d32 == doctest::Approx(d43));
    CHECK(d32 >= 1.0);  // at least one re-preparation (the 1 us Rx) per copy
}
