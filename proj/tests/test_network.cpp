#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdnet/builder.hpp"
#include "vdnet/gates.hpp"
#include "vdnet/network.hpp"

#include <cmath>
#include <map>

using namespace vdnet;

namespace {

QuantumState random_qubit(unsigned seed) {
    std::srand(seed);
    Matrix a = Matrix::Random(2, 2);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return QuantumState::from_density(rho);
}

// average output density of a fragment with measurements / feedback
Matrix averaged_run(const TimedCircuit& c, const QuantumState& init) {
    Matrix acc = Matrix::Zero(init.rho.rows(), init.rho.cols());
    for (const auto& b : enumerate_branches(c, init)) acc += b.prob * b.state.rho;
    return acc;
}

int degree(const Topology& t, const std::string& id) {
    int d = 0;
    for (const auto& [a, b] : t.links)
        if (a == id || b == id) ++d;
    return d;
}

}  // namespace

TEST_CASE("implementation names round-trip") {
    for (Impl i : {Impl::CR, Impl::QECR, Impl::BW}) CHECK(impl_from_name(impl_name(i)) == i);
    CHECK(impl_from_name("bw") == Impl::BW);
    CHECK_THROWS(impl_from_name("xx"));
}

TEST_CASE("required topologies") {
    Topology q = required_topology(Impl::QECR, 7);
    CHECK(q.nodes.size() == 2);
    CHECK(q.links.size() == 1);

    Topology cr = required_topology(Impl::CR, 6);
    CHECK(cr.nodes.size() == 6);
    CHECK(cr.links.size() == 5);
    for (const auto& [a, b] : cr.links) CHECK((a == "control" || b == "control"));

    Topology bw = required_topology(Impl::BW, 7);
    int ctrls = 0;
    for (const auto& n : bw.nodes)
        if (n.hasAncilla) ++ctrls;
    CHECK(ctrls == 3);
    CHECK(bw.linked("ctrl1", "ctrl2"));
    CHECK(bw.linked("ctrl2", "ctrl3"));
    // one outer control carries two target links on odd n
    CHECK(degree(bw, "ctrl1") == 3);  // path link + two copies

    CHECK_THROWS(required_topology(Impl::CR, 1));
}

TEST_CASE("topology validation") {
    Topology need = required_topology(Impl::CR, 4);
    CHECK(validate_topology(need, need).empty());

    Topology broken = need;
    broken.links.pop_back();
    auto problems = validate_topology(broken, need);
    CHECK_FALSE(problems.empty());

    // BW n=5 needs a degree-3 hub (ctrl1 touches ctrl2 and two copies), so a
    // ring of degree-2 nodes cannot host it, while a complete graph can
    Topology ring, full;
    for (int i = 0; i < 5; ++i) {
        ring.nodes.push_back({"r" + std::to_string(i), 0, true, 1});
        full.nodes.push_back({"f" + std::to_string(i), 0, true, 1});
    }
    for (int i = 0; i < 5; ++i) {
        ring.links.emplace_back("r" + std::to_string(i), "r" + std::to_string((i + 1) % 5));
        for (int j = i + 1; j < 5; ++j)
            full.links.emplace_back("f" + std::to_string(i), "f" + std::to_string(j));
    }
    CHECK_FALSE(validate_topology(ring, required_topology(Impl::BW, 5)).empty());
    CHECK(validate_topology(full, required_topology(Impl::BW, 5)).empty());
}

TEST_CASE("remote plans match the Bell-pair budgets") {
    CHECK(remote_plan(Impl::CR, 4, 6).bellBudget() == 18);     // (n-1) N
    CHECK(remote_plan(Impl::QECR, 5, 4).bellBudget() == 16);   // (n-2) N + N
    // BW: floor((n-1)/2) N teleports + floor(n/2) N BSMs + (m-1) GHZ links
    CHECK(remote_plan(Impl::BW, 7, 3).bellBudget() == 9 + 9 + 2);
    CHECK(remote_plan(Impl::CR, 1, 5).bellBudget() == 0);
}

TEST_CASE("explicit teleport is exact on every branch at pBell=0") {
    NoiseModel zero = NoiseModel::zero();
    TimedCircuit frag = lower_teleport(0, 1, zero, NetworkMode::Explicit);
    QuantumState plus = QuantumState::zero_state(1, StateKind::Density);
    {
        QuantumState sv = QuantumState::zero_state(1, StateKind::Statevector);
        apply_unitary(sv, hadamard_matrix(), {0});
        plus = sv.to_density();
    }
    QuantumState init = kron(plus, QuantumState::zero_state(frag.width - 1, StateKind::Density));
    auto branches = enumerate_branches(frag, init);
    int live = 0;
    for (const auto& b : branches) {
        if (b.prob < 1e-12) continue;
        ++live;
        QuantumState out = partial_trace(b.state, {1});
        CHECK((out.rho - plus.rho).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(live == 4);
}

TEST_CASE("folded teleport equals the explicit fragment") {
    for (double p : {0.0, 0.01, 0.1}) {
        NoiseModel m = NoiseModel::zero();
        m.pBell = p;
        QuantumState payload = random_qubit(31);

        TimedCircuit ex = lower_teleport(0, 1, m, NetworkMode::Explicit);
        QuantumState init =
            kron(payload, QuantumState::zero_state(ex.width - 1, StateKind::Density));
        Matrix avg = averaged_run(ex, init);
        QuantumState exOut = partial_trace(QuantumState::from_density(avg), {1});

        TimedCircuit fold = lower_teleport(0, 1, m, NetworkMode::Folded);
        CHECK(fold.width == 2);  // no network qubits
        QuantumState foldInit = kron(QuantumState::zero_state(1, StateKind::Density), payload);
        run_density(fold, foldInit);
        QuantumState foldOut = partial_trace(foldInit, {1});

        CHECK((exOut.rho - foldOut.rho).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("remote BSM: folded flip probabilities carry the pair error") {
    NoiseModel m = NoiseModel::zero();
    m.pBell = 0.01;
    RemoteBsmFragment f = lower_remote_bsm(0, 1, m, NetworkMode::Folded);
    double p1 = -1, p2 = -1;
    for (const Event& e : f.circuit.events)
        if (e.kind == EventKind::Measure) {
            if (e.bit == f.bits1[0]) p1 = e.flipProb;
            if (e.bit == f.bits2[0]) p2 = e.flipProb;
        }
    CHECK(p1 == doctest::Approx(1.0 / 300.0));
    CHECK(p2 == doctest::Approx(1.0 / 150.0));
}

TEST_CASE("remote BSM: folded and explicit outcome distributions agree at pBell=0") {
    NoiseModel zero = NoiseModel::zero();
    // payload on qubits 0 and 2 with an untouched spectator on 1, so the
    // explicit helpers (3, 4) never collide with the payload
    auto distribution = [&](NetworkMode mode, const QuantumState& payload) {
        RemoteBsmFragment f = lower_remote_bsm(0, 2, zero, mode);
        QuantumState init = payload;
        if (f.circuit.width > payload.width)
            init = kron(payload, QuantumState::zero_state(f.circuit.width - payload.width,
                                                          StateKind::Density));
        std::map<std::pair<int, int>, double> dist;
        for (const auto& b : enumerate_branches(f.circuit, init)) {
            int par1 = 0, par2 = 0;
            for (int i : f.bits1) par1 ^= b.bits[i];
            for (int i : f.bits2) par2 ^= b.bits[i];
            dist[{par1, par2}] += b.prob;
        }
        return dist;
    };

    std::vector<QuantumState> inputs;
    inputs.push_back(QuantumState::zero_state(3, StateKind::Density));  // |000>
    {
        QuantumState sv = QuantumState::zero_state(3, StateKind::Statevector);
        apply_unitary(sv, pauli_matrix('X'), {2});  // q2 = |1>
        inputs.push_back(sv.to_density());
    }
    {
        QuantumState sv = QuantumState::zero_state(3, StateKind::Statevector);
        apply_unitary(sv, hadamard_matrix(), {0});
        apply_unitary(sv, cnot_matrix(), {0, 2});  // |Phi+> on the payload pair
        inputs.push_back(sv.to_density());
    }

    for (const QuantumState& in : inputs) {
        auto fold = distribution(NetworkMode::Folded, in);
        auto expl = distribution(NetworkMode::Explicit, in);
        for (auto& [key, p] : expl) CHECK(fold[key] == doctest::Approx(p).epsilon(1e-10));
    }

    // |00> = (|Phi+> + |Phi->)/sqrt(2): amplitude parity certain, phase fair
    auto d = distribution(NetworkMode::Folded, inputs[0]);
    CHECK(d[{0, 0}] == doctest::Approx(0.5));
    CHECK(d[{1, 0}] == doctest::Approx(0.5));
    CHECK(d[{0, 1}] + d[{1, 1}] == doctest::Approx(0.0));
}

TEST_CASE("GHZ fragments") {
    NoiseModel zero = NoiseModel::zero();

    // k=2 folded: Bell state
    TimedCircuit two = lower_ghz(2, zero, NetworkMode::Folded);
    QuantumState s = QuantumState::zero_state(2, StateKind::Density);
    run_density(two, s);
    Vector phi(4);
    phi.setZero();
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    CHECK(fidelity_pure(s, phi) == doctest::Approx(1.0));

    // explicit k=5 noiseless: every branch is a perfect GHZ
    int k = 5;
    TimedCircuit frag = lower_ghz(k, zero, NetworkMode::Explicit);
    Vector ghz(1 << k);
    ghz.setZero();
    ghz(0) = ghz((1 << k) - 1) = 1.0 / std::sqrt(2.0);
    QuantumState init = QuantumState::zero_state(frag.width, StateKind::Density);
    int checked = 0;
    for (const auto& b : enumerate_branches(frag, init)) {
        if (b.prob < 1e-12) continue;
        std::vector<int> keep(k);
        for (int i = 0; i < k; ++i) keep[i] = i;
        QuantumState out = partial_trace(b.state, keep);
        CHECK(fidelity_pure(out, ghz) == doctest::Approx(1.0).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked == 16);  // 2^(k-1) live branches

    // folded == explicit (members traced out of helpers) at every pBell
    for (double p : {0.0, 0.01, 0.1}) {
        NoiseModel m = NoiseModel::zero();
        m.pBell = p;
        int kk = 3;
        TimedCircuit ex = lower_ghz(kk, m, NetworkMode::Explicit);
        Matrix avg = averaged_run(ex, QuantumState::zero_state(ex.width, StateKind::Density));
        QuantumState exOut = partial_trace(QuantumState::from_density(avg), {0, 1, 2});
        TimedCircuit fold = lower_ghz(kk, m, NetworkMode::Folded);
        QuantumState foldOut = QuantumState::zero_state(kk, StateKind::Density);
        run_density(fold, foldOut);
        CHECK((exOut.rho - foldOut.rho).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("fragment preconditions") {
    NoiseModel m;
    CHECK_THROWS(lower_teleport(1, 1, m, NetworkMode::Folded));
    CHECK_THROWS(lower_remote_bsm(0, 0, m, NetworkMode::Folded));
    CHECK_THROWS(lower_ghz(1, m, NetworkMode::Folded));
}

TEST_CASE("Bell budgets match the resource accounting") {
    for (Impl impl : {Impl::CR, Impl::QECR, Impl::BW}) {
        for (int n : {2, 3, 4, 5}) {
            ResourceReport rep = count_resources(impl, n, 3, ResourceMode::Table);
            CHECK(rep.bellPairs == remote_plan(impl, n, 3).bellBudget());
        }
    }
}
