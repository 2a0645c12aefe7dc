#include "vdnet/network.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vdnet {

std::string impl_name(Impl impl) {
    switch (impl) {
        case Impl::CR: return "CR";
        case Impl::QECR: return "QECR";
        case Impl::BW: return "BW";
    }
    return "?";
}

Impl impl_from_name(const std::string& s) {
    if (s == "CR" || s == "cr") return Impl::CR;
    if (s == "QECR" || s == "qecr") return Impl::QECR;
    if (s == "BW" || s == "bw") return Impl::BW;
    throw std::invalid_argument("unknown implementation name: " + s);
}

void Topology::validate() const {
    std::set<std::string> ids;
    for (const auto& n : nodes)
        if (!ids.insert(n.id).second)
            throw std::invalid_argument("duplicate node id: " + n.id);
    for (const auto& [a, b] : links) {
        if (!ids.count(a) || !ids.count(b))
            throw std::invalid_argument("link endpoint not a node: " + a + "-" + b);
        if (a == b) throw std::invalid_argument("self-link on node " + a);
    }
}

bool Topology::linked(const std::string& a, const std::string& b) const {
    for (const auto& [x, y] : links)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

Topology required_topology(Impl impl, int n) {
    if (n < 2) throw std::invalid_argument("required_topology needs n >= 2");
    Topology t;
    switch (impl) {
        case Impl::CR: {
            t.nodes.push_back({"control", 0, true, 1});
            for (int i = 1; i < n; ++i) {
                std::string id = "leaf" + std::to_string(i);
                t.nodes.push_back({id, 0, false, 1});
                t.links.emplace_back("control", id);
            }
            break;
        }
        case Impl::QECR: {
            t.nodes.push_back({"control", 0, true, 1});
            t.nodes.push_back({"target", 0, false, 1});
            t.links.emplace_back("control", "target");
            break;
        }
        case Impl::BW: {
            int m = std::max(1, (n - 1) / 2);
            for (int i = 1; i <= m; ++i)
                t.nodes.push_back({"ctrl" + std::to_string(i), 0, true, 1});
            for (int i = 1; i < m; ++i)
                t.links.emplace_back("ctrl" + std::to_string(i), "ctrl" + std::to_string(i + 1));
            auto target = [&](const std::string& ctrl, int copy) {
                std::string id = "copy" + std::to_string(copy);
                t.nodes.push_back({id, 0, false, 1});
                t.links.emplace_back(ctrl, id);
            };
            target("ctrl1", 1);
            for (int i = 1; i <= (n - 1) / 2; ++i) target("ctrl" + std::to_string(i), 2 * i);
            if (n % 2 == 0 && n > 2) target("ctrl" + std::to_string(m), n);
            break;
        }
    }
    t.validate();
    return t;
}

namespace {

struct MatchState {
    const Topology* avail;
    const Topology* req;
    std::vector<int> assign;      // required node -> available node index (-1 unset)
    std::vector<bool> used;
    int bestMatched = -1;
    std::vector<int> bestAssign;
};

int matched_links(const MatchState& st) {
    int m = 0;
    for (const auto& [a, b] : st.req->links) {
        int ia = -1, ib = -1;
        for (std::size_t i = 0; i < st.req->nodes.size(); ++i) {
            if (st.req->nodes[i].id == a) ia = static_cast<int>(i);
            if (st.req->nodes[i].id == b) ib = static_cast<int>(i);
        }
        if (st.assign[ia] < 0 || st.assign[ib] < 0) continue;
        if (st.avail->linked(st.avail->nodes[st.assign[ia]].id,
                             st.avail->nodes[st.assign[ib]].id))
            ++m;
    }
    return m;
}

void search(MatchState& st, std::size_t idx) {
    if (idx == st.req->nodes.size()) {
        int m = matched_links(st);
        if (m > st.bestMatched) {
            st.bestMatched = m;
            st.bestAssign = st.assign;
        }
        return;
    }
    const auto& rn = st.req->nodes[idx];
    for (std::size_t j = 0; j < st.avail->nodes.size(); ++j) {
        if (st.used[j]) continue;
        if (rn.hasAncilla && !st.avail->nodes[j].hasAncilla) continue;
        st.used[j] = true;
        st.assign[idx] = static_cast<int>(j);
        search(st, idx + 1);
        st.used[j] = false;
        st.assign[idx] = -1;
        if (st.bestMatched == static_cast<int>(st.req->links.size())) return;
    }
}

}  // namespace

std::vector<std::string> validate_topology(const Topology& available, const Topology& required) {
    available.validate();
    required.validate();
    std::vector<std::string> problems;
    int ancNeeded = 0, ancHave = 0;
    for (const auto& n : required.nodes) ancNeeded += n.hasAncilla ? 1 : 0;
    for (const auto& n : available.nodes) ancHave += n.hasAncilla ? 1 : 0;
    if (ancNeeded > ancHave)
        problems.push_back("missing ancilla-bearing nodes: need " + std::to_string(ancNeeded) +
                           ", have " + std::to_string(ancHave));
    if (required.nodes.size() > available.nodes.size())
        problems.push_back("missing nodes: need " + std::to_string(required.nodes.size()) +
                           ", have " + std::to_string(available.nodes.size()));
    if (!problems.empty()) return problems;

    MatchState st;
    st.avail = &available;
    st.req = &required;
    st.assign.assign(required.nodes.size(), -1);
    st.used.assign(available.nodes.size(), false);
    search(st, 0);
    if (st.bestMatched == static_cast<int>(required.links.size())) return {};
    st.assign = st.bestAssign;
    for (const auto& [a, b] : required.links) {
        int ia = -1, ib = -1;
        for (std::size_t i = 0; i < required.nodes.size(); ++i) {
            if (required.nodes[i].id == a) ia = static_cast<int>(i);
            if (required.nodes[i].id == b) ib = static_cast<int>(i);
        }
        bool ok = st.assign[ia] >= 0 && st.assign[ib] >= 0 &&
                  available.linked(available.nodes[st.assign[ia]].id,
                                   available.nodes[st.assign[ib]].id);
        if (!ok) problems.push_back("missing link " + a + "-" + b);
    }
    if (problems.empty()) problems.push_back("no node matching satisfies the requirements");
    return problems;
}

RemoteOpPlan remote_plan(Impl impl, int n, int N) {
    if (n < 1 || N < 1) throw std::invalid_argument("remote_plan needs n, N >= 1");
    RemoteOpPlan plan;
    if (n == 1) return plan;
    auto add = [&](RemoteOp::Kind k, const std::string& link, int count) {
        for (int i = 0; i < count; ++i) plan.ops.push_back(RemoteOp{k, link});
    };
    switch (impl) {
        case Impl::CR:
            for (int k = 2; k <= n - 1; ++k)
                add(RemoteOp::Teleport, "control-leaf" + std::to_string(k - 1), N);
            add(RemoteOp::RemoteBSM, "control-leaf" + std::to_string(n - 1), N);
            break;
        case Impl::QECR:
            add(RemoteOp::Teleport, "control-target", (n - 2) * N);
            add(RemoteOp::RemoteBSM, "control-target", N);
            break;
        case Impl::BW: {
            int m = std::max(1, (n - 1) / 2);
            for (int i = 1; i <= (n - 1) / 2; ++i)
                add(RemoteOp::Teleport, "ctrl" + std::to_string(i) + "-copy" + std::to_string(2 * i), N);
            add(RemoteOp::RemoteBSM, "bsm-layer", (n / 2) * N);
            add(RemoteOp::GhzLink, "ctrl-path", m - 1);
            break;
        }
    }
    return plan;
}

namespace {

Matrix cnot_local() { return cnot_matrix(); }

void bell_prep(TimedCircuit& c, int keptHalf, int sentHalf, const NoiseModel& model) {
    // ideal |Phi+> on (keptHalf, sentHalf), then the pair error folded onto
    // the transmitted half
    c.events.push_back(make_unitary(hadamard_matrix(), {keptHalf}, true, "bellprep"));
    c.events.push_back(make_unitary(cnot_local(), {keptHalf, sentHalf}, true, "bellprep"));
    if (model.pBell > 0.0)
        c.events.push_back(make_channel(ChannelKind::Depol1, {sentHalf}, model.pBell, "bell"));
}

}  // namespace

TimedCircuit lower_teleport(int qSource, int qDest, const NoiseModel& model, NetworkMode mode) {
    if (qSource == qDest) throw std::invalid_argument("teleport endpoints must differ");
    TimedCircuit c;
    if (mode == NetworkMode::Folded) {
        c.width = std::max(qSource, qDest) + 1;
        c.events.push_back(make_channel(ChannelKind::Depol1, {qDest}, model.pBell, "fold:teleport"));
        return c;
    }
    int helper = std::max(qSource, qDest) + 1;  // Bell half at the source node
    c.width = helper + 1;
    c.numBits = 2;
    bell_prep(c, helper, qDest, model);
    c.events.push_back(make_unitary(cnot_local(), {qSource, helper}, true));
    c.events.push_back(make_unitary(hadamard_matrix(), {qSource}, true));
    c.events.push_back(make_measure(qSource, 0));
    c.events.push_back(make_measure(helper, 1));
    Event xcorr = make_unitary(pauli_matrix('X'), {qDest}, true, "correction");
    xcorr.condBits = {1};
    c.events.push_back(std::move(xcorr));
    Event zcorr = make_unitary(pauli_matrix('Z'), {qDest}, true, "correction");
    zcorr.condBits = {0};
    c.events.push_back(std::move(zcorr));
    return c;
}

RemoteBsmFragment lower_remote_bsm(int q1, int q2, const NoiseModel& model, NetworkMode mode) {
    if (q1 == q2) throw std::invalid_argument("BSM qubits must differ");
    RemoteBsmFragment f;
    TimedCircuit& c = f.circuit;
    if (mode == NetworkMode::Folded) {
        c.width = std::max(q1, q2) + 1;
        c.numBits = 2;
        c.events.push_back(make_unitary(cnot_local(), {q1, q2}, true));
        c.events.push_back(make_unitary(hadamard_matrix(), {q1}, true));
        Event m1 = make_measure(q1, 0, FoldRole::BsmControl);
        m1.flipProb = model.pBell / 3.0;
        Event m2 = make_measure(q2, 1, FoldRole::BsmTarget);
        m2.flipProb = 2.0 * model.pBell / 3.0;
        c.events.push_back(std::move(m1));
        c.events.push_back(std::move(m2));
        f.bits1 = {0};
        f.bits2 = {1};
        return f;
    }
    int a1 = std::max(q1, q2) + 1;  // Bell half at q1's node
    int a2 = a1 + 1;                // Bell half at q2's node
    c.width = a2 + 1;
    c.numBits = 4;
    bell_prep(c, a1, a2, model);
    // local BSM at node 1: (q1, a1)
    c.events.push_back(make_unitary(cnot_local(), {q1, a1}, true));
    c.events.push_back(make_unitary(hadamard_matrix(), {q1}, true));
    c.events.push_back(make_measure(q1, 0));
    c.events.push_back(make_measure(a1, 1));
    // local BSM at node 2: (q2, a2)
    c.events.push_back(make_unitary(cnot_local(), {q2, a2}, true));
    c.events.push_back(make_unitary(hadamard_matrix(), {q2}, true));
    c.events.push_back(make_measure(q2, 2));
    c.events.push_back(make_measure(a2, 3));
    // entanglement swapping: the effective phase bit is the XOR of the two
    // local phase bits, the effective parity bit the XOR of the two local
    // parity bits (the shared pair contributes even parity)
    f.bits1 = {0, 2};
    f.bits2 = {1, 3};
    return f;
}

TimedCircuit lower_ghz(int k, const NoiseModel& model, NetworkMode mode) {
    if (k < 2) throw std::invalid_argument("GHZ fragment needs k >= 2");
    TimedCircuit c;
    if (mode == NetworkMode::Folded) {
        // chain fan-out with the link error applied as each member is
        // attached: an X-type Bell error then spreads down the chain exactly
        // like the flipped-outcome corrections of the adaptive construction
        c.width = k;
        c.events.push_back(make_unitary(hadamard_matrix(), {0}, true, "ghzprep"));
        for (int i = 1; i < k; ++i) {
            c.events.push_back(make_unitary(cnot_local(), {i - 1, i}, true, "ghzprep"));
            if (model.pBell > 0.0)
                c.events.push_back(make_channel(ChannelKind::Depol1, {i}, model.pBell, "bell"));
        }
        return c;
    }
    // GHZ members g_0..g_{k-1}; helper r_i = qubit k+i sits at node i and
    // shares a Bell pair with g_{i+1} at node i+1.
    c.width = 2 * k - 1;
    c.numBits = k - 1;
    c.events.push_back(make_unitary(hadamard_matrix(), {0}, true, "ghzprep"));
    for (int i = 0; i < k - 1; ++i) bell_prep(c, k + i, i + 1, model);
    for (int i = 0; i < k - 1; ++i) {
        c.events.push_back(make_unitary(cnot_local(), {i, k + i}, true));
        c.events.push_back(make_measure(k + i, i));
    }
    // X corrections from the collective outcome (prefix parities)
    for (int i = 0; i < k - 1; ++i) {
        Event corr = make_unitary(pauli_matrix('X'), {i + 1}, true, "correction");
        for (int j = 0; j <= i; ++j) corr.condBits.push_back(j);
        c.events.push_back(std::move(corr));
    }
    return c;
}

}  // namespace vdnet
