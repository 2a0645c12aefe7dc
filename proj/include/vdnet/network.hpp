#pragma once

#include <string>
#include <vector>

#include "vdnet/circuit.hpp"
#include "vdnet/noise.hpp"

namespace vdnet {

enum class Impl { CR, QECR, BW };
enum class NetworkMode { Folded, Explicit };

std::string impl_name(Impl impl);
Impl impl_from_name(const std::string& s);

struct TopologyNode {
    std::string id;
    int dataQubits = 0;     // 0 = unspecified
    bool hasAncilla = false;
    int networkQubits = 1;
};

struct Topology {
    std::vector<TopologyNode> nodes;
    std::vector<std::pair<std::string, std::string>> links;  // undirected

    void validate() const;  // link endpoints exist; <=1 ancilla per node
    bool linked(const std::string& a, const std::string& b) const;
};

// Minimal connectivity each implementation needs: CR a star centred on the
// control node, QECR two nodes, BW a path of control nodes with targets
// hanging off them.
Topology required_topology(Impl impl, int n);

// Empty result = ok; otherwise a list of missing links/ancillas under the
// best node matching found.
std::vector<std::string> validate_topology(const Topology& available, const Topology& required);

struct RemoteOp {
    enum Kind { Teleport, RemoteBSM, GhzLink } kind;
    std::string link;
};

struct RemoteOpPlan {
    std::vector<RemoteOp> ops;
    int bellBudget() const { return static_cast<int>(ops.size()); }
};

// One Bell pair per teleported qubit, per remote BSM, and per GHZ link.
RemoteOpPlan remote_plan(Impl impl, int n, int N);

// --- lowering of remote operations ----------------------------------------
// Explicit fragments spell out Bell pairs, helper qubits, measurements and
// feedback with ideal local gates; folded fragments apply the equivalent
// local channels.  Explicit mode exists to validate the fold.

// Explicit: payload starts on qSource and lands on qDest (helper qubit
// appended).  Folded: depolarising(pBell) on qDest, payload already there.
TimedCircuit lower_teleport(int qSource, int qDest, const NoiseModel& model, NetworkMode mode);

struct RemoteBsmFragment {
    TimedCircuit circuit;
    // BSM outcome bits: the sign factor is -1 iff both group parities are odd
    std::vector<int> bits1, bits2;
};

RemoteBsmFragment lower_remote_bsm(int q1, int q2, const NoiseModel& model, NetworkMode mode);

// GHZ over qubits 0..k-1 across a path of nodes; explicit mode consumes k-1
// Bell pairs on helper qubits k..2k-2 with Z-measurements and collective
// X corrections, in depth independent of k.
TimedCircuit lower_ghz(int k, const NoiseModel& model, NetworkMode mode);

}  // namespace vdnet
