#pragma once

#include "vdnet/estimator.hpp"

namespace vdnet {

// Experiment configuration, loaded from a JSON file.  Schema (defaults in
// parentheses):
//   impl: "CR" | "QECR" | "BW"
//   n: integer or array of integers
//   N: integer
//   c: number or array (1.0)
//   engine: "exact" | "mc" | "oracle" ("exact")
//   M: shots, multiple of 100 (mc only)
//   seed: integer (1)
//   observable: [{"pauli": "IIZI", "coefficient": 1.0}, ...]
//               (single Z on site 3, 1-based)
//   prep: {"preset": "h4"} or {"h": [...]}, plus J (1.0), deltaT (0.01),
//         K (integer, or "budget" for 1/(3 N p2Q)), initSite (3)
//   noise: NoiseModel overrides, keys matching the field names
//          (p1Q, p2Q, pBell, pDetect, pMidPrep, idleRate, durations.*)
//   scaled: {"p1Q": bool, "p2Q": bool, "pBell": bool} subset scaled by c
//   networkMode: "folded" | "explicit" ("folded")
//   noiseInPrepOnly: bool (false)
//   chargeNetworkIdle: bool (false)
//   out: output CSV path (optional)
struct ExperimentConfig {
    SweepSpec sweep;
    NetworkMode networkMode = NetworkMode::Folded;
    std::string outPath;
    std::vector<long> scalingMs;  // for the scaling command

    void validate() const;  // throws std::invalid_argument with the field name
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& jsonText);

// Topology file: one directive per line, '#' comments.
//   node <id> [ancilla] [data=<k>] [network=<k>]
//   link <a> <b>
// Parse errors carry the 1-based line number.
Topology parse_topology(const std::string& text);
Topology load_topology(const std::string& path);

// CSV emission.  The timestamp header line ("# generated ...") is skipped
// when withTimestamp is false so outputs can be compared byte-for-byte.
std::string reports_to_csv(const std::vector<EstimateReport>& reports, bool withTimestamp);
std::string resources_to_csv(const std::vector<ResourceReport>& reports, bool withTimestamp);

}  // namespace vdnet
