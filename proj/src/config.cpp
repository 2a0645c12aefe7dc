#include "vdnet/config.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vdnet {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

std::vector<int> int_list(const json& v, const std::string& field) {
    std::vector<int> out;
    if (v.is_number_integer()) {
        out.push_back(v.get<int>());
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number_integer()) bad_field(field, "expected integers");
            out.push_back(e.get<int>());
        }
    } else {
        bad_field(field, "expected an integer or an array of integers");
    }
    if (out.empty()) bad_field(field, "range is empty");
    return out;
}

std::vector<double> num_list(const json& v, const std::string& field) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number()) bad_field(field, "expected numbers");
            out.push_back(e.get<double>());
        }
    } else {
        bad_field(field, "expected a number or an array of numbers");
    }
    if (out.empty()) bad_field(field, "range is empty");
    return out;
}

Observable default_observable(int N) {
    // single Z on site 3 (1-based), the initially excited site
    Observable o;
    PauliString p = identity_string(N);
    p.ops[(3 - 1) % N] = 'Z';
    o.terms.push_back(std::move(p));
    return o;
}

void read_noise(const json& j, NoiseModel& m) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "p1Q") m.p1Q = it->get<double>();
        else if (k == "p2Q") m.p2Q = it->get<double>();
        else if (k == "pBell") m.pBell = it->get<double>();
        else if (k == "pDetect") m.pDetect = it->get<double>();
        else if (k == "pMidPrep") m.pMidPrep = it->get<double>();
        else if (k == "idleRate") m.idleRate = it->get<double>();
        else if (k == "durations") {
            for (auto dt = it->begin(); dt != it->end(); ++dt) {
                const std::string& dk = dt.key();
                double v = dt->get<double>();
                if (dk == "singleQubit") m.durations.singleQubit = v;
                else if (dk == "twoQubit") m.durations.twoQubit = v;
                else if (dk == "detection") m.durations.detection = v;
                else if (dk == "midPrep") m.durations.midPrep = v;
                else if (dk == "bellPair") m.durations.bellPair = v;
                else bad_field("noise.durations." + dk, "unknown duration");
            }
        } else {
            bad_field("noise." + k, "unknown noise key");
        }
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (sweep.ns.empty()) bad_field("n", "range is empty");
    for (int n : sweep.ns)
        if (n < 1) bad_field("n", "copies must be >= 1");
    if (sweep.N < 1) bad_field("N", "must be >= 1");
    if (sweep.cs.empty()) bad_field("c", "range is empty");
    for (double c : sweep.cs)
        if (c < 0.0) bad_field("c", "must be >= 0");
    if (sweep.engine != "exact" && sweep.engine != "mc" && sweep.engine != "oracle")
        bad_field("engine", "must be exact, mc or oracle");
    if (sweep.engine == "mc" && (sweep.M <= 0 || sweep.M % 100 != 0))
        bad_field("M", "must be a positive multiple of 100 in mc mode");
    sweep.observable.validate(sweep.N);
    sweep.prep.validate();
    if (sweep.prep.N != sweep.N) bad_field("prep", "width must equal N");
    sweep.baseModel.validate();
}

ExperimentConfig parse_config(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    SweepSpec& s = cfg.sweep;

    if (!j.contains("impl")) bad_field("impl", "missing");
    s.impl = impl_from_name(j.at("impl").get<std::string>());
    if (!j.contains("n")) bad_field("n", "missing");
    s.ns = int_list(j.at("n"), "n");
    if (!j.contains("N")) bad_field("N", "missing");
    s.N = j.at("N").get<int>();
    if (s.N < 1) bad_field("N", "must be >= 1");
    if (j.contains("c")) s.cs = num_list(j.at("c"), "c");
    if (j.contains("engine")) s.engine = j.at("engine").get<std::string>();
    if (j.contains("M")) s.M = j.at("M").get<long>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("noiseInPrepOnly")) s.noiseInPrepOnly = j.at("noiseInPrepOnly").get<bool>();
    if (j.contains("chargeNetworkIdle"))
        s.chargeNetworkIdle = j.at("chargeNetworkIdle").get<bool>();

    if (j.contains("noise")) read_noise(j.at("noise"), s.baseModel);
    if (j.contains("scaled")) {
        const json& sc = j.at("scaled");
        s.scaleP1Q = sc.value("p1Q", true);
        s.scaleP2Q = sc.value("p2Q", true);
        s.scalePBell = sc.value("pBell", true);
    }

    HeisenbergParams& p = s.prep;
    p.N = s.N;
    const json prep = j.contains("prep") ? j.at("prep") : json::object();
    if (prep.contains("preset")) {
        std::string name = prep.at("preset").get<std::string>();
        if (name != "h" + std::to_string(s.N))
            bad_field("prep.preset", "preset " + name + " does not match N=" +
                                         std::to_string(s.N));
        p.h = preset_h(s.N);
    } else if (prep.contains("h")) {
        p.h = num_list(prep.at("h"), "prep.h");
    } else {
        try {
            p.h = preset_h(s.N);
        } catch (const std::invalid_argument&) {
            bad_field("prep", "no field preset for N=" + std::to_string(s.N) +
                                  "; supply prep.h");
        }
    }
    if (prep.contains("J")) p.J = prep.at("J").get<double>();
    if (prep.contains("deltaT")) p.deltaT = prep.at("deltaT").get<double>();
    if (prep.contains("initSite")) p.initSite = prep.at("initSite").get<int>();
    if (prep.contains("K")) {
        const json& k = prep.at("K");
        if (k.is_string() && k.get<std::string>() == "budget")
            p.K = trotter_steps_for_budget(s.N, s.baseModel.p2Q);
        else if (k.is_number_integer())
            p.K = k.get<int>();
        else
            bad_field("prep.K", "expected an integer or \"budget\"");
    } else {
        p.K = trotter_steps_for_budget(s.N, s.baseModel.p2Q);
    }

    if (j.contains("observable")) {
        Observable o;
        for (const auto& t : j.at("observable")) {
            PauliString ps;
            ps.ops = t.at("pauli").get<std::string>();
            if (t.contains("coefficient")) ps.coefficient = t.at("coefficient").get<double>();
            for (char ch : ps.ops)
                if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
                    bad_field("observable", "pauli letters must be I, X, Y or Z");
            o.terms.push_back(std::move(ps));
        }
        s.observable = std::move(o);
    } else {
        s.observable = default_observable(s.N);
    }

    if (j.contains("networkMode")) {
        std::string m = j.at("networkMode").get<std::string>();
        if (m == "folded") cfg.networkMode = NetworkMode::Folded;
        else if (m == "explicit") cfg.networkMode = NetworkMode::Explicit;
        else bad_field("networkMode", "must be folded or explicit");
    }
    if (j.contains("out")) cfg.outPath = j.at("out").get<std::string>();
    if (j.contains("Ms")) {
        for (const auto& e : j.at("Ms")) cfg.scalingMs.push_back(e.get<long>());
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

Topology parse_topology(const std::string& text) {
    Topology topo;
    std::istringstream is(text);
    std::string line;
    int lineNo = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("topology line " + std::to_string(lineNo) + ": " + why);
    };
    while (std::getline(is, line)) {
        ++lineNo;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "node") {
            TopologyNode node;
            if (!(ls >> node.id)) fail("node needs an id");
            std::string attr;
            while (ls >> attr) {
                if (attr == "ancilla") node.hasAncilla = true;
                else if (attr.rfind("data=", 0) == 0)
                    node.dataQubits = std::stoi(attr.substr(5));
                else if (attr.rfind("network=", 0) == 0)
                    node.networkQubits = std::stoi(attr.substr(8));
                else fail("unknown node attribute '" + attr + "'");
            }
            topo.nodes.push_back(std::move(node));
        } else if (word == "link") {
            std::string a, b;
            if (!(ls >> a >> b)) fail("link needs two node ids");
            topo.links.emplace_back(a, b);
        } else {
            fail("unknown directive '" + word + "'");
        }
    }
    if (topo.nodes.empty())
        throw std::invalid_argument("topology line " + std::to_string(lineNo) +
                                    ": no nodes declared");
    topo.validate();
    return topo;
}

Topology load_topology(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open topology file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_topology(buf.str());
}

namespace {

std::string timestamp_line() {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# generated ") + buf + "\n";
}

}  // namespace

std::string reports_to_csv(const std::vector<EstimateReport>& reports, bool withTimestamp) {
    std::ostringstream os;
    if (withTimestamp) os << timestamp_line();
    os << "impl,n,N,c,mode,M,ratio,stderr,deltaE,reference,seed\n";
    for (const auto& r : reports) os << r.csv_row() << '\n';
    return os.str();
}

std::string resources_to_csv(const std::vector<ResourceReport>& reports, bool withTimestamp) {
    std::ostringstream os;
    if (withTimestamp) os << timestamp_line();
    os << "impl,n,N,mode,registers,qubits,cswap,bsm,bellpairs,depth\n";
    for (const auto& r : reports) os << r.csv_row() << '\n';
    return os.str();
}

}  // namespace vdnet
