#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdnet/config.hpp"

#include <string>

using namespace vdnet;

TEST_CASE("minimal config picks up the documented defaults") {
    ExperimentConfig cfg = parse_config(R"({
        "impl": "CR", "n": 2, "N": 4,
        "prep": {"preset": "h4", "K": 10}
    })");
    cfg.validate();
    CHECK(cfg.sweep.impl == Impl::CR);
    CHECK(cfg.sweep.ns == std::vector<int>{2});
    CHECK(cfg.sweep.N == 4);
    CHECK(cfg.sweep.cs == std::vector<double>{1.0});
    CHECK(cfg.sweep.engine == "exact");
    CHECK(cfg.sweep.seed == 1);
    CHECK(cfg.sweep.prep.deltaT == doctest::Approx(0.01));
    CHECK(cfg.sweep.prep.J == doctest::Approx(1.0));
    CHECK(cfg.sweep.prep.initSite == 3);
    CHECK(cfg.sweep.prep.h == preset_h(4));
    CHECK(cfg.networkMode == NetworkMode::Folded);
    // default observable: single Z on site 3 (1-based) -> qubit 2
    REQUIRE(cfg.sweep.observable.terms.size() == 1);
    CHECK(cfg.sweep.observable.terms[0].ops == "IIZI");
}

TEST_CASE("ranges, scaling subsets and noise overrides") {
    ExperimentConfig cfg = parse_config(R"({
        "impl": "QECR", "n": [1, 2, 3], "N": 4,
        "c": [0.5, 1, 2],
        "engine": "mc", "M": 2000, "seed": 7,
        "observable": [{"pauli": "ZIII", "coefficient": 0.5},
                       {"pauli": "IZII", "coefficient": -1.5}],
        "prep": {"preset": "h4", "K": "budget"},
        "noise": {"p2Q": 0.002, "idleRate": 2e-5},
        "scaled": {"p1Q": false, "p2Q": true, "pBell": false},
        "noiseInPrepOnly": true,
        "out": "rows.csv"
    })");
    cfg.validate();
    CHECK(cfg.sweep.ns == std::vector<int>{1, 2, 3});
    CHECK(cfg.sweep.cs == std::vector<double>{0.5, 1, 2});
    CHECK(cfg.sweep.M == 2000);
    CHECK(cfg.sweep.seed == 7);
    CHECK(cfg.sweep.baseModel.p2Q == doctest::Approx(0.002));
    CHECK(cfg.sweep.baseModel.idleRate == doctest::Approx(2e-5));
    CHECK(cfg.sweep.baseModel.p1Q == doctest::Approx(1e-4));  // untouched default
    CHECK_FALSE(cfg.sweep.scaleP1Q);
    CHECK(cfg.sweep.scaleP2Q);
    CHECK_FALSE(cfg.sweep.scalePBell);
    CHECK(cfg.sweep.noiseInPrepOnly);
    CHECK(cfg.outPath == "rows.csv");
    CHECK(cfg.sweep.observable.terms[1].coefficient == doctest::Approx(-1.5));
    // K = "budget" with the overridden p2Q: floor(1/(3*4*0.002)) = 41
    CHECK(cfg.sweep.prep.K == 41);
}

TEST_CASE("invalid configs fail with the offending field named") {
    CHECK_THROWS(parse_config("{"));  // malformed JSON
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"impl": "XX", "n": 2, "N": 4, "prep": {"preset": "h4", "K": 1}})")
            .validate(),
        doctest::Contains("impl"), std::invalid_argument);

    CHECK_THROWS_WITH_AS(
        parse_config(R"({"impl": "CR", "n": 2, "N": 4, "engine": "mc", "M": 150,
                         "prep": {"preset": "h4", "K": 1}})"),
        doctest::Contains("M"), std::invalid_argument);

    CHECK_THROWS(parse_config(
        R"({"impl": "CR", "n": [], "N": 4, "prep": {"preset": "h4", "K": 1}})"));
}

TEST_CASE("unknown presets are rejected") {
    CHECK_THROWS(parse_config(
        R"({"impl": "CR", "n": 2, "N": 7, "prep": {"preset": "h7", "K": 1}})"));
}

TEST_CASE("topology parsing") {
    Topology t = parse_topology(
        "# star for CR\n"
        "node control ancilla network=2\n"
        "node leaf1\n"
        "node leaf2 data=3\n"
        "link control leaf1\n"
        "link control leaf2\n");
    CHECK(t.nodes.size() == 3);
    CHECK(t.links.size() == 2);
    CHECK(t.nodes[0].hasAncilla);
    CHECK(t.nodes[0].networkQubits == 2);
    CHECK(t.nodes[2].dataQubits == 3);
    CHECK(t.linked("control", "leaf2"));
}

TEST_CASE("topology parse errors carry the line number") {
    try {
        parse_topology("node a\nnode b\nfrobnicate a b\n");
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    CHECK_THROWS(parse_topology(""));
    CHECK_THROWS(parse_topology("link a b\n"));  // endpoints never declared
}

TEST_CASE("CSV emission is deterministic without the timestamp header") {
    std::vector<ResourceReport> rows = {
        count_resources(Impl::BW, 4, 6, ResourceMode::Table),
        count_resources(Impl::CR, 1, 2, ResourceMode::Table),
    };
    std::string a = resources_to_csv(rows, false);
    std::string b = resources_to_csv(rows, false);
    CHECK(a == b);
    CHECK(a.find("generated") == std::string::npos);
    CHECK(a.find("25") != std::string::npos);  // BW n=4 N=6 qubit count
    std::string stamped = resources_to_csv(rows, true);
    CHECK(stamped.find("# generated") != std::string::npos);

    EstimateReport rep;
    rep.impl = Impl::CR;
    rep.n = 2;
    rep.N = 2;
    rep.mode = "exact";
    std::string csv = reports_to_csv({rep}, false);
    CHECK(csv.find("impl") != std::string::npos);  // header row
    CHECK(csv.find("CR") != std::string::npos);
}
