#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "flagattr/cli.hpp"

using flagattr::cli::RunConfig;
using flagattr::cli::RunResult;
using flagattr::cli::run;
using nlohmann::ordered_json;

namespace {

RunConfig base(RunConfig::Command cmd) {
    RunConfig cfg;
    cfg.command = cmd;
    return cfg;
}

}  // namespace

TEST_CASE("verify command passes on the degree-three full flag") {
    RunConfig cfg = base(RunConfig::Command::Verify);
    cfg.n = 3;
    cfg.dims = {1, 2};
    cfg.diag = {1.0, 2.0, 3.0};
    cfg.seed = 42;
    cfg.samples = 200;
    const RunResult r = run(cfg);
    CHECK(r.code == 0);
    CHECK(r.out.find("smale=bruhat: PASS (19 pairs)") != std::string::npos);
    CHECK(r.out.find("witness soundness: PASS") != std::string::npos);
    CHECK(r.out.find("cover completeness: PASS (8/8") != std::string::npos);
    CHECK(r.out.find("result: PASS") != std::string::npos);
}

TEST_CASE("identical configuration gives byte-identical output") {
    RunConfig cfg = base(RunConfig::Command::Flag);
    cfg.n = 3;
    cfg.diag = {1.0, 2.0, 4.0};
    cfg.samples = 50;
    cfg.budget = 60;
    const RunResult a = run(cfg);
    const RunResult b = run(cfg);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    cfg.format = RunConfig::Format::Json;
    CHECK(run(cfg).out == run(cfg).out);
}

TEST_CASE("bruhat json for the grassmannian of planes") {
    RunConfig cfg = base(RunConfig::Command::Bruhat);
    cfg.n = 4;
    cfg.dims = {2};
    cfg.format = RunConfig::Format::Json;
    const RunResult r = run(cfg);
    REQUIRE(r.code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["elements"].size() == 6);
    CHECK(j["leq"].size() == 6);
    CHECK(j["upper_sets"].size() == 8);
    CHECK(j["covers"].size() == 6);
    // round trip through the schema
    CHECK(ordered_json::parse(j.dump()) == j);
}

TEST_CASE("projective command output") {
    RunConfig cfg = base(RunConfig::Command::Projective);
    cfg.diag = {1.0, 2.0, 5.0};
    const RunResult r = run(cfg);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("fixed components (3") != std::string::npos);
    CHECK(r.out.find("nu=5") != std::string::npos);
    CHECK(r.out.find("height -2.5") != std::string::npos);
    CHECK(r.out.find("attractor lattice: 4 upper sets") != std::string::npos);

    cfg.format = RunConfig::Format::Json;
    const ordered_json j = ordered_json::parse(run(cfg).out);
    CHECK(j["components"].size() == 3);
    CHECK(j["attractor_pairs"].size() == 3);
    CHECK(j["lattice_size"] == 4);
}

TEST_CASE("network command") {
    RunConfig cfg = base(RunConfig::Command::Network);
    cfg.n = 3;
    const RunResult r = run(cfg);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("attractor lattice: 9 upper sets") != std::string::npos);
    CHECK(r.out.find("distributive: yes") != std::string::npos);

    cfg.format = RunConfig::Format::Json;
    const ordered_json j = ordered_json::parse(run(cfg).out);
    CHECK(j["nodes"].size() == 9);
    CHECK(j["meet"].size() == 9);
    CHECK(j["join"].size() == 9);
    CHECK(j["distributive"] == true);

    cfg.format = RunConfig::Format::Dot;
    CHECK(run(cfg).out.find("rankdir=BT") != std::string::npos);
}

TEST_CASE("validation failures exit with code one") {
    RunConfig bad = base(RunConfig::Command::Verify);
    bad.n = 0;
    CHECK(run(bad).code == 1);

    RunConfig tie = base(RunConfig::Command::Verify);
    tie.n = 3;
    tie.diag = {1.0, 1.0, 2.0};
    const RunResult r = run(tie);
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);

    // colliding pair sums on the grassmannian
    RunConfig collide = base(RunConfig::Command::Verify);
    collide.n = 4;
    collide.dims = {2};
    collide.diag = {1.0, 2.0, 3.0, 4.0};
    CHECK(run(collide).code == 1);

    RunConfig nodiag = base(RunConfig::Command::Projective);
    CHECK(run(nodiag).code == 1);
}

TEST_CASE("default diagonal is always weight separated") {
    RunConfig cfg = base(RunConfig::Command::Verify);
    cfg.n = 4;
    cfg.dims = {2};
    cfg.samples = 100;
    cfg.budget = 100;
    const RunResult r = run(cfg);  // defaults to 1,2,4,8
    CHECK(r.code == 0);
    CHECK(r.out.find("diag=1,2,4,8") != std::string::npos);
    CHECK(r.out.find("result: PASS") != std::string::npos);
}

TEST_CASE("verify json round-trips") {
    RunConfig cfg = base(RunConfig::Command::Verify);
    cfg.n = 2;
    cfg.dims = {1};
    cfg.diag = {1.0, 2.0};
    cfg.samples = 100;
    cfg.budget = 40;
    cfg.format = RunConfig::Format::Json;
    const RunResult r = run(cfg);
    REQUIRE(r.code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["result"] == "PASS");
    CHECK(j["witness_soundness"]["pass"] == true);
    CHECK(j["closure_equality"]["closure_pairs"] == 3);
    CHECK(ordered_json::parse(j.dump()) == j);
}
