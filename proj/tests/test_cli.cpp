#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "torsionlab/cli.hpp"

using nlohmann::json;

namespace {

struct CliOut {
    int rc;
    json body;
    std::string err;
};

CliOut run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int rc = torsionlab::cli::run(args, out, err);
    CliOut r{rc, json(), err.str()};
    if (!out.str().empty() && out.str()[0] == '{') r.body = json::parse(out.str());
    return r;
}

} // namespace

TEST_CASE("pell solve emits the documented solution") {
    auto r = run_cli({"pell", "solve", "--D", "x^2+1"});
    REQUIRE(r.rc == 0);
    CHECK(r.body["result"]["X"] == "2*x^2+1");
    CHECK(r.body["result"]["Y"] == "2*x");
    CHECK(r.body["provenance"]["config"]["precision_digits"] == 50);
}

TEST_CASE("torsion params lists lambda = 0 at order 3") {
    auto r = run_cli({"torsion", "params", "--order", "3"});
    REQUIRE(r.rc == 0);
    REQUIRE(r.body["result"]["parameters"].size() == 1);
    CHECK(r.body["result"]["parameters"][0]["lambda"] == "0");
}

TEST_CASE("domain errors exit 1 with a structured code") {
    auto r = run_cli({"pell", "solve", "--D", "x^3+1"});
    CHECK(r.rc == 1);
    CHECK(r.body["error"]["code"] == "OddDegree");
}

TEST_CASE("usage errors exit 2") {
    auto r = run_cli({"pell", "solve"});
    CHECK(r.rc == 2);
    auto r2 = run_cli({"nonsense"});
    CHECK(r2.rc == 2);
}

TEST_CASE("output keys are sorted for diffability") {
    auto r = run_cli({"quartic", "jacobian", "--Q", "x^4+x+1/4"});
    REQUIRE(r.rc == 0);
    CHECK(r.body["result"]["a"] == "-1");
    CHECK(r.body["result"]["b"] == "1");
    CHECK(r.body["result"]["inf_class"]["x"] == "0");
    CHECK(r.body["result"]["inf_class"]["y"] == "-1");
    // serialize and check key order on one level
    std::string s = r.body.dump();
    CHECK(s.find("\"provenance\"") < s.find("\"result\""));
}

TEST_CASE("config file is applied and flags override it") {
    std::string path = "/tmp/torsionlab-test.cfg";
    {
        std::ofstream f(path);
        f << "# test config\nprecision_digits = 33\ncf_max_steps = 77\n";
    }
    auto r = run_cli({"--config", path, "pell", "solve", "--D", "x^2+1"});
    REQUIRE(r.rc == 0);
    CHECK(r.body["provenance"]["config"]["precision_digits"] == 33);
    CHECK(r.body["provenance"]["config"]["cf_max_steps"] == 77);
    auto r2 = run_cli({"--config", path, "--prec", "44", "pell", "solve", "--D", "x^2+1"});
    REQUIRE(r2.rc == 0);
    CHECK(r2.body["provenance"]["config"]["precision_digits"] == 44);
    CHECK(r2.body["provenance"]["config"]["cf_max_steps"] == 77);
}

TEST_CASE("lattice periods and gext betti round trip through text") {
    auto r = run_cli({"--prec", "30", "lattice", "periods", "--g2", "4", "--g3", "0"});
    REQUIRE(r.rc == 0);
    std::string w1 = r.body["result"]["omega1"];
    CHECK(w1.substr(0, 12) == "2.6220575542");

    auto r2 = run_cli({"--prec", "30", "gext", "betti", "--v", "0.3+0.1*i", "--t",
                       "0.25+0*i", "--z", "0.5+0.25*i"});
    CHECK(r2.rc == 0);

    auto r3 = run_cli({"--prec", "40", "ribet", "check", "--n", "3", "--k1", "1", "--k2", "0"});
    REQUIRE(r3.rc == 0);
    CHECK(r3.body["result"]["divides_n2"].get<bool>());
    // the GBetti record carries the joint recognition at denominator m
    auto rec = r3.body["result"]["betti"]["recognized"];
    REQUIRE(!rec.is_null());
    CHECK(rec["m"].get<long>() % 3 == 0);
    CHECK(9 % rec["m"].get<long>() == 0);
}

TEST_CASE("scan --csv writes a diffable table") {
    std::string path = "/tmp/torsionlab-test.csv";
    auto r = run_cli({"--cf-max-steps", "48", "scan", "pell-torsion", "--n-max", "3",
                      "--cf-budget", "48", "--csv", path});
    REQUIRE(r.rc == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header.find("group") != std::string::npos);
    CHECK(header.find("periodic") != std::string::npos);
}

TEST_CASE("replay subcommand re-checks a stored row") {
    auto scan = run_cli({"--cf-max-steps", "48", "scan", "pell-torsion", "--n-max", "3",
                         "--cf-budget", "48"});
    REQUIRE(scan.rc == 0);
    json row;
    for (const auto &r : scan.body["result"]["rows"])
        if (!r.contains("error") && r["group"] == "torsion") row = r;
    REQUIRE(!row.is_null());
    std::string path = "/tmp/torsionlab-row.json";
    {
        std::ofstream f(path);
        f << row.dump();
    }
    auto rep = run_cli({"--cf-max-steps", "48", "replay", path});
    REQUIRE(rep.rc == 0);
    CHECK(rep.body["result"]["reproduced"].get<bool>());
}
