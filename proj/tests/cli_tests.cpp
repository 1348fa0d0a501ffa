#include "doctest.h"

#include <array>
#include <cstdio>
#include <sys/wait.h>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(RECTBOUND_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

} // namespace

TEST_CASE("bound rec on EQ with two bits reports 4 bits") {
    auto r = run_cli("bound rec --family EQ --n 2 --z 1 --eps 0");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    CHECK(doc.at("schema_version") == "1");
    CHECK(doc.at("result").at("value").get<double>() == doctest::Approx(4.0));
    // the effective configuration is echoed for provenance
    CHECK(doc.at("config").at("family") == "EQ");
    CHECK(doc.at("config").at("eps").get<double>() == doctest::Approx(0.0));
}

TEST_CASE("bound srec-lp reports primal, dual gap, and witnesses") {
    auto r = run_cli("bound srec-lp --family AND --n 1 --z 1 --eps 0.1");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    auto res = doc.at("result");
    CHECK(res.contains("primal_value"));
    CHECK(res.at("gap").get<double>() <= 1e-6);
}

TEST_CASE("bound without --eps exits with a validation error") {
    auto r = run_cli("bound rec --family EQ --n 2 --z 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("unknown suite names exit with a validation error") {
    auto r = run_cli("verify --suite nosuch");
    CHECK(r.exit_code == 2);
}

TEST_CASE("the good-set suite prints four passing line items") {
    auto r = run_cli("verify --suite probofg --family AND --n 1 --eps 0.3");
    REQUIRE(r.exit_code == 0);
    int lines = 0;
    size_t pos = 0;
    while ((pos = r.output.find("PASS", pos)) != std::string::npos) {
        ++lines;
        pos += 4;
    }
    CHECK(lines == 4);
    CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("sampler run with zero trials exits with a validation error") {
    auto r = run_cli(
        "sampler run --family AND --n 1 --eps 0.3 --reduced-delta 3 --trials 0");
    CHECK(r.exit_code == 2);
}

TEST_CASE("sampler runs are byte-identical for a fixed seed") {
    std::string args =
        "sampler run --family AND --n 1 --eps 0.05 --reduced-delta 3 "
        "--trials 20000 --seed ";
    auto a = run_cli(args + "1");
    auto b = run_cli(args + "1");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto c = run_cli(args + "2");
    CHECK(a.output != c.output);
}

TEST_CASE("decay curves are byte-identical CSV for a fixed seed") {
    std::string args =
        "decay --family AND --n 1 --t 6 --trials 5000 --seed 1 --format csv";
    auto a = run_cli(args);
    auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.rfind("t,successes,trials,estimate,std_error\n", 0) == 0);
    // one header plus one row per t
    int rows = 0;
    for (char ch : a.output)
        if (ch == '\n') ++rows;
    CHECK(rows == 7);
}

TEST_CASE("family list names every built-in family") {
    auto r = run_cli("family list");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    auto names = doc.at("result").at("families");
    for (const char* want : {"EQ", "AND", "XOR", "IP", "DISJ", "GHD", "TRIBES"}) {
        bool found = false;
        for (const auto& nm : names) found = found || nm == want;
        CHECK(found);
    }
}

TEST_CASE("family dump emits the relation and distribution tables") {
    auto r = run_cli("family dump --family AND --n 1");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    CHECK(doc.at("result").at("relation").at("x_size") == 2);
    CHECK(doc.at("result").at("distribution").at("mass").size() == 2);
}

TEST_CASE("flags override config-file values which override defaults") {
    std::string cfg_path = "/tmp/rectbound_test_config.json";
    {
        std::ofstream f(cfg_path);
        f << "{\"eps\": 0.2, \"family\": \"EQ\", \"n\": 2}\n";
    }
    // config file alone
    auto a = run_cli("bound rec --z 1 --config " + cfg_path);
    REQUIRE(a.exit_code == 0);
    auto da = nlohmann::json::parse(a.output);
    CHECK(da.at("config").at("eps").get<double>() == doctest::Approx(0.2));
    CHECK(da.at("config").at("family") == "EQ");
    // a flag beats the file
    auto b = run_cli("bound rec --z 1 --eps 0 --config " + cfg_path);
    REQUIRE(b.exit_code == 0);
    auto db = nlohmann::json::parse(b.output);
    CHECK(db.at("config").at("eps").get<double>() == doctest::Approx(0.0));
    std::remove(cfg_path.c_str());
}

TEST_CASE("verify all passes every suite") {
    auto r = run_cli("verify --suite all --seed 7 --trials 200");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("FAIL") == std::string::npos);
}
