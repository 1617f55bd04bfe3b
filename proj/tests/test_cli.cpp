#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "drham/commands.hpp"
#include "json.hpp"

using namespace drham;

namespace {

RunConfig config_for(const std::string& cohft, int genus, OutputFormat out = OutputFormat::text)
{
    RunConfig c;
    c.cohft = cohft;
    c.genus_cap = genus;
    c.output = out;
    return c;
}

std::string exported(const RunConfig& c, const std::string& object)
{
    std::string out;
    REQUIRE(cmd_export(c, object, out) == kExitOk);
    return out;
}

} // namespace

TEST_CASE("exported objects")
{
    RunConfig kdv = config_for("trivial_kdv", 1);
    CHECK(exported(kdv, "kdr") == "u*Dx + 1/2*u_1 + 1/8*eps^2*Dx^3\n");
    CHECK(exported(kdv, "kdr_alt") == "u*Dx + 1/2*u_1 + 1/8*eps^2*Dx^3\n");
    CHECK(exported(kdv, "k2_genus0") == "u*Dx + 1/2*u_1\n");
    CHECK(exported(kdv, "gbar") == "1/6*u^3 + 1/48*eps^2*u*u_2\n");
    CHECK(exported(kdv, "hamiltonian(1,-1)") == "u\n");
    CHECK(exported(kdv, "hamiltonian(1, 1)") == "1/6*u^3 + 1/24*eps^2*u*u_2\n");

    RunConfig tex = kdv;
    tex.output = OutputFormat::latex;
    CHECK(exported(tex, "kdr") == "\\[ u \\partial_x + \\frac{1}{2} u_{1} + \\frac{1}{8} \\varepsilon^{2} \\partial_x^{3} \\]\n");

    RunConfig json = kdv;
    json.output = OutputFormat::json;
    auto j = nlohmann::json::parse(exported(json, "kdr"));
    CHECK(j["format"] == "drham-export/1");
    CHECK(j["pretty"][0][0] == "u*Dx + 1/2*u_1 + 1/8*eps^2*Dx^3");

    auto d = nlohmann::json::parse(exported(kdv, "descriptor"));
    CHECK(d["format"] == "drham-cohft/1");

    std::string out;
    CHECK(cmd_export(kdv, "nonsense", out) == kExitError);
    CHECK(out.find("ParseError") != std::string::npos);
    CHECK(cmd_export(kdv, "hamiltonian(3,0)", out) == kExitError);
}

TEST_CASE("check exit status follows the verdicts")
{
    std::string out;
    CHECK(cmd_check(config_for("trivial_kdv", 1), out) == kExitOk);
    CHECK(out.find("FAIL") == std::string::npos);

    RunConfig two = config_for("two_field_genus0", 0);
    two.checks = {"recursion"};
    CHECK(cmd_check(two, out) == kExitOk);
    CHECK(cmd_check(config_for("two_field_genus0", 1), out) == kExitError);
    CHECK(out.find("TableGap") != std::string::npos);

    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "drham_cli_test";
    fs::create_directories(dir);
    auto j = nlohmann::json::parse(to_json(builtin_descriptor("trivial_kdv")));
    for (auto& e : j["tables"]["entries"])
        if (e["d"] == 2) e["value"] = "1/12";
    j["name"] = "perturbed";
    std::ofstream(dir / "perturbed.json") << j.dump(2);
    RunConfig bad = config_for((dir / "perturbed.json").string(), 1, OutputFormat::json);
    bad.checks = {"commuting", "dispersionless"};
    CHECK(cmd_check(bad, out) == kExitFailedChecks);
    auto report = nlohmann::json::parse(out);
    CHECK(report["ok"] == false);
    bool dispersionless_ok = false, some_failure = false;
    for (const auto& v : report["verdicts"]) {
        if (v["check"] == "dispersionless") dispersionless_ok = v["status"] == "ok";
        if (v["status"] == "fail") {
            some_failure = true;
            CHECK(v["epsilon_order"] == 2);
            CHECK_FALSE(v["witness"].get<std::string>().empty());
        }
    }
    CHECK(dispersionless_ok);
    CHECK(some_failure);

    std::ofstream(dir / "broken.json") << "{\"format\": \"drham-cohft/1\", \"n_fields\": 1, \"eta\": [[\"1\"]]";
    RunConfig broken = config_for((dir / "broken.json").string(), 1, OutputFormat::json);
    CHECK(cmd_check(broken, out) == kExitError);
    CHECK(nlohmann::json::parse(out)["error"]["kind"] == "ParseError");

    setenv("DRHAM_COHFT_PATH", dir.string().c_str(), 1);
    CHECK(cmd_describe(config_for("perturbed", 1), out) == kExitOk);
    CHECK(out.find("descriptor: perturbed") != std::string::npos);
    unsetenv("DRHAM_COHFT_PATH");
    fs::remove_all(dir);
}

TEST_CASE("reports are deterministic")
{
    RunConfig c = config_for("two_field_genus0", 0, OutputFormat::json);
    c.checks = {"all", "singular_subgroup"};
    c.seed = 77;
    std::string a, b;
    CHECK(cmd_check(c, a) == kExitOk);
    CHECK(cmd_check(c, b) == kExitOk);
    CHECK(a == b);
    c.seed = 78;
    CHECK(cmd_check(c, b) == kExitOk);
    CHECK(a != b);

    auto j = nlohmann::json::parse(a);
    std::string last;
    for (const auto& v : j["verdicts"]) {
        CHECK(v["check"].get<std::string>() >= last);
        last = v["check"].get<std::string>();
    }
}

TEST_CASE("describe")
{
    std::string out;
    REQUIRE(cmd_describe(config_for("trivial_kdv", 1), out) == kExitOk);
    CHECK(out.find("N = 1") != std::string::npos);
    CHECK(out.find("mu = (0)") != std::string::npos);
    CHECK(out.find("A^b_a = [0]") != std::string::npos);
    REQUIRE(cmd_describe(config_for("two_field_genus0", 0), out) == kExitOk);
    CHECK(out.find("mu = (-1/6, 1/6)") != std::string::npos);
    CHECK(out.find("A^b_a = [1, 0; 0, 1]") != std::string::npos);
    CHECK(cmd_describe(config_for("no_such_descriptor", 0), out) == kExitError);
}
