#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(RUM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.out.append(buffer.data(), n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string fixture(const std::string& name) {
    return std::string(RUM_FIXTURE_DIR) + "/" + name;
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("rumspec_cli_" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum of the euclidean C3h fixture") {
    auto res = run_cli("spectrum " + fixture("c3h_euclidean.json"));
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["mode"] == "exact");
    REQUIRE(doc["spectrum"].size() == 6);
    for (const auto& rec : doc["spectrum"]) CHECK(rec["kernel_dim"] == 1);
}

TEST_CASE("spectrum scan of the lq strip") {
    auto res = run_cli("spectrum " + fixture("frieze_l2.json") + " --samples 512");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["mode"] == "scan");
    CHECK(doc["spectrum"].size() == 3);

    // deterministic output: identical reruns
    auto res2 = run_cli("spectrum " + fixture("frieze_l2.json") + " --samples 512");
    CHECK(res.out == res2.out);

    // CSV trace
    auto trace_path = temp_file("trace.csv");
    auto res3 = run_cli("spectrum " + fixture("frieze_l2.json") + " --samples 64 --trace " +
                        trace_path.string());
    REQUIRE(res3.exit_code == 0);
    std::ifstream in(trace_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "angle_0,torsion_0,sigma_min");
}

TEST_CASE("spectrum of an edgeless file flags every character") {
    json doc = {
        {"group", {{"free_rank", 0}, {"torsion", {2, 3}}}},
        {"representation",
         {{"dimension", 1},
          {"generators",
           json::array({{{"linear", {{{1.0, 0.0}}}}}, {{"linear", {{{1.0, 0.0}}}}}})}}},
        {"vertices", {"v"}},
        {"edges", json::array()},
    };
    auto path = temp_file("edgeless.json");
    std::ofstream(path) << doc.dump();
    auto res = run_cli("spectrum " + path.string());
    REQUIRE(res.exit_code == 0);
    CHECK(json::parse(res.out)["spectrum"].size() == 6);
}

TEST_CASE("joint points of the fixtures") {
    auto res = run_cli("joint-points " + fixture("c3h_generic.json"));
    REQUIRE(res.exit_code == 0);
    CHECK(json::parse(res.out)["joint_points"].size() == 3);

    auto res2 = run_cli("joint-points " + fixture("frieze_l2.json"));
    REQUIRE(res2.exit_code == 0);
    CHECK(json::parse(res2.out)["joint_points"].size() == 2);
}

TEST_CASE("flex export and verify round-trip") {
    auto flex_path = temp_file("flex.json");
    auto res = run_cli("flex " + fixture("c3h_cylindrical.json") +
                       R"( --character '{"angles":[],"torsion_indices":[1,0]}' --out )" +
                       flex_path.string());
    REQUIRE(res.exit_code == 0);
    json doc;
    std::ifstream(flex_path) >> doc;
    REQUIRE(doc["flexes"].size() == 2);

    auto verify = run_cli("verify " + fixture("c3h_cylindrical.json") + " --flex " +
                          flex_path.string());
    REQUIRE(verify.exit_code == 0);
    json vdoc = json::parse(verify.out);
    CHECK(vdoc["pass"].get<bool>());
}

TEST_CASE("verify reports failures without erroring") {
    // export a flex, then corrupt one sample
    auto flex_path = temp_file("flex_bad.json");
    auto res = run_cli("flex " + fixture("frieze_l2.json") +
                       R"( --character '{"angles":[3.141592653589793],"torsion_indices":[0]}' --out )" +
                       flex_path.string());
    REQUIRE(res.exit_code == 0);
    json doc;
    {
        std::ifstream in(flex_path);
        in >> doc;
    }
    REQUIRE(doc["flexes"].size() == 1);
    doc["flexes"][0]["samples"][0]["value"][0][0] = 100.0;
    std::ofstream(flex_path) << doc.dump();
    auto verify = run_cli("verify " + fixture("frieze_l2.json") + " --flex " +
                          flex_path.string());
    REQUIRE(verify.exit_code == 0);  // a failed check is still exit 0
    CHECK_FALSE(json::parse(verify.out)["pass"].get<bool>());
}

TEST_CASE("cover exports the prism") {
    auto res = run_cli("cover " + fixture("c3h_euclidean.json") + " --window 0");
    REQUIRE(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["vertices"].size() == 6);
    CHECK(doc["bars"].size() == 12);
    for (const auto& v : doc["vertices"]) CHECK(v.contains("point"));
}

TEST_CASE("ap-rigidity certificates") {
    auto res = run_cli("ap-rigidity " + fixture("frieze_l2_braced.json") + " --samples 256");
    REQUIRE(res.exit_code == 0);
    CHECK(json::parse(res.out)["ap_rigid"].get<bool>());

    auto res2 = run_cli("ap-rigidity " + fixture("frieze_l2.json") + " --samples 256");
    REQUIRE(res2.exit_code == 0);
    json doc = json::parse(res2.out);
    CHECK_FALSE(doc["ap_rigid"].get<bool>());
    CHECK_FALSE(doc["witness_character"].is_null());
}

TEST_CASE("exit code 2 on invalid files") {
    auto path = temp_file("broken.json");
    std::ofstream(path) << "{ not json";
    CHECK(run_cli("spectrum " + path.string()).exit_code == 2);

    std::ofstream(path) << R"({"group": {"free_rank": -1, "torsion": []}})";
    CHECK(run_cli("spectrum " + path.string()).exit_code == 2);
}

TEST_CASE("exit code 3 on unsupported scan ranks") {
    json doc = {
        {"group", {{"free_rank", 3}, {"torsion", json::array()}}},
        {"representation",
         {{"dimension", 1},
          {"generators", json::array({{{"linear", {{{1.0, 0.0}}}}},
                                      {{"linear", {{{1.0, 0.0}}}}},
                                      {{"linear", {{{1.0, 0.0}}}}}})}}},
        {"vertices", {"v"}},
        {"edges", json::array({{{"source", "v"},
                                {"range", "v"},
                                {"gain", {{"free", {1, 0, 0}}, {"torsion", json::array()}}},
                                {"phi", {{{1.0, 0.0}}}}}})},
    };
    auto path = temp_file("rank3.json");
    std::ofstream(path) << doc.dump();
    CHECK(run_cli("spectrum " + path.string()).exit_code == 3);
}

TEST_CASE("exit code 4 on bad characters") {
    CHECK(run_cli("flex " + fixture("c3h_generic.json") + " --character not-json")
              .exit_code == 4);
    CHECK(run_cli("flex " + fixture("c3h_generic.json") +
                  R"( --character '{"angles":[1.0],"torsion_indices":[0,0]}')")
              .exit_code == 4);
}

}  // TEST_SUITE
