#include "support.hpp"

#include "mdpgeom/classic.hpp"
#include "mdpgeom/convergence.hpp"
#include "mdpgeom/experiment.hpp"
#include "mdpgeom/geometry.hpp"
#include "mdpgeom/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

using namespace mdpgeom;
using namespace mdpgeom::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "mdpgeom_cli_test";

int run(const std::string& args, const std::string& stdout_name = "stdout.txt") {
    const std::string cmd = std::string("\"") + MDPGEOM_CLI_PATH + "\" " + args + " > \"" +
                            (kDir / stdout_name).string() + "\" 2> \"" + (kDir / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string file(const std::string& name) { return (kDir / name).string(); }

std::string put(const std::string& name, const std::string& text) {
    write_text_file(kDir / name, text);
    return "\"" + file(name) + "\"";
}

MdpModel dense_model() {
    return MdpModel(2, {sap(0, 1.0, {0.5, 0.5}), sap(0, 0.0, {0.9, 0.1}), sap(1, 0.0, {0.3, 0.7})}, 0.9);
}

struct Fixture {
    Fixture() {
        fs::remove_all(kDir);
        fs::create_directories(kDir);
    }
    ~Fixture() { fs::remove_all(kDir); }
};

} // namespace

TEST_CASE_FIXTURE(Fixture, "validate") {
    CHECK(run("validate " + put("ok.json", emit_model(swap_model(0.5)))) == 0);
    CHECK(read_text_file(kDir / "stdout.txt").find("valid") != std::string::npos);

    const auto bad = put("bad.json", R"({"schema_version":1,"n":2,"gamma":1,"saps":[{"state":0,"reward":0,"probs":[0,1]},)"
                                     R"({"state":1,"reward":0,"probs":[0.6,0.5]}]})");
    CHECK(run("validate " + bad) == 2);
    CHECK(read_text_file(kDir / "stderr.txt").find("sap 1") != std::string::npos);

    CHECK(run("validate " + put("syntax.json", "{ nope")) == 2);
    CHECK(run("validate " + put("v2.json", R"({"schema_version":2,"n":1,"gamma":1,"saps":[]})")) == 2);
    CHECK(run("validate \"" + file("missing.json") + "\"") == 2);
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE_FIXTURE(Fixture, "converge") {
    const auto m = dense_model();
    REQUIRE(verify_theorem(m, basis_v0(2)).diagnostics.all_pass());
    const auto path = put("dense.json", emit_model(m));

    REQUIRE(run("converge " + path) == 0);
    const auto doc = nlohmann::json::parse(read_text_file(kDir / "stdout.txt"));
    CHECK(doc["report"]["bound_satisfied"].get<bool>());
    CHECK(doc["provenance"]["version"] == kVersion);

    REQUIRE(run("converge " + path + " --v0 random --seed 5 --steps 12 --strict -o \"" + file("out") + "\"") == 0);
    const auto report = nlohmann::json::parse(read_text_file(kDir / "out" / "report.json"));
    CHECK(report["report"]["bound_satisfied"].get<bool>());
    const auto trace = read_text_file(kDir / "out" / "trace.csv");
    const auto expected = trace_csv(verify_theorem(m, random_v0(2, 5), {12}));
    CHECK(trace == expected);

    const auto periodic = put("periodic.json", emit_model(swap_with_loop(1.0)));
    CHECK(run("converge " + periodic) == 0);
    CHECK(run("converge " + periodic + " --strict") == 3);
    CHECK(read_text_file(kDir / "stderr.txt").find("periodic") != std::string::npos);
    CHECK(run("converge " + path + " --v0 sideways") == 2);
}

TEST_CASE_FIXTURE(Fixture, "generate, solve, analyze, normalize") {
    const auto out = file("gen.json");
    REQUIRE(run("generate --n 4 --saps 2 --gamma 0.85 --sparsity 0.25 --seed 11 --reward-lo -1 --reward-hi 1 -o \"" +
                out + "\"") == 0);
    GeneratorSpec spec{4, 2, 0.85, -1.0, 1.0, 0.25, 11};
    CHECK(read_text_file(out) == emit_model(generate_model(spec).model));
    CHECK(run("generate --n 0 --saps 2 --gamma 0.85 --sparsity 0.25 --seed 11 -o \"" + out + "\"") == 2);

    REQUIRE(run("solve " + put("swap.json", emit_model(swap_model(1.0))) + " --anchor 1") == 0);
    auto doc = nlohmann::json::parse(read_text_file(kDir / "stdout.txt"));
    CHECK(doc["criterion"] == "average");
    CHECK(doc["gain"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["bias"][1].get<double>() == doctest::Approx(0.0));
    CHECK(doc["bias"][0].get<double>() == doctest::Approx(1.0));
    CHECK(run("solve \"" + file("swap.json") + "\" --criterion discounted") == 2);
    CHECK(run("solve \"" + file("swap.json") + "\" --anchor 7") == 2);

    REQUIRE(run("solve " + put("swapd.json", emit_model(swap_model(0.5)))) == 0);
    doc = nlohmann::json::parse(read_text_file(kDir / "stdout.txt"));
    CHECK(doc["values"][0].get<double>() == doctest::Approx(8.0 / 3.0));
    CHECK(doc["values"][1].get<double>() == doctest::Approx(4.0 / 3.0));

    REQUIRE(run("analyze \"" + file("swap.json") + "\" --policy 0,1") == 0);
    doc = nlohmann::json::parse(read_text_file(kDir / "stdout.txt"));
    CHECK(doc["unichain"].get<bool>());
    CHECK(doc["unichain_by_invertibility"].get<bool>());
    CHECK(doc["primitivity"].is_null());
    CHECK(doc["stationary_distribution"][0].get<double>() == doctest::Approx(0.5));
    CHECK(run("analyze \"" + file("swap.json") + "\" --policy 1,0") == 2);
    CHECK(run("analyze \"" + file("swap.json") + "\" --policy x") == 2);

    REQUIRE(run("normalize " + put("dense.json", emit_model(dense_model())) + " -o \"" + file("norm.json") + "\"") == 0);
    const auto normalized = parse_model(read_text_file(kDir / "norm.json"));
    const auto expected = normalize_mdp(dense_model(), optimal_policy(dense_model()).policy);
    CHECK(normalized == expected);
}

TEST_CASE_FIXTURE(Fixture, "sweep is byte-identical across runs") {
    const auto spec = put("spec.json", R"({"n": 4, "saps_per_state": 2, "gamma": 0.9, "reward_range": [-1, 1], "sparsity": 0.2})");
    REQUIRE(run("sweep --spec " + spec + " --trials 100 --seed 7 -o \"" + file("a") + "\"") == 0);
    REQUIRE(setenv("MDP_GEOM_THREADS", "1", 1) == 0);
    REQUIRE(run("sweep --spec " + spec + " --trials 100 --seed 7 -o \"" + file("b") + "\"") == 0);
    unsetenv("MDP_GEOM_THREADS");
    for (const char* f : {"summary.csv", "traces.csv", "report.json"}) {
        const auto a = read_text_file(kDir / "a" / f);
        CHECK(!a.empty());
        CHECK(a == read_text_file(kDir / "b" / f));
    }
    const auto doc = nlohmann::json::parse(read_text_file(kDir / "a" / "report.json"));
    CHECK(doc["provenance"]["seed"].get<std::uint64_t>() == 7);
    CHECK(run("sweep --spec " + put("badspec.json", "{}") + " --trials 2 --seed 1 -o \"" + file("c") + "\"") == 2);
}
