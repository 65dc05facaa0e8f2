#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    std::string cmd = std::string(SELMER_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "selmer_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, FamilyInfoCyclicFive) {
    CliRun r = run("family-info --family z5");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("u+ = 1, u- = 2, v+ = 1/2, v- = 2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("mu = -3/2, sigma^2 = 5/2, rho(1) = 2/5"), std::string::npos) << r.out;
}

TEST(Cli, FamilyInfoSevenIsogeny) {
    CliRun r = run("family-info --family iso7");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("mu = 0, sigma^2 = 1, rho(1) = 18/7"), std::string::npos) << r.out;
}

TEST(Cli, UnknownFamilyIsUsageError) {
    EXPECT_EQ(run("family-info --family nope").code, 2);
    EXPECT_EQ(run("family-info").code, 2);
    EXPECT_EQ(run("experiment --family z3 --kind bogus").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, VerifyTablesReportsRows) {
    CliRun r = run("verify-tables");
    // The 13-isogeny row carries a printed mean of 1/2 against a computed -1/2.
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("PASS z5"), std::string::npos);
    EXPECT_NE(r.out.find("FAIL iso13 (isogeny); mu expected 1/2, computed -1/2"), std::string::npos) << r.out;
}

TEST(Cli, HalfUBranchSurfacesRowOne) {
    CliRun r = run("verify-tables --v-branch half-u");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL z2xz2 (two-choice); v_plus2 expected 1, computed 1/2"), std::string::npos) << r.out;
}

TEST(Cli, CorruptedRegistryFailsValidation) {
    auto path = scratch("bad_registry.json");
    {
        std::ifstream in(SELMER_REGISTRY);
        auto reg = nlohmann::ordered_json::parse(in);
        auto& list = reg.is_array() ? reg : reg["families"];
        for (auto& e : list)
            if (e["name"] == "z5") e["f"] = nlohmann::ordered_json::array({"1", "0", "0", "0", "0", "0", "0", "0", "1"});
        std::ofstream(path) << reg.dump();
    }
    CliRun r = run("verify-tables --registry " + path.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL z5"), std::string::npos) << r.out;
    EXPECT_EQ(run("verify-tables --registry /nonexistent/registry.json").code, 3);
}

TEST(Cli, DensityExperiment) {
    auto base = scratch("z3-density");
    CliRun r = run("experiment --family z3 --kind density --q 5 --out " + base.string());
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::ordered_json::parse(slurp(base.string() + ".json"));
    ASSERT_EQ(j["classes"].size(), 6u);
    for (const auto& c : j["classes"]) EXPECT_NEAR(c["ratio"].get<double>(), 1.0 / 6.0, 0.02);
}

TEST(Cli, AverageIsExactAndDeterministic) {
    auto a = scratch("z4-avg-a"), b = scratch("z4-avg-b");
    ASSERT_EQ(run("experiment --family z4 --kind average --N 1e8 --k 1,2 --out " + a.string()).code, 0);
    ASSERT_EQ(run("experiment --family z4 --kind average --N 1e8 --k 1,2 --threads 3 --out " + b.string()).code, 0);
    auto ja = nlohmann::ordered_json::parse(slurp(a.string() + ".json"));
    EXPECT_NE(ja["average_power"][0]["average"].get<std::string>().find('/'), std::string::npos);
    EXPECT_EQ(slurp(a.string() + ".csv"), slurp(b.string() + ".csv"));
    EXPECT_EQ(slurp(a.string() + ".json"), slurp(b.string() + ".json"));
}

TEST(Cli, TailAndIoError) {
    auto base = scratch("z4-tail");
    ASSERT_EQ(run("experiment --family z4 --kind tail --N 1e10 --A 0,1 --out " + base.string()).code, 0);
    auto j = nlohmann::ordered_json::parse(slurp(base.string() + ".json"));
    EXPECT_EQ(j["tail"].size(), 2u);
    EXPECT_EQ(run("experiment --family z4 --kind tail --N 1e10 --out /nonexistent/dir/x").code, 3);
}

TEST(Cli, HeightParsing) {
    EXPECT_EQ(run("enumerate --family z3 --N 1e6 --out " + scratch("pts.csv").string()).code, 0);
    EXPECT_EQ(run("enumerate --family z3 --N 1.5 --out " + scratch("pts.csv").string()).code, 2);
    EXPECT_EQ(run("enumerate --family z3 --N 0 --out " + scratch("pts.csv").string()).code, 2);
}
