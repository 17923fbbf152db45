#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eacomm/serialize.hpp"

namespace {

struct CommandResult {
    int status = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + EACOMM_BIN + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    CommandResult result;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, got);
    const int raw = pclose(pipe);
    result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return result;
}

eacomm::Json parse(const CommandResult& result) { return eacomm::Json::parse(result.output); }

std::string data_path(const std::string& name) {
    return std::string(EACOMM_DATA_DIR) + "/" + name;
}

}  // namespace

TEST(Cli, EvalReportsQuantumScore) {
    const CommandResult r = run_cli("eval S");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_EQ(j.at("schema").get<int>(), 1);
    EXPECT_EQ(j.at("task").get<std::string>(), "S");
    EXPECT_NEAR(j.at("score").get<double>(), 3.0 + 3.0 * std::sqrt(3.0) / 2.0, 1e-9);
}

TEST(Cli, EvalAppliesVisibility) {
    const CommandResult r = run_cli("eval R --visibility 0.5");
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(parse(r).at("score").get<double>(), 0.5, 1e-9);
}

TEST(Cli, EvalRejectsUnknownTask) {
    EXPECT_EQ(run_cli("eval Q").status, 1);
}

TEST(Cli, BoundSmallAlphabet) {
    const CommandResult r = run_cli("bound T --d 2");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_NEAR(j.at("value").get<double>(), 0.75, 1e-12);
    EXPECT_EQ(j.at("d").get<int>(), 2);
    EXPECT_EQ(j.at("enumeratedSide").get<std::string>(), "decoders");
    const auto& witness = j.at("witness");
    ASSERT_EQ(witness.at("encoder").size(), 8u);
    for (const auto& m : witness.at("encoder")) {
        EXPECT_GE(m.get<int>(), 1);
        EXPECT_LE(m.get<int>(), 2);
    }
    ASSERT_EQ(witness.at("decoders").size(), 3u);
    for (const auto& row : witness.at("decoders")) ASSERT_EQ(row.size(), 2u);
}

TEST(Cli, BoundOverBudgetExitsTwo) {
    EXPECT_EQ(run_cli("bound R --d 16").status, 2);
}

TEST(Cli, SeesawSmallRunIsSoundAndDeterministic) {
    const std::string args = "seesaw R --restarts 2 --max-iters 40 --seed 3";
    const CommandResult a = run_cli(args);
    ASSERT_EQ(a.status, 0) << a.output;
    const eacomm::Json ja = parse(a);
    EXPECT_LE(ja.at("value").get<double>(), 0.75 + 1e-7);
    EXPECT_EQ(ja.at("perRestartValues").size(), 2u);
    EXPECT_TRUE(ja.contains("protocol"));
    const CommandResult b = run_cli(args);
    ASSERT_EQ(b.status, 0);
    EXPECT_EQ(ja.at("value").get<double>(), parse(b).at("value").get<double>());
}

TEST(Cli, SeesawRejectsUnknownRestriction) {
    EXPECT_EQ(run_cli("seesaw S --restrict foo").status, 1);
}

TEST(Cli, SweepUsesTwoBitBoundByDefault) {
    const CommandResult r = run_cli("sweep R --theta-grid 0.3:1.5:2 --restarts 2 --seed 2");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_EQ(j.at("thetas").size(), 2u);
    EXPECT_EQ(j.at("values").size(), 2u);
    EXPECT_NEAR(j.at("threshold").get<double>(), 5.0 / 8.0, 1e-12);
}

TEST(Cli, CertifyMeasuredTable) {
    const CommandResult r = run_cli("stats certify --table \"" + data_path("table3.csv") +
                                    "\" --task S");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_NEAR(j.at("score").get<double>(), 5.3781, 1e-9);
    EXPECT_NEAR(j.at("bound").get<double>(), 5.0, 1e-12);
    EXPECT_NEAR(j.at("sigmaViolation").get<double>(), 42.0, 0.1);
    EXPECT_LT(j.at("pValueUpperBound").get<double>(), 1e-100);
    EXPECT_LT(j.at("log10PValueUpperBound").get<double>(), -1e4);
    EXPECT_NEAR(j.at("N").get<double>(), 5.4e8, 1.0);
}

TEST(Cli, OpticsVerifyAllPass) {
    const CommandResult r = run_cli("optics verify");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_TRUE(j.at("allPass").get<bool>());
    EXPECT_EQ(j.at("checks").size(), 22u);
}

TEST(Cli, OpticsCompileSampleCircuit) {
    const CommandResult r =
        run_cli("optics compile --circuit \"" + data_path("sample_circuit.csv") + "\"");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_EQ(j.at("elements").get<int>(), 2);
    const auto u = j.at("unitary").get<std::vector<double>>();
    ASSERT_EQ(u.size(), 8u);
    const std::vector<double> identity = {1, 0, 0, 0, 0, 0, 1, 0};
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(u[i], identity[i], 1e-9);
}

TEST(Cli, OpticsMonteCarloZeroSigma) {
    const CommandResult r = run_cli("optics mc --task T --sigma 0 --samples 8");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_LE(j.at("std").get<double>(), 1e-12);
    EXPECT_NEAR(j.at("mean").get<double>(), j.at("ideal").get<double>(), 1e-3);
}

TEST(Cli, ReproduceCheckPasses) {
    const CommandResult r =
        run_cli("reproduce --check --data-dir \"" + std::string(EACOMM_DATA_DIR) + "\"");
    ASSERT_EQ(r.status, 0) << r.output;
    const eacomm::Json j = parse(r);
    EXPECT_TRUE(j.at("allPass").get<bool>());
    EXPECT_NEAR(j.at("tasks").at("S").at("experimentalValue").get<double>(), 5.3781, 1e-3);
}

TEST(Cli, ReproduceCheckCatchesTamperedData) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eacomm_cli_tamper";
    fs::create_directories(dir);
    std::ifstream in(data_path("table3.csv"));
    ASSERT_TRUE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    const auto pos = text.find("\n1,1,1,");
    ASSERT_NE(pos, std::string::npos);
    const auto eol = text.find('\n', pos + 1);
    text.replace(pos, eol - pos, "\n1,1,1,0.6000,0.0047");
    std::ofstream(dir / "table3.csv") << text;
    fs::copy_file(data_path("table6.csv"), dir / "table6.csv",
                  fs::copy_options::overwrite_existing);
    const CommandResult r =
        run_cli("reproduce --check --data-dir \"" + dir.string() + "\"");
    EXPECT_EQ(r.status, 3);
    fs::remove_all(dir);
}
