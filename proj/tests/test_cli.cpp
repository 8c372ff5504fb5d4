#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hgsts/io.hpp"
#include "hgsts/sparse_check.hpp"
#include "hgsts/stats.hpp"
#include "json.hpp"

using namespace hgsts;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result sh(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" + std::string(HGSTS_BIN) + "\" " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p) != nullptr) r.out += buf;
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("hgsts_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string d() const { return "\"" + dir_.string() + "\""; }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, CatalogTableAndFile) {
    const auto r = sh("catalog --jmax 8 --out-dir " + d());
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("4  1  3  diamond"), std::string::npos);
    EXPECT_NE(r.out.find("5  0  0  -"), std::string::npos);
    EXPECT_NE(r.out.find("6  1  6  Pasch"), std::string::npos);
    EXPECT_NE(r.out.find("8  2  2520"), std::string::npos);
    const auto text = slurp(dir_ / "catalog_j8.txt");
    EXPECT_EQ(read_catalog(text).count(8), 2);
}

TEST_F(Cli, ConfigErrorsExitFour) {
    EXPECT_EQ(sh("catalog --jmax 11 --out-dir " + d()).code, 4);
    EXPECT_EQ(sh("catalog --bogus").code, 4);
    EXPECT_EQ(sh("run --n 5 --no-track --out-dir " + d()).code, 4);
    EXPECT_EQ(sh("run --n 30 --gamma 1.5 --no-track --out-dir " + d()).code, 4);
    EXPECT_EQ(sh("run --n 30 --out-dir " + d()).code, 4);  // tracking band unusable this small
    EXPECT_EQ(sh("design --theta 0.7 --out-dir " + d()).code, 4);
    EXPECT_EQ(sh("design --mode sideways --out-dir " + d()).code, 4);
    EXPECT_EQ(sh("").code, 4);
}

TEST_F(Cli, RunWritesSparseSystemAndJson) {
    const auto r = sh("run --n 30 --k 4 --seed 3 --gamma 0.5 --no-track --out-dir " + d());
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = nlohmann::json::parse(slurp(dir_ / "run_n30_k4_s3.json"));
    EXPECT_EQ(j["schema"], "run-json v1");
    EXPECT_EQ(j["target_steps"], 75);
    EXPECT_TRUE(j["reached_target"].get<bool>());
    const auto sys = read_sts(slurp(dir_ / "run_n30_k4_s3.sts"));
    EXPECT_EQ(static_cast<std::int64_t>(sys.size()), j["final_tau"].get<std::int64_t>());
    EXPECT_TRUE(is_linear(sys));
    EXPECT_TRUE(is_k_sparse(sys, 4).ok);
}

TEST_F(Cli, UnreachableTargetExitsTwo) {
    // C(30,2)/3 = 145 < 0.99 * 150.
    EXPECT_EQ(sh("run --n 30 --k 4 --gamma 0.01 --no-track --out-dir " + d()).code, 2);
}

TEST_F(Cli, OutDirFromEnvironment) {
    ASSERT_EQ(sh("run --n 20 --seed 2 --gamma 0.5 --no-track", "STS_OUT_DIR=" + d()).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "run_n20_k4_s2.sts"));
}

TEST_F(Cli, TrackedRunIsDeterministic) {
    ASSERT_EQ(sh("run --n 100 --k 4 --seed 5 --edges 50 --triples 10 --out-dir " + d()).code, 0);
    const auto first = slurp(dir_ / "run_n100_k4_s5.json");
    const auto csv = slurp(dir_ / "run_n100_k4_s5.csv");
    ASSERT_EQ(sh("run --n 100 --k 4 --seed 5 --edges 50 --triples 10 --out-dir " + d()).code, 0);
    EXPECT_EQ(slurp(dir_ / "run_n100_k4_s5.json"), first);
    EXPECT_EQ(slurp(dir_ / "run_n100_k4_s5.csv"), csv);
    const auto j = nlohmann::json::parse(first);
    EXPECT_EQ(j["csv_schema"], "series-csv v1");
    EXPECT_EQ(j["checkpoint_summary"].size(), 3u);
    EXPECT_EQ(parse_series(csv).snapshots.size(), 3u);
}

TEST_F(Cli, VerifyReportsWitness) {
    std::ofstream(dir_ / "pasch.sts") << write_sts(from_digits(7, "012,034,135,245"));
    const auto bad = sh("verify " + (dir_ / "pasch.sts").string() + " --k 4");
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.out.find("witness: 4 blocks on 6 points"), std::string::npos);
    const auto good = sh("verify " + (dir_ / "pasch.sts").string() + " --k 3");
    EXPECT_EQ(good.code, 0);
    EXPECT_NE(good.out.find("OK"), std::string::npos);
    std::ofstream(dir_ / "v2.sts") << "sts v2 n=4\n# schema sts v1\n";
    EXPECT_EQ(sh("verify " + (dir_ / "v2.sts").string()).code, 4);
    EXPECT_EQ(sh("verify " + (dir_ / "missing.sts").string()).code, 4);
}

TEST_F(Cli, VerifyQsys) {
    std::ofstream(dir_ / "plant.qsys") << "qsys n=10 q=4 r=2\n0,1,2,3\n0,1,4,5\n2,3,4,5\n# schema qsys v1\n";
    const auto r = sh("verify " + (dir_ / "plant.qsys").string() + " --k 3");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("partial_steiner=no"), std::string::npos);
    EXPECT_NE(r.out.find("weakly_3_sparse=no"), std::string::npos);
}

TEST_F(Cli, TrialsAggregate) {
    const auto r = sh("trials --n 12 --k 4 --trials 4 --gamma 0.5 --out-dir " + d());
    ASSERT_TRUE(r.code == 0 || r.code == 2) << r.code;
    const auto j = nlohmann::json::parse(slurp(dir_ / "trials_n12_k4_m1.json"));
    EXPECT_EQ(j["schema"], "trials-json v1");
    EXPECT_EQ(j["runs"].size(), 4u);
    EXPECT_EQ(j["sparseness_violations"], 0);
    EXPECT_EQ(r.code == 0, j["successes"] == 4);
}

TEST_F(Cli, TrajectoryCsv) {
    ASSERT_EQ(sh("trajectory --n 1000 --k 5 --grid 10 --out " + (dir_ / "t.csv").string()).code, 0);
    const auto text = slurp(dir_ / "t.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
    EXPECT_NE(text.find("# schema trajectory-csv v1"), std::string::npos);
}

TEST_F(Cli, DesignOutputIsPartialAndSparse) {
    const auto r = sh("design --n 24 --seed 2 --out-dir " + d());
    ASSERT_TRUE(r.code == 0 || r.code == 2) << r.code;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], "design-json v1");
    EXPECT_TRUE(j["partial_steiner"].get<bool>());
    EXPECT_TRUE(j["weakly_sparse"].get<bool>());
    const auto s = read_qsys(slurp(dir_ / j["system_file"].get<std::string>()));
    EXPECT_EQ(s.blocks.size(), j["blocks"].get<std::size_t>());
}

TEST_F(Cli, CountConstant) {
    const auto r = sh("count --n 1000 --k 4");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("constant=2.25\n"), std::string::npos);
}
