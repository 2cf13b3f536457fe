// End-to-end checks of the holoquench executable: exit codes and diagnostics.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int         code = -1;
    std::string out, err;
};

std::string slurp(const fs::path &p) {
    std::ifstream     in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "holoquench_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run cli(const std::string &args) {
    const auto out = work_dir() / "stdout.txt", err = work_dir() / "stderr.txt";
    const std::string cmd =
        std::string("'") + HOLOQUENCH_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path write_file(const std::string &name, const std::string &text) {
    const auto p = work_dir() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

bool one_line(const std::string &s) { return !s.empty() && s.find('\n') == s.size() - 1; }

const std::string kConfigs = HOLOQUENCH_CONFIG_DIR;

} // namespace

TEST(Cli, HelpListsFlagsForEverySubcommand) {
    EXPECT_EQ(cli("--help").code, 0);
    const auto run = cli("run --help");
    EXPECT_EQ(run.code, 0);
    EXPECT_NE(run.out.find("--output"), std::string::npos);
    const auto build = cli("build-graph --help");
    EXPECT_NE(build.out.find("--probe"), std::string::npos);
    const auto fit = cli("fit --help");
    for(const char *flag : {"--model", "--two-sided", "--column", "--margin"})
        EXPECT_NE(fit.out.find(flag), std::string::npos) << flag;
    EXPECT_EQ(cli("probe-map --help").code, 0);
    EXPECT_NE(cli("").code, 0);
}

TEST(Cli, RunWritesOutputsAndFitReadsThemBack) {
    const auto dir = work_dir() / "disk3";
    const auto r   = cli("run '" + kConfigs + "/disk3_sample.cfg' -o '" + dir.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    for(const char *f : {"entropy.csv", "fit.txt", "graph.txt", "manifest.txt"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
    const auto fit = cli("fit '" + (dir / "entropy.csv").string() + "' --model cft_disk");
    ASSERT_EQ(fit.code, 0) << fit.err;
    EXPECT_NE(fit.out.find("model = cft_disk"), std::string::npos);
    EXPECT_NE(fit.out.find(slurp(dir / "fit.txt").substr(0, 40)), std::string::npos);
}

TEST(Cli, BuildGraphMatchesGolden) {
    const auto r = cli("build-graph 'disk(3)'");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(std::string(HOLOQUENCH_GOLDEN_DIR) + "/disk3.edges"));
    const auto p = cli("build-graph 'disk(3)' --probe 2");
    EXPECT_EQ(p.code, 0);
    EXPECT_EQ(p.out.rfind("nodes 16", 0), 0u);
}

TEST(Cli, ProbeMapAcceptsConfigWithoutTask) {
    const auto cfg = write_file("probe.cfg", "geometry = disk(4)\nprobe_regions = small\n");
    const auto dir = work_dir() / "probe";
    const auto r   = cli("probe-map '" + cfg.string() + "' -o '" + dir.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "probe_small.csv"));
}

TEST(Cli, ConfigErrorsExitTwo) {
    const auto cfg = write_file("bad.cfg", "geometry = disk(3)\nmu = 0.2\ndepthh = 3\ntask = entropy_scan\n");
    const auto r   = cli("run '" + cfg.string() + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(one_line(r.err)) << r.err;
    EXPECT_NE(r.err.find("depthh"), std::string::npos);
    EXPECT_EQ(cli("run /nonexistent/x.cfg").code, 2);
}

TEST(Cli, IoErrorsExitThree) {
    const auto r = cli("fit /nonexistent/curve.csv --model cft_disk");
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(one_line(r.err)) << r.err;
    EXPECT_EQ(cli("run '" + kConfigs + "/disk3_sample.cfg' -o /proc/holoquench").code, 3);
}

TEST(Cli, FitFailuresExitFive) {
    std::string csv = "d,cov_x\n";
    for(int d = 1; d < 16; ++d) csv += std::to_string(d) + "," + (d % 2 ? "0.5" : "-0.5") + "\n";
    const auto r = cli("fit '" + write_file("alt.csv", csv).string() + "' --model power_law");
    EXPECT_EQ(r.code, 5);
    EXPECT_TRUE(one_line(r.err)) << r.err;
}

TEST(Cli, InvalidArgumentsExitSix) {
    const auto r = cli("build-graph 'torus(3)'");
    EXPECT_EQ(r.code, 6);
    EXPECT_TRUE(one_line(r.err)) << r.err;
    EXPECT_EQ(cli("build-graph 'disk(3)' --probe 12").code, 6);
    EXPECT_EQ(cli("fit x.csv --model gaussian").code, 6);
}
