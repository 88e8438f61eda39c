#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "macroreal/app/experiments.hpp"

using namespace macroreal;
using namespace macroreal::app;

namespace fs = std::filesystem;

namespace {

std::string csv_of(const RunResult &r) {
    std::ostringstream out;
    r.table.write(out);
    return out.str();
}

std::vector<std::string> column_values(const Table &t, const std::string &name) {
    const std::size_t c = t.column(name);
    std::vector<std::string> out;
    for (const auto &row : t.rows) out.push_back(row[c]);
    return out;
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliProcess : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::path(::testing::TempDir()) /
               ("macroreal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string &name, const std::string &text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    int run(const std::string &args) {
        const std::string cmd = std::string(MACROREAL_CLI) + " " + args + " >" + (dir_ / "stdout").string() +
                                " 2>" + (dir_ / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string err() const { return read_file(dir_ / "stderr"); }
    std::string out() const { return read_file(dir_ / "stdout"); }

    fs::path dir_;
};

} // namespace

TEST(Config, UnknownKeyIsNamed) {
    try {
        parse_config_text(R"({"experiment": "noon", "N": [2], "cutof": 3})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.key(), "cutof");
    }
}

TEST(Config, CutoffBelowNIsRejected) {
    try {
        parse_config_text(R"({"experiment": "typeone", "N": [2, 5], "cutoff": 4})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.key(), "cutoff");
    }
}

TEST(Config, RangeAndTypeChecks) {
    EXPECT_THROW(parse_config_text(R"({"experiment": "svetlichny", "N": [1]})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"experiment": "mlr-chsh", "alpha": [-1]})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"experiment": "mlr-chsh", "delta": [0.5]})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"experiment": "mlr-chsh", "angles": {"theta": 0}})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"experiment": "bogus"})"), ConfigError);
    EXPECT_THROW(parse_config_text(R"({"experiment": "noon", "N": [2]})", "svetlichny"), ConfigError);
    EXPECT_THROW(parse_config_text("{not json"), ConfigError);
}

TEST(Experiments, SvetlichnyRows) {
    const auto r = run_experiment(parse_config_text(R"({"experiment": "svetlichny", "N": [2, 3, 4]})"));
    const auto q = column_values(r.table, "quantum_value");
    ASSERT_EQ(q.size(), 3u);
    EXPECT_EQ(q[0], "2.82842712475");
    EXPECT_EQ(q[1], "5.65685424949");
    EXPECT_EQ(q[2], "11.313708499");
    EXPECT_EQ(r.table.header,
              (std::vector<std::string>{"N", "k", "quantum_value", "hybrid_bound", "violated"}));
}

TEST(Experiments, SweepRowCountIsGridSize) {
    const auto r = run_experiment(parse_config_text(
        R"({"experiment": "mlr-sweep", "alpha": [0, 2], "delta": [0, 0.5, 1], "cutoff_signal": 10, "grid_resolution": 8})"));
    EXPECT_EQ(r.table.rows.size(), 6u);
    EXPECT_EQ(r.table.header, (std::vector<std::string>{"r0", "alpha", "delta", "E", "E_delta", "P0_max",
                                                        "violated_delta"}));
    // delta = 0 rows carry E_delta = E.
    const auto e = column_values(r.table, "E");
    const auto ed = column_values(r.table, "E_delta");
    EXPECT_EQ(e[0], ed[0]);
    EXPECT_EQ(e[3], ed[3]);
}

TEST(Experiments, ColumnSets) {
    EXPECT_EQ(run_experiment(parse_config_text(R"({"experiment": "typeone", "N": [1], "cutoff": 2})")).table.header,
              (std::vector<std::string>{"N", "phase", "cutoff", "lhs", "rhs", "lhs_weighted", "violated"}));
    EXPECT_EQ(run_experiment(parse_config_text(R"({"experiment": "noon", "N": [2]})")).table.header,
              (std::vector<std::string>{"N", "moment_re", "moment_im"}));
    EXPECT_EQ(run_experiment(parse_config_text(
                                 R"({"experiment": "mlr-chsh", "cutoff_signal": 8, "grid_resolution": 6})"))
                  .table.header,
              (std::vector<std::string>{"r0", "alpha", "theta", "theta_p", "phi", "phi_p", "K_tp", "K_tpp",
                                        "K_tpt", "K_tptp", "E", "cutoff_signal", "cutoff_ancilla", "converged"}));
}

TEST(Experiments, ParallelMatchesSerial) {
    for (const char *text : {R"({"experiment": "typeone", "N": [1, 2, 3, 4], "phase": [0, 1], "cutoff": 4})",
                             R"({"experiment": "noon", "N": [1, 2, 3, 4, 5]})",
                             R"({"experiment": "svetlichny", "N": [2, 3, 4, 5], "k": "all"})",
                             R"({"experiment": "mlr-sweep", "alpha": [0, 2, 3], "delta": [0, 0.5], "cutoff_signal": 10, "grid_resolution": 8})"}) {
        const auto cfg = parse_config_text(text);
        EXPECT_EQ(csv_of(run_experiment(cfg, 1)), csv_of(run_experiment(cfg, 4))) << text;
        EXPECT_EQ(csv_of(run_experiment(cfg, 1)), csv_of(run_experiment(cfg, 1))) << text;
    }
}

TEST(Verify, ExactExperimentHasNoDrift) {
    const auto v = verify_experiment(parse_config_text(R"({"experiment": "svetlichny", "N": [2, 3, 4]})"));
    EXPECT_TRUE(v.passed);
    for (const auto &d : v.drift) {
        EXPECT_EQ(d.max_drift, 0.0) << d.column;
        EXPECT_FALSE(d.text_changed);
    }
}

TEST(Verify, PairCoherentChshIsStable) {
    const auto v = verify_experiment(parse_config_text(R"({"experiment": "mlr-chsh", "cutoff_signal": 20})"));
    EXPECT_TRUE(v.passed);
    for (const auto &d : v.drift) {
        if (d.gated) {
            EXPECT_LT(d.max_drift, 1e-3) << d.column;
        }
    }
}

TEST(Verify, TinyCutoffFails) {
    EXPECT_THROW(verify_experiment(
                     parse_config_text(R"({"experiment": "mlr-chsh", "cutoff_signal": 2, "grid_resolution": 4})")),
                 NonConvergence);
}

TEST_F(CliProcess, WritesCsvAndSummary) {
    const auto cfg = write_config("s.json", R"({"experiment": "svetlichny", "N": [2, 3, 4]})");
    const auto csv = dir_ / "s.csv";
    ASSERT_EQ(run("svetlichny --config " + cfg.string() + " --output " + csv.string()), 0) << err();
    const std::string text = read_file(csv);
    EXPECT_EQ(text.substr(0, text.find('\n')), "N,k,quantum_value,hybrid_bound,violated");
    EXPECT_NE(out().find("violation"), std::string::npos) << out();
    ASSERT_EQ(run("svetlichny --config " + cfg.string() + " --threads 4"), 0) << err();
    EXPECT_EQ(out(), text);
}

TEST_F(CliProcess, InvalidConfigExitsOne) {
    const auto cfg = write_config("t.json", R"({"experiment": "typeone", "N": [6], "cutoff": 3})");
    EXPECT_EQ(run("typeone --config " + cfg.string()), 1);
    EXPECT_NE(err().find("cutoff"), std::string::npos) << err();
    const auto unknown = write_config("u.json", R"({"experiment": "noon", "N": [2], "colour": 1})");
    EXPECT_EQ(run("noon --config " + unknown.string()), 1);
    EXPECT_NE(err().find("colour"), std::string::npos) << err();
    EXPECT_EQ(run("noon --config " + (dir_ / "missing.json").string()), 1);
}

TEST_F(CliProcess, NonConvergenceExitsTwo) {
    const auto cfg = write_config(
        "m.json", R"({"experiment": "mlr-chsh", "alpha": [6], "cutoff_signal": 10, "cutoff_ancilla": 4})");
    EXPECT_EQ(run("mlr-chsh --config " + cfg.string()), 2);
    EXPECT_NE(err().find("ancilla"), std::string::npos) << err();
    const auto tail = write_config("p.json", R"({"experiment": "mlr-chsh", "cutoff_signal": 3})");
    EXPECT_EQ(run("mlr-chsh --config " + tail.string()), 2);
    EXPECT_NE(err().find("tail"), std::string::npos) << err();
}

TEST_F(CliProcess, VerifyExitCodes) {
    const auto exact = write_config("s.json", R"({"experiment": "svetlichny", "N": [2, 3]})");
    EXPECT_EQ(run("verify --config " + exact.string()), 0) << err();
    const auto tiny = write_config("m.json", R"({"experiment": "mlr-chsh", "cutoff_signal": 2, "grid_resolution": 4})");
    EXPECT_EQ(run("verify --config " + tiny.string()), 2);
}
