#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "injnorm/serialize.hpp"
#include "injnorm/tensor.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

std::string cli_path() {
    const char* p = std::getenv("INJNORM_CLI");
    REQUIRE_MESSAGE(p != nullptr, "INJNORM_CLI must point at the CLI binary");
    return p;
}

RunResult run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (std::fgets(buf, sizeof(buf), pipe) != nullptr) res.output += buf;
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "injnorm_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("help exits zero for every subcommand") {
    for (const char* sub : {"bound", "estimate", "verify", "cover", "sweep", "lemmas"}) {
        const RunResult res = run_cli(std::string(sub) + " --help");
        CHECK(res.exit_code == 0);
        CHECK(res.output.find("--help") != std::string::npos);
    }
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("bound subcommand on the zero tensor") {
    const fs::path dir = temp_dir();
    const fs::path in = dir / "zero.json";
    const fs::path out = dir / "bound.json";
    std::ofstream(in) << injnorm::tensor_to_json(injnorm::CoeffTensor::zeros(2, 3));
    const RunResult res =
        run_cli("bound --input " + in.string() + " --constant 1.0 --out " + out.string());
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("gaussian_upper").at("total").get<double>() == 0.0);
}

TEST_CASE("estimate reports are byte-identical across reruns and worker counts") {
    const fs::path dir = temp_dir();
    const fs::path in = dir / "b.json";
    std::ofstream(in) << injnorm::tensor_to_json(injnorm::CoeffTensor::constant(2, 5, 1.0));
    const std::string base =
        "estimate --input " + in.string() + " --trials 12 --starts 8 --seed 42 --out ";
    const fs::path out1 = dir / "r1.json";
    const fs::path out2 = dir / "r2.json";
    const fs::path out3 = dir / "r3.json";
    CHECK(run_cli(base + out1.string() + " --workers 1").exit_code == 0);
    CHECK(run_cli(base + out2.string() + " --workers 1").exit_code == 0);
    CHECK(run_cli(base + out3.string() + " --workers 4").exit_code == 0);
    const std::string r1 = slurp(out1);
    CHECK(r1 == slurp(out2));
    CHECK(r1 == slurp(out3));
    CHECK_FALSE(r1.empty());
}

TEST_CASE("malformed input exits 2 naming the field") {
    const fs::path dir = temp_dir();
    const fs::path in = dir / "bad.json";
    std::ofstream(in) << R"({"r":2,"d":2,"entries":[1,2,3]})";
    const RunResult res = run_cli("estimate --input " + in.string() + " --seed 1");
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("entries") != std::string::npos);

    std::ofstream(in, std::ios::trunc) << R"({"d":2,"entries":[1,2,3,4]})";
    const RunResult res2 = run_cli("bound --input " + in.string());
    CHECK(res2.exit_code == 2);
    CHECK(res2.output.find("\"r\"") != std::string::npos);

    CHECK(run_cli("estimate --input " + in.string()).exit_code == 2);  // missing --seed
    CHECK(run_cli("estimate --input " + in.string() + " --seed 1 --bogus 3").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("verify gates the exit code on verdicts") {
    const fs::path dir = temp_dir();
    const fs::path in = dir / "p.json";
    std::ofstream(in) << injnorm::tensor_to_json(injnorm::CoeffTensor::constant(2, 5, 0.3));

    const RunResult good = run_cli("verify --input " + in.string() +
                                   " --model bernoulli --trials 20 --seed 3 --out " +
                                   (dir / "ok.json").string());
    CHECK(good.exit_code == 0);

    // An adversarial concentration constant makes the tail claim false:
    // at t = 0.02 nearly every trial deviates, while the bound with
    // c = 20000 is ~2e-8.
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"tail_c": 20000.0, "tail_grid": [0.02]})";
    const RunResult bad = run_cli("verify --input " + in.string() +
                                  " --model bernoulli --trials 200 --seed 3 --config " + cfg.string() +
                                  " --out " + (dir / "bad.json").string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("margin") != std::string::npos);
}

TEST_CASE("cover subcommand on a metric space and on a tensor") {
    const fs::path dir = temp_dir();
    const fs::path space = dir / "space.json";
    std::ofstream(space) << R"({"n":3,"dist":[[0,1,2],[1,0,1],[2,1,0]]})";
    const RunResult res = run_cli("cover --input " + space.string() + " --epsilon 0.5 --seed 5");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j.at("cover_size").get<int>() == 3);
    CHECK(j.at("dudley").get<double>() > 0.0);

    const fs::path tensor = dir / "t.json";
    std::ofstream(tensor) << injnorm::tensor_to_json(injnorm::CoeffTensor::constant(2, 3, 1.0));
    const RunResult res2 = run_cli("cover --input " + tensor.string() + " --trials 64 --seed 5");
    CHECK(res2.exit_code == 0);
    const auto j2 = nlohmann::json::parse(res2.output);
    CHECK(j2.at("maurey").at("sample_count").get<int>() > 0);
    CHECK(j2.contains("grid_oracle_value"));
}

TEST_CASE("flags override config file values") {
    const fs::path dir = temp_dir();
    const fs::path in = dir / "cfg_b.json";
    std::ofstream(in) << injnorm::tensor_to_json(injnorm::CoeffTensor::constant(2, 3, 1.0));
    const fs::path cfg = dir / "precedence.json";
    std::ofstream(cfg) << R"({"trials": 5, "seed": 99})";

    const fs::path out1 = dir / "cfg_only.json";
    CHECK(run_cli("estimate --input " + in.string() + " --seed 1 --config " + cfg.string() + " --out " +
                  out1.string())
              .exit_code == 0);
    auto j1 = nlohmann::json::parse(slurp(out1));
    CHECK(j1.at("config").at("trials").get<int>() == 5);          // from config
    CHECK(j1.at("config").at("master_seed").get<int>() == 1);     // flag wins

    const fs::path out2 = dir / "flag_wins.json";
    CHECK(run_cli("estimate --input " + in.string() + " --seed 1 --trials 3 --config " + cfg.string() +
                  " --out " + out2.string())
              .exit_code == 0);
    auto j2 = nlohmann::json::parse(slurp(out2));
    CHECK(j2.at("config").at("trials").get<int>() == 3);
}

TEST_CASE("sweep emits deterministic csv") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "sweep_cfg.json";
    std::ofstream(cfg) << R"({"d_list":[4,6],"r_list":[1,2]})";
    const fs::path out1 = dir / "s1.csv";
    const fs::path out2 = dir / "s2.csv";
    const std::string base = "sweep --trials 10 --seed 8 --config " + cfg.string() + " --out ";
    CHECK(run_cli(base + out1.string() + " --workers 1").exit_code == 0);
    CHECK(run_cli(base + out2.string() + " --workers 3").exit_code == 0);
    const std::string csv = slurp(out1);
    CHECK(csv == slurp(out2));
    CHECK(csv.rfind("r,d,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 cells
}

TEST_CASE("lemmas sweep prints residual minima") {
    const RunResult res = run_cli("lemmas --sweep 120 --seed 7");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("stddev_lipschitz_min_residual") != std::string::npos);
    CHECK(res.output.find("sqrt_gap_grid_all_true true") != std::string::npos);
}
