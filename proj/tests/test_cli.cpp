#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SADDLENODE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path(SADDLENODE_TMP_DIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli locates the quadratic demo saddle-node") {
    const fs::path dir = fresh_dir("bif");
    const int rc = run_cli("bifurcate --model quadratic-demo --lambda -1:1 --tol-lambda 1e-6 "
                           "--window -8:8 --out " + dir.string());
    REQUIRE(rc == 0);
    const json j = json::parse(slurp(dir / "bifurcate.json"));
    CHECK(std::abs(j["lambda_tilde"].get<double>()) <= 1e-6);
    CHECK(j.contains("config"));
    CHECK(j["config"]["command"] == "bifurcate");
}

TEST_CASE("cli signal evaluation emits t,value rows") {
    const fs::path dir = fresh_dir("sig");
    const fs::path cfg = dir / "cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({"signal": {"type": "plateau_hat", "k": 1.0}})";
    }
    REQUIRE(run_cli("signal --config " + cfg.string() + " --window -2:2 --samples-per-unit 2 --out " +
                    dir.string()) == 0);
    const std::string csv = slurp(dir / "signal.csv");
    CHECK(csv.rfind("t,value\n", 0) == 0);
    CHECK(csv.find("\n0,1\n") != std::string::npos);  // hat value 1 at t = 0
}

TEST_CASE("cli exit codes distinguish config and numerical failures") {
    CHECK(run_cli("bogus-command") == 2);
    CHECK(run_cli("bifurcate --model quadratic-demo --lambda nonsense") == 2);
    CHECK(run_cli("bifurcate --model no-such-model --lambda -1:1") == 2);
    const fs::path dir = fresh_dir("numfail");
    // both endpoints on the same side of the saddle-node: numerical refusal
    CHECK(run_cli("bifurcate --model quadratic-demo --lambda 1:2 --window -8:8 --out " +
                  dir.string()) == 3);
}

TEST_CASE("cli solve reports blow-up in its summary") {
    const fs::path dir = fresh_dir("solve");
    REQUIRE(run_cli("solve --model cubic-demo --lambda 1 --from 0 --x0 3 --to 40 --out " +
                    dir.string()) == 0);
    const json j = json::parse(slurp(dir / "solve.json"));
    CHECK(j["status"] == "complete");

    REQUIRE(run_cli("solve --model quadratic-demo --lambda -1 --from 0 --x0 0 --to 40 --out " +
                    dir.string()) == 0);
    const json j2 = json::parse(slurp(dir / "solve.json"));
    CHECK(j2["status"] == "blowup_minus");
}

TEST_CASE("embedded config reruns to identical output") {
    const fs::path a = fresh_dir("rt_a"), b = fresh_dir("rt_b");
    REQUIRE(run_cli("bifurcate --model quadratic-demo --lambda -1:1 --tol-lambda 1e-5 "
                    "--window -8:8 --out " + a.string()) == 0);
    json cfg = json::parse(slurp(a / "bifurcate.json"))["config"];
    cfg["out"] = b.string();
    const fs::path cfg_path = b / "rerun.json";
    {
        std::ofstream out(cfg_path);
        out << cfg.dump();
    }
    REQUIRE(run_cli("--config " + cfg_path.string()) == 0);
    CHECK(slurp(a / "bifurcate.csv") == slurp(b / "bifurcate.csv"));
}

TEST_CASE("parallel sweeps reduce deterministically") {
    const fs::path a = fresh_dir("par_1"), b = fresh_dir("par_2");
    const std::string base =
        "curve --preset fig1 --k 0:2:1 --tol-lambda 5e-3 --tol 1e-6 --out ";
    REQUIRE(run_cli(base + a.string() + " --jobs 1") == 0);
    REQUIRE(run_cli(base + b.string() + " --jobs 2") == 0);
    CHECK(slurp(a / "curve.csv") == slurp(b / "curve.csv"));
}
