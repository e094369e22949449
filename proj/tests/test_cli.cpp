#include "gaugeworks/json_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using namespace gaugeworks;

namespace {

const std::string kBin = GAUGEWORKS_BIN;

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) res.out += buf;
    const int rc = pclose(pipe);
    res.status = WEXITSTATUS(rc);
    return res;
}

std::string tmp_path(const std::string& name) { return "/tmp/gaugeworks_clitest_" + name; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

// reports must be byte-identical apart from the wall-time field
std::string strip_wall_time(const std::string& text) {
    Json j = Json::parse(text);
    j.erase("wall_time_ms");
    return j.dump(2);
}

}  // namespace

TEST_CASE("cli builds a system and verifies the mass bracket") {
    const auto sys_path = tmp_path("system.json");
    const auto rep_path = tmp_path("mass.json");
    auto build = run("construct balanced --schedule 4,10000 --depth 2 --out " + sys_path);
    CHECK(build.status == 0);
    auto mass = run("verify mass --system " + sys_path + " --factor 8/1 --random 500 --seed 42 --report " + rep_path);
    CHECK(mass.status == 0);
    const Json rep = Json::parse(slurp(rep_path));
    CHECK(rep["check"] == "mass_distribution");
    CHECK(rep["pass"] == true);
    CHECK(rep["lower"] == "1/8");
    CHECK(rep["upper"] == "1/1");
    CHECK(rep["witness"].is_null());
    CHECK(rep["seed"] == 42);
}

TEST_CASE("cli exit codes: 2 on malformed input, 1 on tampered schedule") {
    const auto cover_path = tmp_path("cover.json");
    write_file(cover_path, R"({"rounds": [[{"left": "0/1", "right": "1/1000"}]]})");
    const auto sched_path = tmp_path("sched.json");
    CHECK(run("construct incomparable --cover " + cover_path + " --depth 2 --out " + sched_path)
              .status == 0);
    CHECK(run("verify null --schedule " + sched_path + " --cover " + cover_path).status == 0);
    CHECK(run("verify schedule --schedule " + sched_path + " --cover " + cover_path).status == 0);

    const auto bad_path = tmp_path("bad.json");
    write_file(bad_path, R"({"rounds": [[{"left": "0/1", "right": "3/0"}]]})");
    CHECK(run("verify null --schedule " + sched_path + " --cover " + bad_path).status == 2);

    Json sj = Json::parse(slurp(sched_path));
    sj["rho1"][0] = sj["systems"][0]["levels"][0]["r"];
    write_file(tmp_path("tampered.json"), sj.dump());
    const auto tampered =
        run("verify null --schedule " + tmp_path("tampered.json") + " --cover " + cover_path);
    CHECK(tampered.status == 1);
    CHECK(tampered.out.find("[FAIL]") != std::string::npos);
}

TEST_CASE("cli reports are byte-identical across reruns modulo wall time") {
    const auto cover_path = tmp_path("cover2.json");
    write_file(cover_path, R"({"rounds": [[{"left": "0/1", "right": "1/1000"}]]})");
    const auto r1 = tmp_path("rep1.json");
    const auto r2 = tmp_path("rep2.json");
    CHECK(run("construct incomparable --cover " + cover_path + " --depth 2 --report " + r1).status == 0);
    CHECK(run("construct incomparable --cover " + cover_path + " --depth 2 --report " + r2).status == 0);
    CHECK(strip_wall_time(slurp(r1)) == strip_wall_time(slurp(r2)));

    const auto d1 = tmp_path("dig1.json");
    const auto d2 = tmp_path("dig2.json");
    CHECK(run("digits boxdim --davies --depth 6 --report " + d1).status == 0);
    CHECK(run("digits boxdim --davies --depth 6 --report " + d2).status == 0);
    CHECK(strip_wall_time(slurp(d1)) == strip_wall_time(slurp(d2)));
}

TEST_CASE("reports are identical whatever GAUGEWORKS_THREADS says") {
    const auto sys_path = tmp_path("thr_system.json");
    REQUIRE(run("construct balanced --schedule 4,10000 --depth 2 --out " + sys_path).status == 0);
    const auto r1 = tmp_path("thr1.json");
    const auto r2 = tmp_path("thr2.json");
    const std::string base =
        " verify mass --system " + sys_path + " --random 4000 --seed 7 --report ";
    auto run_env = [&](const std::string& env, const std::string& rep) {
        const std::string cmd = env + " " + kBin + base + rep + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    CHECK(run_env("GAUGEWORKS_THREADS=1", r1) == 0);
    CHECK(run_env("GAUGEWORKS_THREADS=2", r2) == 0);
    CHECK(strip_wall_time(slurp(r1)) == strip_wall_time(slurp(r2)));
}

TEST_CASE("cli worked membership example") {
    const auto rep = tmp_path("memb.json");
    CHECK(run("digits membership --bases 4,4,4 --constraint half_sum --digits 1,1,0 --report " +
              rep).status == 0);
    const Json j = Json::parse(slurp(rep));
    CHECK(j["member"] == true);
    CHECK(j["value"] == "5/16");
}

TEST_CASE("csv export of an empty box table is header-only") {
    const auto table = tmp_path("empty_table.json");
    write_file(table, R"({"rows": []})");
    const auto csv = tmp_path("empty.csv");
    CHECK(run("export csv --boxtable " + table + " --out " + csv).status == 0);
    CHECK(slurp(csv) == "delta,count,ratio_float\n");
}

TEST_CASE("cli emitted JSON reparses to an equal value") {
    const auto sys_path = tmp_path("rt_system.json");
    CHECK(run("construct balanced --schedule 4,2048 --depth 2 --out " + sys_path).status == 0);
    const Json j = Json::parse(slurp(sys_path));
    const LevelSystem sys = system_from(j);
    CHECK(Json::parse(system_json(sys).dump(2)) == j);
}
