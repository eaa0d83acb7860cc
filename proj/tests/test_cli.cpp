#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path tmp_dir()
{
    const fs::path p(PSSKIT_TMP);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args, const std::string& env = "")
{
    const fs::path err = tmp_dir() / "stderr.txt";
    const std::string cmd = env + " '" + std::string(PSSKIT_BIN) + "' " + args + " 2>'" + err.string() + "'";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::string write_family(const std::string& name, const std::string& text)
{
    const fs::path p = tmp_dir() / name;
    std::ofstream(p) << text;
    return "'" + p.string() + "'";
}

json without_timing(const std::string& out)
{
    json j = json::parse(out);
    j.erase("timing_ms");
    return j;
}

const std::string kMinimal2 = R"({"dim": 2, "vectors": [[1, 0], [0, 1], [-1, -1]]})";
const std::string kSkewed =
    R"({"dim": 4, "vectors": [[1,0,0,0],[0,1,0,0],[-1,-1,2,2],[1,1,-4,-4],[0,0,1,0],[0,0,0,1]]})";

}  // namespace

TEST_CASE("cm takes the ospb path on a maximal basis")
{
    const std::string f = write_family("max3.json", R"({"dim": 3, "vectors": [[1,0,0],[0,1,0],[0,0,1],[-1,0,0],[0,-1,0],[0,0,-1]]})");
    const Run r = run("cm " + f);
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["command"] == "cm");
    CHECK(j["result"]["method"] == "ospb");
    CHECK(std::abs(j["result"]["value"].get<double>() - 1.0 / std::sqrt(3.0)) < 1e-12);
    CHECK(j["input_digest"].get<std::string>().size() == 64);
    CHECK(j["seed"].is_null());
    CHECK(j.contains("tolerances"));
    CHECK(j.contains("timing_ms"));

    const Run g = run("cm " + f + " --method generic");
    REQUIRE(g.code == 0);
    CHECK(json::parse(g.out)["result"]["method"] == "generic");
}

TEST_CASE("cm falls back to enumeration on a non-orthogonal family")
{
    const Run r = run("cm " + write_family("ex.json", kSkewed));
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["result"]["method"] == "generic");

    const Run o = run("cm " + write_family("ex.json", kSkewed) + " --method ospb");
    CHECK(o.code == 1);
}

TEST_CASE("non-positive-spanning input exits 1")
{
    const Run r = run("cm " + write_family("half.json", R"({"dim": 2, "vectors": [[1, 0], [0, 1]]})"));
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["result"]["positively_spanning"] == false);

    const Run k = run("cmk " + write_family("m2.json", kMinimal2) + " --k 2");
    CHECK(k.code == 1);
    CHECK(json::parse(k.out)["result"]["status"] == "not_positive");
}

TEST_CASE("CSV input is accepted")
{
    const Run r = run("cm " + write_family("m2.csv", "1,0\n0,1\n-1,-1\n"));
    REQUIRE(r.code == 0);
    CHECK(std::abs(json::parse(r.out)["result"]["value"].get<double>() - 0.3826834323650898) < 1e-12);
}

TEST_CASE("check flags")
{
    const std::string m2 = write_family("m2.json", kMinimal2);
    const std::string doubled = write_family(
        "m2x2.json", R"({"dim": 2, "vectors": [[1, 0], [0, 1], [-1, -1], [1, 0], [0, 1], [-1, -1]]})");
    CHECK(run("check " + doubled + " --pkss 2").code == 0);
    CHECK(run("check " + doubled + " --pkb 2").code == 0);
    CHECK(run("check " + m2 + " --pkss 2").code == 1);
    CHECK(run("check " + m2 + " --pss").code == 0);
    CHECK(run("check " + m2 + " --pb").code == 0);
    CHECK(run("check " + m2 + " --pi").code == 0);
    CHECK(run("check " + m2 + " --ospb").code == 0);
    CHECK(run("check " + write_family("ex.json", kSkewed) + " --crit 0,0,0.5,0.5").code == 0);
    CHECK(run("check " + m2 + " --pss --pb").code == 2);
    CHECK(run("check " + m2).code == 2);
}

TEST_CASE("gen ospb is reproducible")
{
    const fs::path a = tmp_dir() / "gen_a.json";
    const fs::path b = tmp_dir() / "gen_b.json";
    REQUIRE(run("gen ospb --n 5 --blocks 2,3 --seed 7 -o '" + a.string() + "'").code == 0);
    REQUIRE(run("gen ospb --n 5 --blocks 2,3 --seed 7 -o '" + b.string() + "'").code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(json::parse(slurp(a))["vectors"].size() == 7);

    const Run env = run("gen ospb --n 5 --blocks 2,3", "PSSKIT_SEED=7");
    REQUIRE(env.code == 0);
    const json j = json::parse(env.out);
    CHECK(j["seed"] == 7);
    CHECK(j["result"]["family"] == json::parse(slurp(a)));

    const Run other = run("gen ospb --n 5 --blocks 2,3 --seed 8");
    CHECK(json::parse(other.out)["result"]["family"] != json::parse(slurp(a)));
}

TEST_CASE("reports are identical apart from timing")
{
    const std::string f = write_family("m3.json", R"({"dim": 3, "vectors": [[1,0,0],[0,1,0],[0,0,1],[-1,-1,-1],[1,1,0]]})");
    const Run a = run("cm " + f);
    const Run b = run("cm " + f);
    const Run c = run("cm " + f + " --jobs 4");
    REQUIRE(a.code == 0);
    CHECK(without_timing(a.out) == without_timing(b.out));
    CHECK(without_timing(a.out) == without_timing(c.out));

    const Run k1 = run("cmk " + f + " --k 1");
    const Run k4 = run("cmk " + f + " --k 1 --jobs 4");
    CHECK(without_timing(k1.out) == without_timing(k4.out));
}

TEST_CASE("blockwise build")
{
    const Run ok = run("build-pkss " + write_family("m2.json", kMinimal2) + " --k 2 --method blockwise");
    REQUIRE(ok.code == 0);
    const json j = json::parse(ok.out);
    CHECK(j["result"]["family"]["vectors"].size() == 6);
    CHECK(j["result"]["rotation_plans"].size() == 1);
    CHECK(j["seed"] == 0);

    const std::string max2 = write_family("max2.json", R"({"dim": 2, "vectors": [[1,0],[0,1],[-1,0],[0,-1]]})");
    const Run bad = run("build-pkss " + max2 + " --k 2 --method blockwise");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("one-dimensional") != std::string::npos);

    const fs::path out = tmp_dir() / "copies.json";
    REQUIRE(run("build-pkss " + max2 + " --k 2 --method copies -o '" + out.string() + "'").code == 0);
    CHECK(run("check '" + out.string() + "' --pkb 2").code == 0);
    CHECK(run("build-pkss " + max2 + " --k 2 --method global --seed 3").code == 0);
}

TEST_CASE("usage and input errors exit 2")
{
    CHECK(run("cm /nonexistent/family.json").code == 2);
    CHECK(run("cm " + write_family("bad.json", R"({"dim": 2, "vectors": [[1, 0], [0]]})")).code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("cmk " + write_family("m2.json", kMinimal2)).code == 2);
    CHECK(run("cmk " + write_family("m2.json", kMinimal2) + " --k 9").code == 2);
    CHECK(run("gen ospb --n 4 --blocks 2,1").code == 2);
    CHECK(run("cm " + write_family("m2.json", kMinimal2), "PSSKIT_SEED=abc").code == 2);
}

TEST_CASE("subset cap reports truncation")
{
    const std::string f = write_family(
        "max3x2.json",
        R"({"dim": 3, "vectors": [[1,0,0],[0,1,0],[0,0,1],[-1,0,0],[0,-1,0],[0,0,-1],[1,0,0],[0,1,0],[0,0,1],[-1,0,0],[0,-1,0],[0,0,-1]]})");
    const Run r = run("cmk " + f + " --k 3 --max-subsets 5");
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["result"]["error"] == "truncated");
}

TEST_CASE("generated families round trip through detection")
{
    for (int seed = 0; seed < 20; ++seed) {
        const fs::path p = tmp_dir() / "rt.json";
        const std::string gen = seed % 3 == 0   ? "gen maximal --n " + std::to_string(2 + seed % 4)
                                : seed % 3 == 1 ? "gen minimal --n " + std::to_string(2 + seed % 4)
                                                : "gen ospb --n 5 --blocks 1,2,2 --seed " + std::to_string(seed);
        REQUIRE(run(gen + " -o '" + p.string() + "'").code == 0);
        const Run d = run("detect-ospb '" + p.string() + "'");
        REQUIRE(d.code == 0);
        const json dj = json::parse(d.out);
        CHECK(dj["result"]["ospb"] == true);

        const Run fast = run("cm '" + p.string() + "'");
        const Run slow = run("cm '" + p.string() + "' --method generic");
        REQUIRE(fast.code == 0);
        REQUIRE(slow.code == 0);
        const double a = json::parse(fast.out)["result"]["value"];
        const double b = json::parse(slow.out)["result"]["value"];
        CHECK(std::abs(a - b) < 1e-9);
        CHECK(json::parse(fast.out)["input_digest"] == dj["input_digest"]);
    }
}

TEST_CASE("gram")
{
    const Run r = run("gram " + write_family("m2.json", kMinimal2));
    REQUIRE(r.code == 0);
    const json g = json::parse(r.out)["result"]["gram"];
    CHECK(g[2][2] == 2.0);
    CHECK(g[0][2] == -1.0);
}
