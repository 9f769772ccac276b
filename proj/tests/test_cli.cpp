#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string cli()
{
    const char* p = std::getenv("RENORM_CLI");
    return p ? p : "./renorm";
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("renorm_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(1); }

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Exit status of the CLI with stdout captured to a file next to the outputs.
int run(const std::string& args, const fs::path& log)
{
    const int rc = std::system((cli() + " " + args + " > " + log.string() + " 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json small_checks()
{
    return {{"construction_samples", 50}, {"compatibility_samples", 100}, {"polyhedral_samples", 200},
            {"polyhedral_sandwich", 500},  {"lfc_points", 10},            {"lfc_neighbors", 100},
            {"equivalence_samples", 500},  {"modulus_pairs", 200},        {"diameter_samples", 2000},
            {"smooth", {{"sandwich_samples", 500}, {"gradient_samples", 50}, {"locality_centers", 50}, {"lfc_points", 10}}},
            {"lur", {{"sandwich_samples", 300}, {"lipschitz_pairs", 50}, {"z_samples", 100}, {"norm_samples", 200},
                     {"probe_points", 2}, {"probe_samples", 100}, {"modulus_points", 3}}}};
}

}  // namespace

TEST_CASE("p = 1 is rejected with exit code 2")
{
    const fs::path dir = scratch("p1");
    write_json(dir / "cfg.json", {{"d", 2}, {"base", {{"kind", "pnorm"}, {"p", 1.0}}}});
    CHECK(run("--config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string(), dir / "log.txt") == 2);
    CHECK(slurp(dir / "log.txt").find("p must exceed 1") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "certificate.json"));
}

TEST_CASE("malformed configurations exit with code 2")
{
    const fs::path dir = scratch("bad");
    write_json(dir / "unknown.json", {{"d", 2}, {"colour", "blue"}});
    CHECK(run("--config " + (dir / "unknown.json").string(), dir / "log1.txt") == 2);
    write_json(dir / "range.json", {{"d", 7}});
    CHECK(run("--config " + (dir / "range.json").string(), dir / "log2.txt") == 2);
    write_json(dir / "deps.json", {{"d", 2}, {"stages", {"smooth"}}});
    CHECK(run("--config " + (dir / "deps.json").string(), dir / "log3.txt") == 2);
    CHECK(run("--stages atlas,bogus --out " + (dir / "o").string(), dir / "log4.txt") == 2);
    CHECK(run("--config " + (dir / "missing.json").string(), dir / "log5.txt") == 2);
    CHECK(run("--no-such-flag", dir / "log6.txt") == 2);
    CHECK(run("--help", dir / "log7.txt") == 0);
}

TEST_CASE("atlas stage only")
{
    const fs::path dir = scratch("atlas");
    write_json(dir / "cfg.json", {{"d", 2}, {"checks", small_checks()}});
    const int rc = run("--config " + (dir / "cfg.json").string() + " --stages atlas --out " + (dir / "out").string(),
                       dir / "log.txt");
    // budget_iii fails under the default uncoupled policy.
    CHECK(rc == 1);
    REQUIRE(fs::exists(dir / "out" / "atlas.json"));
    REQUIRE(fs::exists(dir / "out" / "certificate.json"));
    const json cert = json::parse(slurp(dir / "out" / "certificate.json"));
    std::vector<std::string> names;
    for (auto it = cert["sections"].begin(); it != cert["sections"].end(); ++it) names.push_back(it.key());
    CHECK(names == std::vector<std::string>{"atlas", "space"});
    CHECK(fs::exists(dir / "out" / "repro.json"));
    const json atlas = json::parse(slurp(dir / "out" / "atlas.json"));
    CHECK(atlas.contains("content_hash"));
}

TEST_CASE("full run in the plane")
{
    const fs::path dir = scratch("full");
    write_json(dir / "cfg.json", {{"d", 2}, {"checks", small_checks()}});
    const int rc = run("--config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string(), dir / "log.txt");
    CHECK(rc == 1);
    const std::string log = slurp(dir / "log.txt");
    CHECK(log.find("FAIL budget_iii") != std::string::npos);
    CHECK(log.find("certificate fail ") != std::string::npos);

    const json cert = json::parse(slurp(dir / "out" / "certificate.json"));
    for (const char* s : {"space", "atlas", "polyhedral", "smooth", "lur", "verify"}) CHECK(cert["sections"].contains(s));
    CHECK(cert["authoritative"] == true);

    // Radii of the unit balls along each direction: P and B lie between (1 - eps) B_N and B_N.
    std::ifstream csv(dir / "out" / "ball_sections.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "norm,angle,radius");
    std::map<std::string, std::vector<double>> radius;
    while (std::getline(csv, line)) {
        std::stringstream ss(line);
        std::string name, angle, r;
        std::getline(ss, name, ',');
        std::getline(ss, angle, ',');
        std::getline(ss, r, ',');
        radius[name].push_back(std::stod(r));
    }
    REQUIRE(radius.size() == 4);
    for (const char* n : {"base", "mu_P", "mu_B", "lur"}) REQUIRE(radius[n].size() == 720);
    const double eps = 0.2;
    for (int i = 0; i < 720; ++i) {
        const double rb = radius["base"][i];
        CHECK(radius["mu_P"][i] <= rb * (1 + 1e-12));
        CHECK(radius["mu_P"][i] >= (1 - eps) * rb * (1 - 1e-12));
        CHECK(radius["mu_B"][i] <= radius["mu_P"][i] * (1 + 1e-12));
        CHECK(radius["mu_B"][i] >= (1 - eps) * rb * (1 - 1e-12));
        CHECK(radius["lur"][i] <= radius["mu_B"][i] * (1 + 1e-12));
    }
}

TEST_CASE("same seed gives the same certificate hash, tolerance scaling is flagged")
{
    const fs::path dir = scratch("repeat");
    write_json(dir / "cfg.json", {{"d", 1}, {"checks", small_checks()}});
    const std::string base = "--config " + (dir / "cfg.json").string();
    CHECK(run(base + " --out " + (dir / "a").string(), dir / "a.txt") == 0);
    CHECK(run(base + " --out " + (dir / "b").string(), dir / "b.txt") == 0);
    CHECK(slurp(dir / "a" / "certificate.json") == slurp(dir / "b" / "certificate.json"));
    CHECK(slurp(dir / "a" / "atlas.json") == slurp(dir / "b" / "atlas.json"));
    CHECK_FALSE(fs::exists(dir / "a" / "repro.json"));

    CHECK(run(base + " --seed 9 --out " + (dir / "c").string(), dir / "c.txt") == 0);
    CHECK(slurp(dir / "a" / "certificate.json") != slurp(dir / "c" / "certificate.json"));

    CHECK(run(base + " --tolerance-scale 2 --out " + (dir / "d").string(), dir / "d.txt") == 0);
    const json cert = json::parse(slurp(dir / "d" / "certificate.json"));
    CHECK(cert["authoritative"] == false);
    CHECK(slurp(dir / "d.txt").find("non-authoritative") != std::string::npos);
}
