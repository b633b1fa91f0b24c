#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("RSGDIM_CLI"); }

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  RunResult r;
  std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path write_config(const char* name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("command line endpoints" * doctest::skip(cli_path() == nullptr)) {
  REQUIRE(cli_path() != nullptr);

  SUBCASE("family-c0 prints the closed-form bound") {
    RunResult r = run("family-c0 --d1 2 --d 3 --r 0.5");
    CHECK(r.exit_code == 0);
    CHECK(std::abs(std::strtod(r.out.c_str(), nullptr) - std::pow(2.0, -22)) <
          1e-12 * std::pow(2.0, -22));
    CHECK(run("family-c0 --d1 2 --d 2 --r 0.5").exit_code == 2);
  }

  SUBCASE("list-examples names the catalog") {
    RunResult r = run("list-examples");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("pm2") != std::string::npos);
    CHECK(r.out.find("cantor3") != std::string::npos);
  }

  SUBCASE("config errors exit 2") {
    fs::path cfg = write_config("rsgdim_bad.json", R"({"multimap": "no_such_example"})");
    CHECK(run("check --config " + cfg.string() + " --out " +
              (fs::temp_directory_path() / "rsgdim_bad_out").string())
              .exit_code == 2);
    fs::path cfg2 = write_config("rsgdim_bad2.json", R"({"multimap": "pm2", "dimension": {}})");
    CHECK(run("dimension --config " + cfg2.string() + " --out " +
              (fs::temp_directory_path() / "rsgdim_bad_out").string())
              .exit_code == 2);
    fs::remove(cfg);
    fs::remove(cfg2);
  }

  SUBCASE("identical configurations produce identical artifacts") {
    fs::path cfg = write_config("rsgdim_repro.json", R"({
      "multimap": "cantor3",
      "seed": 4,
      "render": {"length": 20000, "viewport": {"center": [0.5, 0.0], "half_width": 0.6,
                 "half_height": 0.6, "px": 200, "py": 200}},
      "measure": {"truncation": 6}
    })");
    fs::path o1 = fs::temp_directory_path() / "rsgdim_repro1";
    fs::path o2 = fs::temp_directory_path() / "rsgdim_repro2";
    for (const fs::path& o : {o1, o2}) {
      CHECK(run("render --config " + cfg.string() + " --out " + o.string()).exit_code == 0);
      CHECK(run("measure --config " + cfg.string() + " --out " + o.string()).exit_code == 0);
    }
    for (const char* f : {"render.png", "render.json", "atoms.csv", "measure.json"})
      CHECK(slurp(o1 / f) == slurp(o2 / f));
    fs::remove(cfg);
    fs::remove_all(o1);
    fs::remove_all(o2);
  }

  SUBCASE("the resolved config echoed in the run report is accepted back") {
    fs::path cfg = write_config("rsgdim_echo.json", R"({"multimap": "cantor3",
      "measure": {"truncation": 4}})");
    fs::path o1 = fs::temp_directory_path() / "rsgdim_echo1";
    CHECK(run("measure --config " + cfg.string() + " --out " + o1.string()).exit_code == 0);

    // extract .config from the run report and feed it back in
    std::string rep = slurp(o1 / "run_report.json");
    auto pos = rep.find("\"config\": ");
    REQUIRE(pos != std::string::npos);
    int depth = 0;
    std::size_t start = rep.find('{', pos), end = start;
    for (std::size_t i = start; i < rep.size(); ++i) {
      if (rep[i] == '{') ++depth;
      if (rep[i] == '}' && --depth == 0) {
        end = i + 1;
        break;
      }
    }
    fs::path cfg2 = write_config("rsgdim_echo2.json", rep.substr(start, end - start));
    fs::path o2 = fs::temp_directory_path() / "rsgdim_echo2";
    CHECK(run("measure --config " + cfg2.string() + " --out " + o2.string()).exit_code == 0);
    CHECK(slurp(o1 / "measure.json") == slurp(o2 / "measure.json"));
    CHECK(slurp(o1 / "atoms.csv") == slurp(o2 / "atoms.csv"));
    fs::remove(cfg);
    fs::remove(cfg2);
    fs::remove_all(o1);
    fs::remove_all(o2);
  }
}
