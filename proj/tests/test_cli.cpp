#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "permucat_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  fs::path out = scratch() / "stdout.txt";
  std::string cmd = env + (env.empty() ? "" : " ") + "\"" PERMUCAT_BIN "\" " + args + " > \"" +
                    out.string() + "\" 2>/dev/null";
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out)};
}

}  // namespace

TEST_CASE("ghat through the command line") {
  Run r = run("ghat --n-max 8");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "permucat/1");
  CHECK(j["passed"] == true);
  std::string prev;
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("id"));
    CHECK(c.contains("paperRef"));
    CHECK(c.contains("status"));
    std::string id = c["id"];
    CHECK(prev < id);
    prev = id;
  }
  CHECK(run("ghat --n-max 8").out == r.out);
  CHECK(run("ghat --n-max 8 --jobs 1").out == r.out);
}

TEST_CASE("excoll example") {
  Run r = run("excoll --n 4 --order lex");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  bool found = false;
  for (const auto& c : j["checks"])
    if (c["id"] == "excoll.n4.count") {
      found = true;
      CHECK(c["witness"] == "9 objects");
      CHECK(c["status"] == "pass");
    }
  CHECK(found);
}

TEST_CASE("windows example") {
  fs::path file = scratch() / "w3.json";
  Run r = run("windows --n 3 --out \"" + file.string() + "\"");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(slurp(file));
  CHECK(j["passed"] == true);
  const auto& coll = j["attachments"]["collection.n3"];
  CHECK(coll["bundles"].size() == 6);
}

TEST_CASE("failing checks exit with 1") {
  // the literal bound on x_T fails for n divisible by 4
  CHECK(run("windows --n 4").code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("ghat --n-max 17").code == 2);
  CHECK(run("toric --n-max 8").code == 2);
  CHECK(run("excoll --n 7").code == 2);
  CHECK(run("windows --n 10").code == 2);
  CHECK(run("windows --n 2").code == 2);
  CHECK(run("excoll --n 4 --order other").code == 2);
  CHECK(run("ghat --n 3 --n-max 5").code == 2);
  CHECK(run("ghat --n-max x").code == 2);
}

TEST_CASE("cache directory from the environment") {
  fs::path env_dir = scratch() / "env_cache", flag_dir = scratch() / "flag_cache";
  fs::remove_all(env_dir);
  fs::remove_all(flag_dir);
  Run r = run("toric --n-max 3 --cache \"" + flag_dir.string() + "\"",
              "PERMUCAT_CACHE=\"" + env_dir.string() + "\"");
  CHECK(r.code == 0);
  CHECK(fs::exists(env_dir / "lm3.json"));
  CHECK_FALSE(fs::exists(flag_dir));
  // a second run reads the cached fans and reports the same thing
  Run again = run("toric --n-max 3", "PERMUCAT_CACHE=\"" + env_dir.string() + "\"");
  CHECK(again.out == r.out);
}
