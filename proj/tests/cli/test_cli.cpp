#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(HAUSMETER_BIN_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) res.out.append(buf.data(), got);
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                std::string* header = nullptr) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header && header->empty()) {
      *header = line;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void compare_csv(const std::string& got, const std::string& golden) {
  std::string h1, h2;
  const auto a = parse_csv(got, &h1);
  const auto b = parse_csv(golden, &h2);
  CHECK(h1 == h2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const double x = std::strtod(a[i][j].c_str(), nullptr);
      const double y = std::strtod(b[i][j].c_str(), nullptr);
      if (std::isnan(x) && std::isnan(y)) continue;
      CHECK(std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)}));
    }
  }
}

const char* kGeo = R"('{"family":"geometric","q":0.5}')";

} // namespace

TEST_CASE("dim: geometric closed form via json output") {
  const RunResult r = run(std::string("dim --family ") + kGeo +
                          " --n 2 --format json --no-timestamp");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "moran");
  CHECK(std::fabs(j["h_lo"].get<double>() - 0.6942419136) < 1e-9);
  CHECK(std::fabs(j["h_hi"].get<double>() - 0.6942419136) < 1e-9);
}

TEST_CASE("dim: gauss pressure enclosure") {
  const RunResult r = run(
      "dim --family '{\"family\":\"gauss\"}' --n 2 --method pressure --depth 8 "
      "--format json --no-timestamp");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["h_lo"].get<double>() <= 0.5312805063);
  CHECK(j["h_hi"].get<double>() >= 0.5312805062);
}

TEST_CASE("dim: invalid n exits 2") {
  CHECK(run(std::string("dim --family ") + kGeo + " --n 0").code == 2);
  CHECK(run("dim --family '{\"family\":\"nope\"}' --n 2").code == 2);
}

TEST_CASE("dim: over-budget pressure exits 3") {
  const RunResult r = run(
      "dim --family '{\"family\":\"gauss\"}' --n 64 --method pressure --depth 8");
  CHECK(r.code == 3);
}

TEST_CASE("verify: exit codes follow the verdicts") {
  CHECK(run("verify --family '{\"family\":\"gauss2\"}' --conditions g6 "
            "--no-timestamp").code == 0);
  CHECK(run("verify --family '{\"family\":\"gauss\"}' --conditions g6 "
            "--no-timestamp").code == 1);
  CHECK(run(std::string("verify --family ") + kGeo +
            " --conditions c9 --no-timestamp").code == 2);
  // inconclusive without a failure: table family scan
  CHECK(run("verify --family '{\"family\":\"table\",\"b\":[1.0,0.5,0.25]}' "
            "--conditions c2 --no-timestamp").code == 4);
  CHECK(run(std::string("verify --family ") + kGeo +
            " --conditions c1 c2 --no-timestamp --format json").code == 0);
}

TEST_CASE("measure and density closed forms") {
  const RunResult m = run(std::string("measure --family ") + kGeo +
                          " --n 2 --interval 0 0.5 --format json --no-timestamp");
  CHECK(m.code == 0);
  const json jm = json::parse(m.out);
  CHECK(std::fabs(0.5 * (jm["measure_lo"].get<double>() + jm["measure_hi"].get<double>()) -
                  0.3819660113) < 1e-8);

  const RunResult d = run(std::string("density --family ") + kGeo +
                          " --n 2 --interval 0.25 1 --format json --no-timestamp");
  CHECK(d.code == 0);
  const json jd = json::parse(d.out);
  CHECK(std::fabs(0.5 * (jd["density_lo"].get<double>() + jd["density_hi"].get<double>()) -
                  1.2210619763) < 1e-8);
  CHECK(jd["tag"] == "grid");
}

TEST_CASE("hmeasure reports a certified estimate below one") {
  const RunResult r = run(std::string("hmeasure --family ") + kGeo +
                          " --n 2 --depth 6 --format json --no-timestamp");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["H_upper"].get<double>() <= 1.0 + 1e-8);
  CHECK(j["H_lower"].get<double>() <= j["H_upper"].get<double>());
  CHECK(j["certified"].get<bool>());
  CHECK(std::fabs(j["cover_sum_check"].get<double>() - 1.0) < 1e-8);
}

TEST_CASE("sweep matches the golden tables") {
  const std::filesystem::path golden_dir(HAUSMETER_GOLDEN_DIR);
  const RunResult geo = run(std::string("sweep --family ") + kGeo +
                            " --n-range 2:10:2 --depth 4 --no-timestamp");
  CHECK(geo.code == 0);
  compare_csv(geo.out, slurp(golden_dir / "sweep_geometric.csv"));

  const RunResult lur = run(
      "sweep --family '{\"family\":\"luroth\"}' --n-range 2:10:2 --depth 4 "
      "--no-timestamp");
  CHECK(lur.code == 0);
  compare_csv(lur.out, slurp(golden_dir / "sweep_luroth.csv"));

  const RunResult gau = run(
      "sweep --family '{\"family\":\"gauss\"}' --n-range 2:4:1 --depth 4 "
      "--no-timestamp");
  CHECK(gau.code == 0);
  compare_csv(gau.out, slurp(golden_dir / "sweep_gauss.csv"));
  CHECK(gau.out.find("# caveat") != std::string::npos);
}

TEST_CASE("sweep schema and determinism") {
  const std::string args = std::string("sweep --family ") + kGeo +
                           " --n-range 2:6:2 --depth 4 --no-timestamp";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out); // byte-identical without the timestamp
  std::string header;
  const auto rows = parse_csv(a.out, &header);
  CHECK(header == "n,h_lo,h_hi,gap_bound,c1_product,H_lower,H_upper,witness_left,witness_right");
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) REQUIRE(row.size() == 9);
  CHECK(run(std::string("sweep --family ") + kGeo + " --n-range 6:2:1").code == 2);
}

TEST_CASE("cache reuse reproduces the cold run") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "hausmeter_cache_test";
  std::filesystem::remove_all(dir);
  const std::string args = std::string("dim --family ") + kGeo +
                           " --n 12 --format json --no-timestamp --cache-dir " +
                           dir.string();
  const RunResult cold = run(args);
  CHECK(cold.code == 0);
  bool have_entry = false;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") have_entry = true;
  }
  CHECK(have_entry);
  const RunResult warm = run(args);
  CHECK(warm.out == cold.out);

  // env var takes precedence over the flag
  const std::filesystem::path env_dir =
      std::filesystem::temp_directory_path() / "hausmeter_cache_env";
  std::filesystem::remove_all(env_dir);
  const std::string env_cmd = "HAUSMETER_CACHE=" + env_dir.string() + " " +
                              std::string(HAUSMETER_BIN_PATH) + " dim --family " + kGeo +
                              " --n 13 --format json --no-timestamp --cache-dir " +
                              dir.string() + " >/dev/null 2>&1";
  REQUIRE(std::system(env_cmd.c_str()) == 0);
  CHECK(std::filesystem::exists(env_dir));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(env_dir);
}
