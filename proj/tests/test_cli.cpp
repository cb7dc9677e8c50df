#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("hs_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args, const std::string& env = "") {
  fs::path d = scratch("io");
  std::string cmd = env + (env.empty() ? "" : " ") + HS_CLI_PATH + std::string(" ") + args +
                    " >" + (d / "out").string() + " 2>" + (d / "err").string();
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(d / "out"), slurp(d / "err")};
}

std::string cfg(const std::string& name) {
  return std::string("--config ") + HS_CONFIG_DIR + "/" + name + ".json";
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  fs::path p = scratch("cfg") / (name + ".json");
  std::ofstream(p) << j.dump();
  return p;
}

nlohmann::json load(const std::string& name) {
  return nlohmann::json::parse(slurp(fs::path(HS_CONFIG_DIR) / (name + ".json")));
}

struct ScratchCleanup {
  ~ScratchCleanup() {
    std::error_code ec;
    fs::remove_all(fs::temp_directory_path() / ("hs_cli_" + std::to_string(::getpid())), ec);
  }
} cleanup;

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, MirrorOfQuadricBlowup) {
  auto r = run("mirror " + cfg("p3_one_hypersurface_d2"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(first_line(r.out), "ϑ1·ϑ2·ϑ3·ϑ4 = (1 + t^[-E]·ϑ1)^2 · t^[L]");
}

TEST(Cli, ToricMirrors) {
  auto r2 = run("mirror " + cfg("p2_toric"));
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(first_line(r2.out), "ϑ1·ϑ2·ϑ3 = t^[L]");
  auto r3 = run("mirror " + cfg("p3_toric"));
  ASSERT_EQ(r3.code, 0) << r3.err;
  EXPECT_EQ(first_line(r3.out), "ϑ1·ϑ2·ϑ3·ϑ4 = t^[L]");
}

TEST(Cli, HeartOfPlaneBlowupHasSixWalls) {
  auto r = run("heart " + cfg("p3_one_hypersurface_d1"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("<(-1,-1,-1),(1,0,0)>  1+t^{-E}x  incoming"), std::string::npos);
  EXPECT_NE(r.out.find("<(-1,0,0),(0,1,0)>  1+t^{L-E}x"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
}

TEST(Cli, OrderFlagOverridesCutoff) {
  auto lo = run("scatter --order 1 " + cfg("p3_two_lines"));
  auto hi = run("scatter --order 3 " + cfg("p3_two_lines"));
  ASSERT_EQ(lo.code, 0);
  ASSERT_EQ(hi.code, 0);
  EXPECT_LT(lo.out.size(), hi.out.size());
}

TEST(Cli, BadConfigExitsOne) {
  auto r = run("scatter --config " + write_config("bad", {{"rank", 5}}).string());
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"], "config");
  EXPECT_EQ(j["type"], "ConfigError");
  EXPECT_FALSE(j["message"].get<std::string>().empty());
}

TEST(Cli, MissingFileAndUnknownKeyExitOne) {
  EXPECT_EQ(run("scatter --config /nonexistent/x.json").code, 1);
  auto j = load("p2_toric");
  j["colour"] = "blue";
  EXPECT_EQ(run("scatter --config " + write_config("extra", j).string()).code, 1);
  EXPECT_EQ(run("frobnicate " + cfg("p2_toric")).code, 1);
  EXPECT_EQ(run("scatter --order 0 " + cfg("p2_toric")).code, 1);
}

TEST(Cli, AdjacentCentersNeedOptIn) {
  auto j = load("p3_two_lines");
  j.erase("allow_adjacent_centers");
  auto r = run("scatter --config " + write_config("adj", j).string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("share a maximal cone"), std::string::npos);
}

TEST(Cli, BudgetExceededExitsTwo) {
  auto r = run("scatter " + cfg("p3_two_lines"), "HEARTSCATTER_BUDGET=1");
  EXPECT_EQ(r.code, 2);
  auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"], "computation");
  EXPECT_EQ(j["type"], "BudgetError");
}

TEST(Cli, NonGenericEndpointExitsTwo) {
  auto j = load("p2_blowup");
  j["endpoint"] = {"0", "1"};
  auto r = run("thetas --config " + write_config("ng", j).string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.err)["type"], "NonGenericError");
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* c : {"scatter", "heart", "thetas"}) {
    auto a = run(std::string(c) + " " + cfg("p3_d12"));
    auto b = run(std::string(c) + " " + cfg("p3_d12"));
    ASSERT_EQ(a.code, 0) << c << a.err;
    EXPECT_EQ(a.out, b.out) << c;
  }
}

TEST(Cli, OutDirectoryFiles) {
  fs::path d = scratch("out");
  for (const char* c : {"scatter", "heart", "thetas", "mirror", "render"})
    ASSERT_EQ(run(std::string(c) + " " + cfg("p3_two_lines") + " --out " + d.string()).code, 0)
        << c;
  for (const char* f : {"toric_walls.json", "toric_walls.txt", "heart_walls.json",
                        "heart_walls.txt", "thetas.json", "mirror.txt", "slice.svg"}) {
    ASSERT_TRUE(fs::exists(d / f)) << f;
    std::string body = slurp(d / f);
    EXPECT_FALSE(body.empty()) << f;
    EXPECT_EQ(body.find('\r'), std::string::npos) << f;
  }
  auto walls = nlohmann::json::parse(slurp(d / "heart_walls.json"));
  EXPECT_FALSE(walls.empty());
  auto th = nlohmann::json::parse(slurp(d / "thetas.json"));
  EXPECT_EQ(th["thetas"].size(), 4u);
  EXPECT_EQ(th["endpoint"].size(), 3u);
}

TEST(Cli, RenderProducesSvg) {
  auto r = run("render " + cfg("p3_two_lines") + " --slice 0,1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("<svg", 0), 0u);
  EXPECT_NE(r.out.find("</svg>"), std::string::npos);
  EXPECT_NE(r.out.find("class=\"broken-line\""), std::string::npos);
  EXPECT_EQ(run("render " + cfg("p3_two_lines") + " --slice 0-1").code, 1);
}
