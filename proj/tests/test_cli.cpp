#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("scenegen_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Result cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string(SCENEGEN_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<nlohmann::json> trace_lines(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST(Cli, GenerateWritesSceneTraceAndSvg) {
  const fs::path dir = scratch("generate");
  const Result r = cli("generate --prompt \"A medium bedroom\" --seed 1 --out-dir " + dir.string(), dir);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "scene.json"));
  EXPECT_TRUE(fs::exists(dir / "trace.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "scene.svg"));
  const auto scene = nlohmann::json::parse(slurp(dir / "scene.json"));
  EXPECT_EQ(scene["mode"], "tree");
  EXPECT_EQ(scene["seed"], 1);
  EXPECT_FALSE(scene["placements"].empty());
  EXPECT_NE(r.out.find("objects placed"), std::string::npos);
  EXPECT_EQ(count(slurp(dir / "scene.svg"), "class=\"object\""), scene["placements"].size());
}

TEST(Cli, PromptFileAndDeterminism) {
  const fs::path dir = scratch("prompt_file");
  std::ofstream(dir / "prompt.txt") << "A large kitchen with an island\n";
  ASSERT_EQ(cli("generate --prompt-file " + (dir / "prompt.txt").string() + " --seed 4 --out-dir " +
                    (dir / "a").string(), dir).code, 0);
  ASSERT_EQ(cli("generate --prompt \"A large kitchen with an island\" --seed 4 --out-dir " + (dir / "b").string(),
                dir).code, 0);
  EXPECT_EQ(slurp(dir / "a" / "scene.json"), slurp(dir / "b" / "scene.json"));
  EXPECT_EQ(slurp(dir / "a" / "trace.jsonl"), slurp(dir / "b" / "trace.jsonl"));
}

TEST(Cli, UsageErrorsExitFour) {
  const fs::path dir = scratch("usage");
  EXPECT_EQ(cli("generate --prompt x --oracle magic --out-dir " + dir.string(), dir).code, 4);
  EXPECT_EQ(cli("generate --out-dir " + dir.string(), dir).code, 4);
  EXPECT_EQ(cli("generate --prompt x --k-side 0 --out-dir " + dir.string(), dir).code, 4);
  EXPECT_EQ(cli("generate --prompt x --oracle live --out-dir " + dir.string(), dir).code, 4);
  EXPECT_EQ(cli("replay --prompt x --out-dir " + dir.string(), dir).code, 4);
  EXPECT_EQ(cli("frobnicate", dir).code, 4);
  EXPECT_EQ(cli("--help", dir).code, 0);
}

TEST(Cli, LiveWithoutKeyIsConfigError) {
  const fs::path dir = scratch("live");
  std::ofstream(dir / "live.json") << R"({"endpoint": "http://127.0.0.1:9/v1", "model": "m",
    "api_key_env": "SCENEGEN_CLI_TEST_NO_KEY"})";
  ::unsetenv("SCENEGEN_CLI_TEST_NO_KEY");
  const Result r = cli("generate --prompt x --oracle live --live-config " + (dir / "live.json").string() +
                           " --out-dir " + dir.string(), dir);
  EXPECT_EQ(r.code, 4) << r.out;
}

TEST(Cli, CotModeNeverBacktracks) {
  const fs::path dir = scratch("cot");
  for (int seed = 0; seed < 5; ++seed) {
    const Result r = cli("generate --prompt \"A small living room with a sofa\" --mode cot --p-adv 0.5 --seed " +
                             std::to_string(seed) + " --out-dir " + dir.string(), dir);
    ASSERT_TRUE(r.code == 0 || r.code == 2) << r.out;
    for (const auto& e : trace_lines(dir / "trace.jsonl")) ASSERT_NE(e["kind"], "backtrack");
  }
}

TEST(Cli, UnsatRegionExitsTwo) {
  // Tiny budgets and an always-worst oracle leave some region unsolved.
  const fs::path dir = scratch("unsat");
  bool saw = false;
  for (int seed = 0; seed < 20 && !saw; ++seed) {
    const Result r = cli("generate --prompt \"A small bedroom with a desk\" --mode cot --p-adv 1 --seed " +
                             std::to_string(seed) + " --out-dir " + dir.string(), dir);
    ASSERT_TRUE(r.code == 0 || r.code == 2) << r.out;
    if (r.code != 2) continue;
    saw = true;
    const auto scene = nlohmann::json::parse(slurp(dir / "scene.json"));
    bool unsat = false;
    for (const auto& region : scene["regions"]) unsat |= region["status"] == "unsat";
    EXPECT_TRUE(unsat);
  }
  EXPECT_TRUE(saw);
}

TEST(Cli, AblateCountsEveryRun) {
  const fs::path dir = scratch("ablate");
  std::ofstream(dir / "prompts.txt") << "# four prompts\nA small bedroom\nA modern kitchen\n\nA cozy bathroom\n"
                                        "A large living room\n";
  const Result r = cli("ablate --prompts " + (dir / "prompts.txt").string() + " --seeds 3 --p-adv 0.35 --out-dir " +
                           dir.string(), dir);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("36 runs"), std::string::npos) << r.out;
  const std::string tsv = slurp(dir / "ablation.tsv");
  EXPECT_EQ(count(tsv, "\n"), 4u);
  EXPECT_NE(tsv.find("\nio\t12\t"), std::string::npos) << tsv;
  EXPECT_NE(tsv.find("\ncot\t12\t"), std::string::npos);
  EXPECT_NE(tsv.find("\ntree\t12\t"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "ablation.txt"));
}

TEST(Cli, AblateModeSubset) {
  const fs::path dir = scratch("ablate_modes");
  std::ofstream(dir / "prompts.txt") << "A small bedroom\n";
  const Result r = cli("ablate --prompts " + (dir / "prompts.txt").string() + " --seeds 2 --modes cot,tree --out-dir " +
                           dir.string(), dir);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("4 runs"), std::string::npos);
  EXPECT_EQ(slurp(dir / "ablation.tsv").find("\nio\t"), std::string::npos);
  EXPECT_EQ(cli("ablate --prompts " + (dir / "prompts.txt").string() + " --modes fast --out-dir " + dir.string(), dir)
                .code, 4);
}

TEST(Cli, RenderSteps) {
  const fs::path dir = scratch("render");
  ASSERT_EQ(cli("generate --prompt \"A medium bedroom\" --seed 2 --out-dir " + dir.string(), dir).code, 0);
  const std::string scene = (dir / "scene.json").string();
  const auto events = trace_lines(dir / "trace.jsonl");
  const auto placements = nlohmann::json::parse(slurp(dir / "scene.json"))["placements"];

  ASSERT_EQ(cli("render --scene " + scene + " --step 0 --out " + (dir / "s0.svg").string(), dir).code, 0);
  EXPECT_EQ(count(slurp(dir / "s0.svg"), "class=\"object\""), 0u);
  EXPECT_NE(slurp(dir / "s0.svg").find("class=\"room\""), std::string::npos);

  ASSERT_EQ(cli("render --scene " + scene + " --step " + std::to_string(events.size()) + " --out " +
                    (dir / "end.svg").string(), dir).code, 0);
  EXPECT_EQ(count(slurp(dir / "end.svg"), "class=\"object\""), placements.size());

  // Up to and including the third floor acceptance: three rectangles.
  std::size_t accepted = 0;
  std::size_t step = 0;
  for (; step < events.size() && accepted < 3; ++step) {
    if (events[step]["kind"] == "accepted" && events[step]["scope"].get<std::string>().rfind("region:", 0) == 0) {
      ++accepted;
    }
  }
  ASSERT_EQ(accepted, 3u);
  ASSERT_EQ(cli("render --scene " + scene + " --step " + std::to_string(step) + " --out " + (dir / "s3.svg").string(),
                dir).code, 0);
  EXPECT_EQ(count(slurp(dir / "s3.svg"), "class=\"object\""), 3u);

  const Result bad = cli("render --scene " + scene + " --step " + std::to_string(events.size() + 1), dir);
  EXPECT_NE(bad.code, 0);
  const Result whole = cli("render --scene " + scene, dir);
  EXPECT_EQ(whole.code, 0);
  EXPECT_EQ(whole.out, slurp(dir / "scene.svg"));
}

TEST(Cli, RenderShowsObjectsLaterBacktracked) {
  const fs::path dir = scratch("render_backtrack");
  for (int seed = 0; seed < 40; ++seed) {
    const Result r = cli("generate --prompt \"A small living room with a sofa and a reading corner\" --p-adv 0.5 "
                         "--k-other 2 --seed " + std::to_string(seed) + " --out-dir " + dir.string(), dir);
    ASSERT_TRUE(r.code == 0 || r.code == 2) << r.out;
    const auto events = trace_lines(dir / "trace.jsonl");
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i]["kind"] != "backtrack") continue;
      const std::string id = events[i]["object"];
      const std::string scene = (dir / "scene.json").string();
      ASSERT_EQ(cli("render --scene " + scene + " --step " + std::to_string(i) + " --out " + (dir / "before.svg").string(),
                    dir).code, 0);
      ASSERT_EQ(cli("render --scene " + scene + " --step " + std::to_string(i + 1) + " --out " +
                        (dir / "after.svg").string(), dir).code, 0);
      const std::string tag = "data-id=\"" + id + "\"";
      EXPECT_NE(slurp(dir / "before.svg").find(tag), std::string::npos);
      EXPECT_EQ(slurp(dir / "after.svg").find(tag), std::string::npos);
      return;
    }
  }
  FAIL() << "no backtrack in 40 seeds";
}

TEST(Cli, RecordThenReplayIsByteIdentical) {
  const fs::path dir = scratch("replay");
  const std::string prompt = "\"A modern bathroom with a bathtub\"";
  const std::string transcript = (dir / "t.jsonl").string();
  ASSERT_EQ(cli("generate --prompt " + prompt + " --seed 5 --p-adv 0.3 --transcript " + transcript + " --out-dir " +
                    (dir / "rec").string(), dir).code, 0);
  ASSERT_TRUE(fs::exists(transcript));
  ASSERT_EQ(cli("replay --prompt " + prompt + " --seed 5 --transcript " + transcript + " --out-dir " +
                    (dir / "rep").string(), dir).code, 0);
  EXPECT_EQ(slurp(dir / "rec" / "scene.json"), slurp(dir / "rep" / "scene.json"));
  EXPECT_EQ(slurp(dir / "rec" / "trace.jsonl"), slurp(dir / "rep" / "trace.jsonl"));
  EXPECT_EQ(slurp(dir / "rec" / "scene.svg"), slurp(dir / "rep" / "scene.svg"));
  // Another prompt asks questions the transcript never saw.
  const Result miss = cli("replay --prompt \"A large bedroom\" --seed 5 --transcript " + transcript + " --out-dir " +
                              (dir / "miss").string(), dir);
  EXPECT_EQ(miss.code, 3) << miss.out;
}
