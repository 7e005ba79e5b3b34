// scenegen: generate, ablate, render and replay room layouts.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "fmt/format.h"

#include "scenegen/error.hpp"
#include "scenegen/evaluator.hpp"
#include "scenegen/heuristic_oracle.hpp"
#include "scenegen/live_oracle.hpp"
#include "scenegen/pipeline.hpp"
#include "scenegen/prompts.hpp"
#include "scenegen/render.hpp"
#include "scenegen/scene_io.hpp"
#include "scenegen/transcript.hpp"

namespace fs = std::filesystem;
using namespace scenegen;

namespace {

constexpr int kExitUnsat = 2;
constexpr int kExitOracle = 3;
constexpr int kExitConfig = 4;

struct Options {
  std::string prompt;
  std::string prompt_file;
  std::string oracle = "det";
  std::uint64_t seed = 0;
  std::string mode = "tree";
  double cell_size = 0.25;
  int k_anchor = 3;
  int k_other = 1;
  int k_side = 2;
  int k_axis = 1;
  double p_adv = 0.0;
  std::string out_dir = "out";
  std::string transcript;
  std::string catalog;
  std::string data_dir;
  std::string templates;
  std::string live_config;
};

void add_search_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--mode", o.mode, "Search mode")->check(CLI::IsMember({"io", "cot", "tree"}));
  cmd->add_option("--cell-size", o.cell_size, "Grid cell size in meters");
  cmd->add_option("--k-anchor", o.k_anchor, "Attempts for the anchor layer");
  cmd->add_option("--k-other", o.k_other, "Attempts for other object layers");
  cmd->add_option("--k-side", o.k_side, "Attempts for the side step");
  cmd->add_option("--k-axis", o.k_axis, "Attempts for each axis step");
  cmd->add_option("--p-adv", o.p_adv, "Deterministic oracle: chance of answering with the worst legal option");
  cmd->add_option("--catalog", o.catalog, "Asset catalog file");
  cmd->add_option("--data-dir", o.data_dir, "Data directory (catalog, vocabulary, templates)");
  cmd->add_option("--templates", o.templates, "Prompt template directory");
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
}

SearchConfig search_config(const Options& o, std::uint64_t seed) {
  SearchConfig c;
  c.k_global_anchor = o.k_anchor;
  c.k_global_other = o.k_other;
  c.k_local_side = o.k_side;
  c.k_local_axis = o.k_axis;
  c.cell_size = o.cell_size;
  c.seed = seed;
  const auto mode = parse_mode(o.mode);
  if (!mode) throw ConfigError("unknown mode '" + o.mode + "'");
  c.mode = *mode;
  c.validate();
  return c;
}

struct Env {
  fs::path data_dir;
  AssetCatalog catalog;
  EmojiVocabulary vocabulary{std::vector<std::string>{}};
  PromptTemplates templates;
  OracleTemplates oracle_templates;
};

Env load_env(const Options& o) {
  Env env;
  env.data_dir = o.data_dir.empty() ? default_data_dir() : fs::path(o.data_dir);
  if (!fs::is_directory(env.data_dir)) throw ConfigError("data directory not found: " + env.data_dir.string());
  env.catalog = AssetCatalog::load(o.catalog.empty() ? env.data_dir / "catalog.json" : fs::path(o.catalog));
  env.vocabulary = EmojiVocabulary::load(env.data_dir / "emoji_vocab.txt");
  env.templates = PromptTemplates::load(o.templates.empty() ? env.data_dir / "templates" : fs::path(o.templates));
  env.oracle_templates = OracleTemplates::load(env.data_dir / "oracle_templates.json");
  return env;
}

std::string read_prompt(const Options& o) {
  if (!o.prompt.empty()) return o.prompt;
  if (o.prompt_file.empty()) throw ConfigError("give --prompt or --prompt-file");
  std::ifstream in(o.prompt_file);
  if (!in) throw ConfigError("cannot open prompt file " + o.prompt_file);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_outputs(const Scene& scene, const fs::path& dir) {
  fs::create_directories(dir);
  save_scene(scene, dir / "scene.json");
  save_trace(scene.trace, dir / "trace.jsonl");
  std::ofstream(dir / "scene.svg", std::ios::binary) << render_svg(scene);
}

int scene_exit(const Scene& scene) {
  for (const auto& r : scene.regions) {
    if (r.status == RegionStatus::Unsat) return kExitUnsat;
  }
  return 0;
}

void print_summary(const Scene& scene, const fs::path& dir) {
  const ValidityMetrics m = validity_metrics(scene);
  const SearchStats s = search_stats(scene.trace);
  fmt::print("{} {:.2f} x {:.2f} m, {} regions, {}/{} objects placed, {} oracle calls, {} backtracks\n",
             scene.plan.room_type, scene.plan.length, scene.plan.width, scene.plan.regions.size(),
             scene.placements.size(), scene.plan.object_count(), s.oracle_calls, s.backtracks);
  fmt::print("violations: overlap {} oob {} relation {} support {}\n", m.overlap_pairs, m.oob_objects,
             m.relation_violations, m.support_violations);
  fmt::print("wrote {}\n", (dir / "scene.json").string());
}

int cmd_generate(const Options& o, bool replay) {
  const Env env = load_env(o);
  const std::string prompt = read_prompt(o);
  GenerateOptions gen;
  gen.search = search_config(o, o.seed);

  std::unique_ptr<PlacementOracle> base;
  std::optional<LiveOracle> live;
  if (replay || o.oracle == "replay") {
    if (o.transcript.empty()) throw ConfigError("replay needs --transcript");
    base = std::make_unique<ReplayOracle>(Transcript::load(o.transcript), env.templates);
  } else if (o.oracle == "det") {
    base = std::make_unique<HeuristicOracle>(env.oracle_templates, HeuristicConfig{o.seed, o.p_adv});
  } else if (o.oracle == "live") {
    if (o.live_config.empty()) throw ConfigError("live oracle needs --live-config");
    base = std::make_unique<LiveOracle>(LiveOracle::from_env(LiveConfig::load(o.live_config), env.templates));
  } else {
    throw ConfigError("unknown oracle '" + o.oracle + "'");
  }

  const bool record = !replay && o.oracle != "replay" && !o.transcript.empty();
  std::unique_ptr<RecordingOracle> recorder;
  PlacementOracle* oracle = base.get();
  if (record) {
    TranscriptMeta meta{o.oracle == "live" ? LiveConfig::load(o.live_config).model : "heuristic", utc_now(), o.seed};
    recorder = std::make_unique<RecordingOracle>(*base, env.templates, meta);
    oracle = recorder.get();
  }
  const Scene scene = generate_scene(prompt, *oracle, env.catalog, env.vocabulary, gen);
  write_outputs(scene, o.out_dir);
  if (recorder) recorder->transcript().save(o.transcript);
  print_summary(scene, o.out_dir);
  return scene_exit(scene);
}

std::vector<std::string> read_prompt_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prompt set " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  if (out.empty()) throw ConfigError("prompt set is empty");
  return out;
}

int cmd_ablate(const Options& o, const std::string& prompts_file, int seeds, const std::vector<std::string>& modes) {
  const Env env = load_env(o);
  const auto prompts = read_prompt_set(prompts_file);
  if (seeds < 1) throw ConfigError("--seeds must be >= 1");
  std::vector<SearchMode> mode_list;
  for (const auto& m : modes) {
    const auto mode = parse_mode(m);
    if (!mode) throw ConfigError("unknown mode '" + m + "'");
    mode_list.push_back(*mode);
  }
  std::vector<AblationRun> runs;
  for (const auto& prompt : prompts) {
    for (int s = 0; s < seeds; ++s) {
      const auto seed = o.seed + static_cast<std::uint64_t>(s);
      for (SearchMode mode : mode_list) {
        Options mo = o;
        mo.mode = std::string(to_string(mode));
        AblationRun run;
        run.mode = mode;
        run.prompt = prompt;
        run.seed = seed;
        try {
          HeuristicOracle oracle(env.oracle_templates, HeuristicConfig{seed, o.p_adv});
          GenerateOptions gen;
          gen.search = search_config(mo, seed);
          const Scene scene = generate_scene(prompt, oracle, env.catalog, env.vocabulary, gen);
          run.metrics = validity_metrics(scene);
          run.stats = search_stats(scene.trace);
        } catch (const Error& e) {
          run.ok = false;
          run.error = e.what();
          fmt::print(stderr, "run failed ({}, seed {}, {}): {}\n", prompt, seed, to_string(mode), e.what());
        }
        runs.push_back(std::move(run));
      }
    }
  }
  const AblationReport report = ablation_report(runs, mode_list);
  fs::create_directories(o.out_dir);
  std::ofstream(fs::path(o.out_dir) / "ablation.tsv", std::ios::binary) << report.to_tsv();
  std::ofstream(fs::path(o.out_dir) / "ablation.txt", std::ios::binary) << report.to_text();
  fmt::print("{} runs\n{}", runs.size(), report.to_text());
  return 0;
}

int cmd_render(const std::string& scene_path, const std::string& trace_path, std::optional<std::size_t> step,
               const std::string& out) {
  const Scene scene = load_scene(scene_path);
  std::string svg;
  if (step) {
    const fs::path tp = trace_path.empty() ? fs::path(scene_path).parent_path() / "trace.jsonl" : fs::path(trace_path);
    svg = render_step_svg(scene, load_trace(tp), *step);
  } else {
    svg = render_svg(scene);
  }
  if (out.empty()) {
    std::cout << svg;
  } else {
    std::ofstream(out, std::ios::binary) << svg;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-room layout generation with a budgeted tree search"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Generate one room from a prompt");
  gen->add_option("--prompt", o.prompt, "Room description");
  gen->add_option("--prompt-file", o.prompt_file, "File holding the room description");
  gen->add_option("--oracle", o.oracle, "Oracle kind")->check(CLI::IsMember({"det", "live", "replay"}));
  gen->add_option("--transcript", o.transcript, "Transcript to record (det/live) or to replay");
  gen->add_option("--live-config", o.live_config, "Live oracle config file");
  add_search_flags(gen, o);

  auto* rep = app.add_subcommand("replay", "Regenerate a room from a recorded transcript");
  rep->add_option("--transcript", o.transcript, "Transcript file")->required();
  rep->add_option("--prompt", o.prompt, "Room description");
  rep->add_option("--prompt-file", o.prompt_file, "File holding the room description");
  add_search_flags(rep, o);

  std::string prompts_file;
  int seeds = 3;
  std::vector<std::string> modes{"io", "cot", "tree"};
  auto* abl = app.add_subcommand("ablate", "Compare IO, CoT and Tree over a prompt set");
  abl->add_option("--prompts", prompts_file, "Prompt set file, one prompt per line")->required();
  abl->add_option("--seeds", seeds, "Number of seeds, starting at --seed");
  abl->add_option("--modes", modes, "Modes to run")->delimiter(',');
  add_search_flags(abl, o);

  std::string scene_path;
  std::string trace_path;
  std::optional<std::size_t> step;
  std::string render_out;
  auto* ren = app.add_subcommand("render", "Render a scene file as SVG");
  ren->add_option("--scene", scene_path, "Scene file")->required();
  ren->add_option("--trace", trace_path, "Trace log (default: trace.jsonl next to the scene)");
  ren->add_option("--step", step, "Render the state after this many trace events");
  ren->add_option("--out", render_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return cmd_generate(o, false);
    if (*rep) return cmd_generate(o, true);
    if (*abl) return cmd_ablate(o, prompts_file, seeds, modes);
    if (*ren) return cmd_render(scene_path, trace_path, step, render_out);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const OracleFailure& e) {
    fmt::print(stderr, "oracle failure: {}\n", e.what());
    return kExitOracle;
  } catch (const std::out_of_range& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
