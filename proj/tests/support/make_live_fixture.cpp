// Regenerates tests/fixtures/live_*: drives LiveOracle against the local mock
// chat server, which answers with the heuristic policy, and records the
// exchange. Usage: make_live_fixture <fixtures dir>

#include <fstream>
#include <iostream>
#include <optional>

#include "json.hpp"
#include "mock_server.hpp"
#include "scenegen/heuristic_oracle.hpp"
#include "scenegen/live_oracle.hpp"
#include "scenegen/pipeline.hpp"
#include "scenegen/scene_io.hpp"
#include "scenegen/transcript.hpp"

using namespace scenegen;

namespace {

constexpr const char* kPrompt = "A cozy bedroom with a nightstand and a reading lamp";
constexpr std::uint64_t kSeed = 11;
constexpr double kAdversarial = 0.2;

// Remembers the query in flight so the server can answer it.
class Bridge : public PlacementOracle {
 public:
  Bridge(PlacementOracle& live, std::optional<OracleQuery>& pending) : live_(live), pending_(pending) {}
  OracleReply query(const OracleQuery& q) override {
    pending_ = q;
    return live_.query(q);
  }

 private:
  PlacementOracle& live_;
  std::optional<OracleQuery>& pending_;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_live_fixture <fixtures dir>\n";
    return 4;
  }
  const std::filesystem::path out = argv[1];
  const Resources res = Resources::load();
  const PromptTemplates templates = PromptTemplates::load(res.templates_dir);
  HeuristicOracle policy(OracleTemplates::load(res.oracle_templates), {kSeed, kAdversarial});

  std::optional<OracleQuery> pending;
  testenv::MockChatServer server([&](const nlohmann::json&, const std::string&) {
    return testenv::MockResponse{200, testenv::completion_body(policy.query(*pending).text)};
  });
  LiveConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.model = "mock-chat";
  LiveOracle live(cfg, templates, "fixture-key");
  Bridge bridge(live, pending);
  RecordingOracle recorder(bridge, templates, {cfg.model, "2026-01-01T00:00:00Z", kSeed});

  GenerateOptions opts;
  opts.search.seed = kSeed;
  const Scene scene = generate_scene(kPrompt, recorder, res.catalog, res.vocabulary, opts);

  std::filesystem::create_directories(out);
  recorder.transcript().save(out / "live_transcript.jsonl");
  save_scene(scene, out / "live_scene.json");
  std::ofstream(out / "live_fixture.json") << canonical_dump({{"prompt", kPrompt}, {"seed", kSeed}, {"mode", "tree"}})
                                           << "\n";
  std::cout << scene.placements.size() << " placements, " << recorder.transcript().records.size() << " records, "
            << server.requests() << " requests\n";
  return 0;
}
