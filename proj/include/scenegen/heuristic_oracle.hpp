#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "scenegen/oracle.hpp"

namespace scenegen {

/// Room/region/object proposals the deterministic oracle draws from.
/// Loaded from a JSON file (data/oracle_templates.json).
struct OracleTemplates {
  struct RoomType {
    std::string name;
    std::vector<std::string> keywords;
    // size word -> region variants; each variant is (function, fraction) pairs
    std::map<std::string, std::vector<std::vector<std::pair<std::string, double>>>> regions;
    // function -> object variants, each a JSON array of object proposals
    std::map<std::string, std::vector<nlohmann::json>> objects;
  };

  std::vector<RoomType> rooms;  // keyword match order
  std::string default_room;
  std::map<std::string, std::pair<double, double>> areas;  // size word -> area range proposed
  std::pair<double, double> aspect{1.0, 1.5};
  std::map<std::string, std::vector<nlohmann::json>> supported;  // supporter category -> variants

  static OracleTemplates load(const std::filesystem::path& path);
  static OracleTemplates from_json(const nlohmann::json& doc);
  const RoomType& room(const std::string& name) const;
  const RoomType& match(const std::string& prompt) const;
};

struct HeuristicConfig {
  std::uint64_t seed = 0;
  double p_adv = 0.0;  // probability of answering with the worst legal option
};

/// Offline stand-in for the language model. Every reply is a pure function
/// of (query, seed): the random stream for a query is seeded from the seed
/// and the query's structural key, so no state is shared between calls.
class HeuristicOracle : public PlacementOracle {
 public:
  HeuristicOracle(OracleTemplates templates, HeuristicConfig config);

  OracleReply query(const OracleQuery& query) override;

  const HeuristicConfig& config() const { return config_; }

 private:
  std::string room_reply(const RoomQuery& q, std::mt19937_64& rng) const;
  std::string region_reply(const RegionQuery& q, std::mt19937_64& rng) const;
  std::string objects_reply(const ObjectsQuery& q, std::mt19937_64& rng) const;
  std::string supported_reply(const SupportedQuery& q, std::mt19937_64& rng) const;
  std::string anchor_reply(const AnchorQuery& q, bool adversarial) const;
  std::string side_reply(const SideQuery& q, bool adversarial) const;
  std::string cells_reply(const CellsQuery& q, bool adversarial) const;
  std::string side_eval_reply(const SideEvalQuery& q) const;
  std::string full_layout_reply(const FullLayoutQuery& q, std::mt19937_64& rng) const;

  OracleTemplates templates_;
  HeuristicConfig config_;
};

/// Uniform double in [0, 1) from one 64-bit draw.
double unit_draw(std::mt19937_64& rng);

/// Ranked side choices for a side query (best first, excluded sides
/// removed), with their scores.
std::vector<std::pair<Side, int>> rank_sides(const PlacementProblem& problem, const std::vector<Side>& excluded);

/// Ranked legal runs for a cells query (best first): primary runs when
/// `primary` is empty, otherwise secondary runs within that primary run.
/// Each entry carries the completion the heuristic would name.
std::vector<CandidatePlacement> rank_runs(const PlacementProblem& problem, Side side,
                                          const std::optional<Run>& primary, const std::vector<Run>& excluded);

}  // namespace scenegen
