#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scenegen/emoji.hpp"
#include "scenegen/placement.hpp"
#include "scenegen/types.hpp"

namespace scenegen {

// Hierarchy-level queries carry an attempt number so a retried question is
// a distinct query (distinct fingerprint, distinct seeded draw).

struct RoomQuery {
  std::string prompt;
  int attempt = 1;
};

struct RegionQuery {
  std::string prompt;
  std::string room_type;
  double length = 0.0;
  double width = 0.0;
  int attempt = 1;
};

struct ObjectsQuery {
  std::string prompt;
  std::string room_type;
  std::string region_id;
  std::string function;
  double length = 0.0;
  double width = 0.0;
  std::vector<std::string> categories;  // catalog categories the reply may use
  int attempt = 1;
};

struct SupportedQuery {
  std::string prompt;
  std::string room_type;
  ObjectSpec floor_object;
  std::vector<std::string> categories;
  int attempt = 1;
};

/// Pick a pose option for a region's anchor.
struct AnchorQuery {
  std::string scope;
  std::string grid_prompt;
  RegionFrame frame;
  ObjectSpec object;
  AnchorRule rule = AnchorRule::AlongWall;
  std::vector<std::string> options;
  std::vector<std::string> excluded;
  int attempt = 1;
};

/// Local step 1: which side of the anchor.
struct SideQuery {
  std::string scope;
  std::string grid_prompt;
  PlacementProblem problem;
  std::vector<Side> excluded;
  int round = 1;  // global attempt this local search serves
  int attempt = 1;
};

/// Local steps 2 and 3: name `expected_count` contiguous emojis along `axis`.
struct CellsQuery {
  std::string scope;
  std::string grid_prompt;
  PlacementProblem problem;
  Side side = Side::Right;
  Axis axis = Axis::Columns;
  std::optional<Run> primary;  // set for the secondary step
  EmojiMap emoji_map;
  int expected_count = 0;
  std::vector<Run> excluded;
  int round = 1;
  int attempt = 1;
};

/// Thought evaluation after the side step.
struct SideEvalQuery {
  std::string scope;
  std::string grid_prompt;
  PlacementProblem problem;
  Side side = Side::Right;
  int round = 1;
  int attempt = 1;
};

/// Whole-room layout in one shot (IO ablation only).
struct FullLayoutQuery {
  RoomPlan plan;
};

using OracleQuery = std::variant<RoomQuery, RegionQuery, ObjectsQuery, SupportedQuery, AnchorQuery, SideQuery,
                                 CellsQuery, SideEvalQuery, FullLayoutQuery>;

enum class QueryKind { Room, Region, Objects, Supported, Anchor, Side, Cells, SideEval, FullLayout };

QueryKind kind_of(const OracleQuery& query);
std::string_view to_string(QueryKind kind);
bool is_spatial(QueryKind kind);

/// Reply text is kept verbatim; parsing happens in the engine.
struct OracleReply {
  QueryKind kind = QueryKind::Room;
  std::string text;
};

/// The thought generator. Implementations must tolerate concurrent calls.
class PlacementOracle {
 public:
  virtual ~PlacementOracle() = default;
  virtual OracleReply query(const OracleQuery& query) = 0;
};

struct EvalVerdict {
  bool ok = false;
  std::string rationale;
};

/// "yes ..." / "true ..." -> ok; anything else -> not ok.
EvalVerdict parse_eval_reply(std::string_view text);

/// Template-independent canonical form of a query (sorted-key JSON).
std::string structural_key(const OracleQuery& query);

std::string fnv1a64_hex(std::string_view text);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace scenegen
