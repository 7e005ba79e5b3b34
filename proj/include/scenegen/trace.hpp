#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenegen/types.hpp"

namespace scenegen {

enum class EventKind { Proposed, Accepted, Rejected, Backtrack };

// Which decision an event belongs to. Global layers use Anchor/Object, the
// local search inside one object uses Side/PrimaryAxis/SecondaryAxis.
enum class SearchStep { Build, Anchor, Object, Side, PrimaryAxis, SecondaryAxis, Layout };

std::string_view to_string(EventKind kind);
std::string_view to_string(SearchStep step);
std::optional<EventKind> parse_event_kind(std::string_view text);
std::optional<SearchStep> parse_search_step(std::string_view text);

struct TracePose {
  Vec2 center;
  Yaw yaw = Yaw::Deg0;

  friend bool operator==(const TracePose&, const TracePose&) = default;
};

struct TraceEvent {
  std::string scope;  // "build", "region:<id>", "support:<object id>", "io"
  int layer = 0;
  SearchStep step = SearchStep::Object;
  int visit = 0;
  int attempt = 0;
  EventKind kind = EventKind::Proposed;
  std::string object_id;
  std::string detail;
  std::optional<TracePose> pose;  // set on Accepted/Backtrack of global layers, scope-local frame

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Append-only event log with per-kind counters.
class SearchTrace {
 public:
  void record(TraceEvent event);
  void count_oracle_call() { ++oracle_calls_; }
  void append(const SearchTrace& other);

  const std::vector<TraceEvent>& events() const { return events_; }
  int count(EventKind kind) const;
  std::map<EventKind, int> counters() const { return counters_; }
  int oracle_calls() const { return oracle_calls_; }

  friend bool operator==(const SearchTrace&, const SearchTrace&) = default;

 private:
  std::vector<TraceEvent> events_;
  std::map<EventKind, int> counters_;
  int oracle_calls_ = 0;
};

}  // namespace scenegen
