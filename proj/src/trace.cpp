#include "scenegen/trace.hpp"

#include <array>

namespace scenegen {
namespace {

constexpr std::array<std::string_view, 4> kKindNames{"proposed", "accepted", "rejected", "backtrack"};
constexpr std::array<std::string_view, 7> kStepNames{"build", "anchor", "object", "side",
                                                     "primary", "secondary", "layout"};

}  // namespace

std::string_view to_string(EventKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }
std::string_view to_string(SearchStep step) { return kStepNames[static_cast<std::size_t>(step)]; }

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

std::optional<SearchStep> parse_search_step(std::string_view text) {
  for (std::size_t i = 0; i < kStepNames.size(); ++i) {
    if (kStepNames[i] == text) return static_cast<SearchStep>(i);
  }
  return std::nullopt;
}

void SearchTrace::record(TraceEvent event) {
  ++counters_[event.kind];
  events_.push_back(std::move(event));
}

void SearchTrace::append(const SearchTrace& other) {
  for (const auto& event : other.events_) record(event);
  oracle_calls_ += other.oracle_calls_;
}

int SearchTrace::count(EventKind kind) const {
  auto it = counters_.find(kind);
  return it == counters_.end() ? 0 : it->second;
}

}  // namespace scenegen
