#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenegen/grid.hpp"

namespace scenegen {

// Grid markers. Vocabulary names must never collide with these.
namespace marker {
inline constexpr std::string_view kWall = "brick";
inline constexpr std::string_view kBoundary = "white_circle";
inline constexpr std::string_view kOccupied = "black_square";
inline constexpr std::string_view kAnchor = "red_square";
inline constexpr std::string_view kFree = "blank";
}  // namespace marker

/// Fixed ordered list of distinct emoji names.
class EmojiVocabulary {
 public:
  explicit EmojiVocabulary(std::vector<std::string> names);
  static EmojiVocabulary load(const std::filesystem::path& path);

  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }

 private:
  std::vector<std::string> names_;
};

/// Cell index -> emoji name, ordered by cell index (i.e. by (row, col)).
class EmojiMap {
 public:
  EmojiMap() = default;
  explicit EmojiMap(std::vector<std::pair<int, std::string>> entries);

  const std::vector<std::pair<int, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::string* name_of(int cell) const;
  std::optional<int> cell_of(std::string_view name) const;  // case-insensitive

  friend bool operator==(const EmojiMap&, const EmojiMap&) = default;

 private:
  std::vector<std::pair<int, std::string>> entries_;
};

/// Cells sorted ascending receive vocabulary entries in order.
/// Throws VocabularyExhausted when there are more cells than names.
EmojiMap assign_emojis(std::span<const int> cells, const EmojiVocabulary& vocabulary);

/// One line per row, top row first, tokens separated by single spaces,
/// framed by a ring of wall (or region-boundary) markers.
std::string serialize_grid_prompt(const OccupancyGrid& grid, const EmojiMap& emap);

/// Extracts comma/whitespace separated emoji names. Returns the selected
/// cells in map order. Throws ParseError (EmptyResponse, UnknownEmoji,
/// WrongCount).
std::vector<int> parse_emoji_selection(std::string_view response, const EmojiMap& emap, std::size_t expected_count);

struct RunSelection {
  Run run;       // along `axis`
  int fixed = 0;  // the row (Columns) or column (Rows) the named cells share
};

/// Like parse_emoji_selection, but the cells must also form one contiguous
/// run along `axis`. Throws ParseError::NonContiguous otherwise.
RunSelection parse_run_selection(std::string_view response, const EmojiMap& emap, std::size_t expected_count,
                                 Axis axis, const OccupancyGrid& grid);

}  // namespace scenegen
