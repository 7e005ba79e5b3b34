#include "scenegen/emoji.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "scenegen/error.hpp"

namespace scenegen {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_separator(char c) {
  return c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<std::string> tokenize(std::string_view response) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    // Strip quoting and trailing punctuation a chat model tends to add.
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && !is_name_char(current[b])) ++b;
    while (e > b && !is_name_char(current[e - 1])) --e;
    if (e > b) tokens.push_back(lower(std::string_view(current).substr(b, e - b)));
    current.clear();
  };
  for (char c : response) {
    if (is_separator(c)) {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

}  // namespace

EmojiVocabulary::EmojiVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& name : names_) {
    const std::string key = lower(name);
    if (name.empty() || !std::all_of(name.begin(), name.end(), is_name_char)) {
      throw Error("invalid emoji name '" + name + "'");
    }
    if (key == marker::kWall || key == marker::kBoundary || key == marker::kOccupied || key == marker::kAnchor ||
        key == marker::kFree) {
      throw Error("emoji name '" + name + "' collides with a grid marker");
    }
    if (!seen.insert(key).second) throw Error("duplicate emoji name '" + name + "'");
  }
}

EmojiVocabulary EmojiVocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open emoji vocabulary " + path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  return EmojiVocabulary(std::move(names));
}

EmojiMap::EmojiMap(std::vector<std::pair<int, std::string>> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
}

const std::string* EmojiMap::name_of(int cell) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), cell,
                             [](const auto& entry, int value) { return entry.first < value; });
  if (it == entries_.end() || it->first != cell) return nullptr;
  return &it->second;
}

std::optional<int> EmojiMap::cell_of(std::string_view name) const {
  const std::string key = lower(name);
  for (const auto& [cell, entry] : entries_) {
    if (lower(entry) == key) return cell;
  }
  return std::nullopt;
}

EmojiMap assign_emojis(std::span<const int> cells, const EmojiVocabulary& vocabulary) {
  std::vector<int> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() > vocabulary.size()) throw VocabularyExhausted(sorted.size(), vocabulary.size());
  std::vector<std::pair<int, std::string>> entries;
  entries.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) entries.emplace_back(sorted[i], vocabulary[i]);
  return EmojiMap(std::move(entries));
}

std::string serialize_grid_prompt(const OccupancyGrid& grid, const EmojiMap& emap) {
  const std::string wall(marker::kWall);
  const std::string left = grid.walls.left ? wall : std::string(marker::kBoundary);
  const std::string right = grid.walls.right ? wall : std::string(marker::kBoundary);

  std::string out;
  auto ring_row = [&] {
    for (int c = 0; c < grid.cols + 2; ++c) {
      if (c > 0) out += ' ';
      out += wall;
    }
    out += '\n';
  };
  ring_row();
  for (int row = grid.rows - 1; row >= 0; --row) {
    out += left;
    for (int col = 0; col < grid.cols; ++col) {
      out += ' ';
      const int idx = grid.index(row, col);
      switch (grid.at(row, col)) {
        case CellState::Occupied: out += marker::kOccupied; break;
        case CellState::AnchorOccupied: out += marker::kAnchor; break;
        case CellState::Free:
          if (const std::string* name = emap.name_of(idx)) {
            out += *name;
          } else {
            out += marker::kFree;
          }
          break;
      }
    }
    out += ' ';
    out += right;
    out += '\n';
  }
  ring_row();
  return out;
}

std::vector<int> parse_emoji_selection(std::string_view response, const EmojiMap& emap, std::size_t expected_count) {
  const std::vector<std::string> tokens = tokenize(response);
  if (tokens.empty()) throw ParseError(ParseError::Code::EmptyResponse, "empty oracle response");
  std::vector<int> cells;
  for (const auto& token : tokens) {
    const auto cell = emap.cell_of(token);
    if (!cell) throw ParseError(ParseError::Code::UnknownEmoji, "unknown emoji '" + token + "'");
    cells.push_back(*cell);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.size() != expected_count) {
    throw ParseError(ParseError::Code::WrongCount, "expected " + std::to_string(expected_count) + " emojis, got " +
                                                       std::to_string(cells.size()));
  }
  return cells;
}

RunSelection parse_run_selection(std::string_view response, const EmojiMap& emap, std::size_t expected_count,
                                 Axis axis, const OccupancyGrid& grid) {
  const std::vector<int> cells = parse_emoji_selection(response, emap, expected_count);
  RunSelection sel;
  const Cell first = grid.cell(cells.front());
  sel.fixed = axis == Axis::Columns ? first.row : first.col;
  sel.run.start = axis == Axis::Columns ? first.col : first.row;
  sel.run.count = static_cast<int>(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell c = grid.cell(cells[i]);
    const int fixed = axis == Axis::Columns ? c.row : c.col;
    const int moving = axis == Axis::Columns ? c.col : c.row;
    if (fixed != sel.fixed || moving != sel.run.start + static_cast<int>(i)) {
      throw ParseError(ParseError::Code::NonContiguous,
                       "selected cells do not form one contiguous run of " + std::string(to_string(axis)));
    }
  }
  return sel;
}

}  // namespace scenegen
